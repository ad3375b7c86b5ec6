import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import spectral_value, total_weight_quad
from azqhm.spectra import (BathSide, LorentzPeak, QuasiLorentzianSpec, SuperOhmicSpec,
                           UsageError, check_kms, check_mutual_symmetry, correlation_time,
                           eval_spectral, make_spectral, total_weight)


def lor(shift=3.0, width=0.2, eps=0.01, gamma0=1.0):
    return QuasiLorentzianSpec(gamma0, (LorentzPeak(1.0, shift, width),), eps)


def hot_lor(**kw):
    return make_spectral("hot", lor(**kw), 0.0005, 20.0, 5.0)


def test_lorentzian_peak_value():
    assert eval_spectral(hot_lor(), 28.0) == pytest.approx(1.0, abs=1e-15)


def test_hot_vanishes_below_omega0():
    assert eval_spectral(hot_lor(), 10.0) == 0.0


def test_kms_value_at_negative_frequency():
    assert eval_spectral(hot_lor(), -28.0) == pytest.approx(math.exp(-28 * 0.0005), rel=1e-15)
    assert eval_spectral(hot_lor(), -28.0) == pytest.approx(0.986098, abs=5e-7)


def test_zero_frequency_is_zero():
    assert eval_spectral(hot_lor(), 0.0) == 0.0


def test_superohmic_origin_and_peak():
    f = make_spectral("hot", SuperOhmicSpec(1.0, 2.0, 1.0, 0.1, 0.1), 0.0005, 20.0, 5.0)
    assert eval_spectral(f, 24.9) == 0.0
    nu = np.linspace(24.9, 40, 150_001)
    g = eval_spectral(f, nu)
    assert nu[np.argmax(g)] == pytest.approx(24.9 + 2.0, abs=1e-3)


def test_open_support_edges():
    f = hot_lor(eps=0.01)
    assert eval_spectral(f, 20.01) == 0.0
    assert eval_spectral(f, 20.0100001) > 0
    c = make_spectral("cold", lor(), 0.005, 20.0, 5.0)
    assert eval_spectral(c, 0.01) == 0.0
    assert eval_spectral(c, 19.99) == 0.0


def test_vector_matches_scalar_and_oracle():
    for side, model in (("hot", lor()), ("cold", lor(shift=1.0)),
                        ("hot", SuperOhmicSpec(1.3, 2.5, 0.7, 0.2, 0.05)),
                        ("cold", SuperOhmicSpec(1.3, 3.0, 0.7, 0.2, 0.05))):
        f = make_spectral(side, model, 0.003, 20.0, 6.0)
        nu = np.linspace(-45, 45, 9001)
        vec = eval_spectral(f, nu)
        ref = np.array([spectral_value(f, x) for x in nu])
        np.testing.assert_allclose(vec, ref, rtol=1e-13, atol=1e-300)
        assert eval_spectral(f, float(nu[1234])) == vec[1234]


@pytest.mark.parametrize("model", [lor(), SuperOhmicSpec(1.0, 2.0, 1.0, 0.1, 0.1)])
def test_kms_on_grids(model):
    f = make_spectral("hot", model, 0.01, 20.0, 5.0)
    assert check_kms(f, [1.0, 10.0, 25.0])
    assert check_kms(f, np.linspace(0.01, 60, 10_000))
    # grid straddling the super-Ohmic support edge
    assert check_kms(f, np.linspace(24.0, 26.0, 2001))


def test_kms_negative_control():
    f = hot_lor()

    class Corrupt:
        beta = f.beta

        def __call__(self, nu):
            v = eval_spectral(f, nu)
            return v * 1.01 if nu < 0 else v

    assert not check_kms(Corrupt(), [28.0])


def test_kms_empty_grid_is_usage_error():
    with pytest.raises(UsageError):
        check_kms(hot_lor(), [])


def test_mutual_symmetry():
    grid = np.linspace(0, 19.999, 5001)
    h = make_spectral("hot", lor(), 0.0005, 20.0, 5.0)
    c = make_spectral("cold", lor(), 0.005, 20.0, 5.0)
    assert check_mutual_symmetry(h, c, grid)
    c1 = make_spectral("cold", lor(shift=1.0), 0.005, 20.0, 5.0)
    assert not check_mutual_symmetry(h, c1, grid)
    so = SuperOhmicSpec(1.0, 2.0, 1.0, 0.1, 0.1)
    hs = make_spectral("hot", so, 0.0005, 20.0, 5.0)
    cs = make_spectral("cold", so, 0.005, 20.0, 5.0)
    assert check_mutual_symmetry(hs, cs, grid)


def test_mutual_symmetry_mismatch_is_usage_error():
    h = make_spectral("hot", lor(), 0.0005, 20.0, 5.0)
    c = make_spectral("cold", lor(), 0.005, 21.0, 5.0)
    with pytest.raises(UsageError):
        check_mutual_symmetry(h, c, [1.0])


def test_correlation_time():
    assert correlation_time(hot_lor()) == pytest.approx(5.0)
    so = make_spectral("hot", SuperOhmicSpec(1.0, 2.0, 1.0, 0.1, 0.1), 0.001, 20.0, 5.0)
    assert correlation_time(so) == 1.0
    two = QuasiLorentzianSpec(1.0, (LorentzPeak(1, 3, 0.2), LorentzPeak(1, 2, 0.5)))
    assert correlation_time(make_spectral("hot", two, 0.001, 20.0, 5.0)) == pytest.approx(5.0)


def test_invalid_specs():
    with pytest.raises(UsageError):
        QuasiLorentzianSpec(1.0, ())
    with pytest.raises(UsageError):
        QuasiLorentzianSpec(1.0, (LorentzPeak(1, 3, 0.0),))
    with pytest.raises(UsageError):
        QuasiLorentzianSpec(1.0, (LorentzPeak(0, 3, 0.2),))
    with pytest.raises(UsageError):
        SuperOhmicSpec(1.0, s=1.0)
    with pytest.raises(UsageError):
        # delta must stay below min(delta_s, omega0 - delta_s) / 2
        make_spectral("hot", SuperOhmicSpec(1.0, delta=3.0), 0.001, 20.0, 5.0)
    with pytest.raises(UsageError):
        make_spectral("hot", lor(), 0.001, 20.0, 25.0)


def test_effective_support_threshold():
    f = hot_lor()
    lo, hi = f.effective_support()
    assert eval_spectral(f, hi * 1.0001) < 1e-12
    assert eval_spectral(f, hi * 0.999) >= 1e-12 * 0.9
    so = make_spectral("hot", SuperOhmicSpec(1.0, 2.0, 1.0, 0.1, 0.1), 0.001, 20.0, 5.0)
    lo, hi = so.effective_support()
    assert eval_spectral(so, hi + 0.01) < 1e-12


def test_total_weight_against_oracle():
    for f in (hot_lor(), make_spectral("cold", SuperOhmicSpec(1.0, 2.0, 1.0, 0.1, 0.1),
                                       0.005, 20.0, 5.0)):
        assert total_weight(f) == pytest.approx(total_weight_quad(f), rel=1e-6)


spectra_strategy = st.builds(
    lambda fam, side, w0, frac, beta, a, b, c: (fam, side, w0, frac * w0, beta, a, b, c),
    st.sampled_from(["lor", "so"]), st.sampled_from([BathSide.HOT, BathSide.COLD]),
    st.floats(5, 40), st.floats(0.1, 0.9), st.floats(1e-4, 0.1),
    st.floats(0.05, 2), st.floats(0, 5), st.floats(0.05, 0.9))


def _build(params):
    fam, side, w0, d, beta, a, b, c = params
    if fam == "lor":
        model = QuasiLorentzianSpec(1.0, (LorentzPeak(1.0, b, a),), 0.01)
    else:
        model = SuperOhmicSpec(1.0, 2.0 + b / 5, a, c * min(d, w0 - d) / 2, 0.01)
    return make_spectral(side, model, beta, w0, d)


@settings(max_examples=60, deadline=None)
@given(spectra_strategy, st.lists(st.floats(-100, 100), min_size=1, max_size=50))
def test_property_nonnegative_and_kms(params, nus):
    f = _build(params)
    vals = eval_spectral(f, np.array(nus))
    assert np.all(vals >= 0)
    pos = [abs(x) for x in nus if x != 0]
    if pos:
        assert check_kms(f, pos)


@settings(max_examples=60, deadline=None)
@given(spectra_strategy)
def test_property_support_separation(params):
    fam, side, w0, d, beta, a, b, c = params
    hp = list(params)
    hp[1] = BathSide.HOT
    cp = list(params)
    cp[1] = BathSide.COLD
    h, cold = _build(hp), _build(cp)
    nu = np.linspace(1e-3, 3 * w0, 20_001)
    assert np.all(eval_spectral(h, nu) * eval_spectral(cold, nu) == 0)
