import warnings

import numpy as np
import pytest

from _oracles import bessel_weights_fft
from azqhm.floquet import (ModulationParams, WeightMode, sideband_frequencies,
                           sideband_weights)
from azqhm.spectra import UsageError


def weights(m, q_max, mode):
    return {s.q: s.weight for s in sideband_weights(m, q_max, mode)}


def test_small_lambda_weights():
    w = weights(ModulationParams(20, 0.2, 10), 1, WeightMode.SMALL_LAMBDA)
    assert w[1] == pytest.approx(0.01) and w[-1] == pytest.approx(0.01)
    assert w[0] == pytest.approx(0.98)


def test_zero_lambda():
    for mode in WeightMode:
        w = weights(ModulationParams(20, 0.0, 10), 3, mode)
        assert w[0] == 1.0
        assert all(v == 0 for q, v in w.items() if q != 0)


def test_exact_against_fourier_oracle():
    m = ModulationParams(20, 0.2, 10)
    w = weights(m, 5, "exact")
    ref = bessel_weights_fft(0.2, 5)
    for q in w:
        assert w[q] == pytest.approx(ref[q], rel=1e-10, abs=1e-16)
    assert sum(w.values()) == pytest.approx(1.0, abs=1e-10)
    assert abs(w[1] - 0.01) / 0.01 < 0.01


@pytest.mark.parametrize("lam", [0.05, 0.1, 0.2, 0.3])
def test_normalization_symmetry_consistency(lam):
    w = weights(ModulationParams(20, lam, 10), 8, "exact")
    assert abs(sum(w.values()) - 1.0) < 1e-10
    for q in range(1, 9):
        assert w[q] == pytest.approx(w[-q], rel=1e-14)
    assert abs(w[1] - lam ** 2 / 4) / (lam ** 2 / 4) < lam ** 2 / 2


def test_frequencies():
    f = [s.frequency for s in sideband_frequencies(ModulationParams(20, 0.2, 10), 1)]
    assert f == [10, 20, 30]
    sb = sideband_frequencies(ModulationParams(20, 0.2, 10), 2)
    assert sb[0].q == -2 and sb[0].frequency == 0 and sb[0].nonpositive
    assert not any(s.nonpositive for s in sb[1:])
    f = [s.frequency for s in sideband_frequencies(ModulationParams(20, 0.2, 16), 1)]
    assert f == [4, 20, 36]


def test_usage_errors_and_warning():
    m = ModulationParams(20, 0.2, 10)
    with pytest.raises(UsageError):
        sideband_weights(m, 0)
    with pytest.raises(UsageError):
        sideband_frequencies(m, 0)
    with pytest.raises(UsageError):
        ModulationParams(20, 1.5, 10)
    with pytest.raises(UsageError):
        ModulationParams(20, 0.2, 20)
    with pytest.warns(UserWarning):
        ModulationParams(20, 0.5, 10)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ModulationParams(20, 0.3, 10)
    assert m.tau_s == pytest.approx(2 * np.pi / 10)
