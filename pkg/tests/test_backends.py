import json
import os
import subprocess
import sys

import numpy as np
import pytest

from azqhm import kernels
from azqhm._accel import HAVE_NUMBA
from azqhm.response import convolve_response
from azqhm.spectra import LorentzPeak, QuasiLorentzianSpec, SuperOhmicSpec, make_spectral

SPECTRA = [
    make_spectral("hot", QuasiLorentzianSpec(1.0, (LorentzPeak(1.0, 3.0, 0.2),)), 0.0005, 20, 12),
    make_spectral("cold", QuasiLorentzianSpec(2.0, (LorentzPeak(1.0, 1.0, 0.5),
                                                    LorentzPeak(0.5, 4.0, 0.1))), 0.005, 20, 8),
    make_spectral("hot", SuperOhmicSpec(1.0, 2.5, 1.0, 0.1, 0.1), 0.001, 20, 5),
    make_spectral("cold", SuperOhmicSpec(1.0, 2.0, 1.0, 0.1, 0.1), 0.002, 20, 5),
]

needs_numba = pytest.mark.skipif(not HAVE_NUMBA, reason="numba backend disabled")


def _args(f, omega):
    return f.packed, f.intervals, f.breakpoints, omega


@needs_numba
@pytest.mark.parametrize("f", SPECTRA)
@pytest.mark.parametrize("kind", [kernels.KIND_SIN, kernels.KIND_IMAG])
def test_integrate_backends_agree(f, kind):
    w = f.omega0 + f.delta_s if f.side.value == "hot" else f.omega0 - f.delta_s
    for omega in (w, -w):
        for t in (0.03, 1.0, 25.0, 300.0):
            a = kernels.integrate_nb(*_args(f, omega), t, kind, 1e-8, 1e-12, 2000, True, 2.0)
            b = kernels.integrate_np(*_args(f, omega), t, kind, 1e-8, 1e-12, 2000, True, 2.0)
            assert a[0] == pytest.approx(b[0], rel=1e-11, abs=1e-14)
            assert a[2] == b[2] and a[3] == b[3]


@needs_numba
@pytest.mark.parametrize("f", SPECTRA[:3])
def test_profile_backends_agree(f):
    ts = np.linspace(0.05, 12.0, 97)
    w = f.omega0 + f.delta_s if f.side.value == "hot" else f.omega0 - f.delta_s
    a = kernels.profile_nb(*_args(f, w), ts, kernels.KIND_SIN, 1e-8, 1e-12, 2000, True, 2.0)
    b = kernels.profile_np(*_args(f, w), ts, kernels.KIND_SIN, 1e-8, 1e-12, 2000, True, 2.0)
    np.testing.assert_allclose(a[0], b[0], rtol=1e-11, atol=1e-14)


def test_panel_kernels_agree():
    f = SPECTRA[0]
    lo = np.array([20.5, 31.9, 32.0, 33.0, 40.0])
    hi = np.array([21.5, 32.0, 32.1, 34.0, 80.0])
    for kind in (kernels.KIND_SIN, kernels.KIND_IMAG):
        for t in (0.1, 7.0):
            a = np.array(kernels._panels_np(lo, hi, 32.0, t, kind, f.packed))
            assert np.all(np.isfinite(a))
            if HAVE_NUMBA:
                b = np.array(kernels._panels_nb(lo, hi, 32.0, t, kind, f.packed))
                np.testing.assert_allclose(a[0], b[0], rtol=1e-12, atol=1e-16)


def test_disable_flag_selects_numpy_path():
    code = ("import json; from azqhm import _accel; from azqhm.response import convolve_response;"
            "from azqhm.spectra import *;"
            "f = make_spectral('hot', QuasiLorentzianSpec(1.0, (LorentzPeak(1.0, 3.0, 0.2),)),"
            " 0.0005, 20, 12);"
            "print(json.dumps([_accel.backend(), convolve_response(f, 32.0, 4.0).real_part]))")
    env = dict(os.environ, AZQHM_DISABLE_NUMBA="1")
    r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                       check=True)
    name, value = json.loads(r.stdout)
    assert name == "numpy"
    assert value == pytest.approx(convolve_response(SPECTRA[0], 32.0, 4.0).real_part,
                                  rel=1e-11)
