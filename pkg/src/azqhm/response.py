"""Finite-time response coefficients.

``I(omega, t) = int G(nu) sin((nu - omega) t) / (nu - omega) dnu`` over the
whole real line, i.e. the bath spectrum seen through the energy-time
uncertainty window of a coupling that has lasted ``t``. As ``t`` grows the
kernel tends to ``pi * delta(nu - omega)`` and ``I -> pi G(omega)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels as _k
from .spectra import SpectralFunction, UsageError, eval_spectral


class NumericalError(RuntimeError):
    """A computation did not converge; partial results are attached."""


class QuadratureError(NumericalError):
    def __init__(self, msg, value=math.nan, error_estimate=math.nan, omega=math.nan,
                 t=math.nan):
        super().__init__(msg)
        self.value = value
        self.error_estimate = error_estimate
        self.omega = omega
        self.t = t


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000
    oscillation_splitting: bool = True

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise UsageError("quadrature tolerances must be positive")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 16:
            raise UsageError("max_subdivisions must be an integer >= 16")


DEFAULT_QUAD = QuadConfig()


@dataclass(frozen=True)
class ResponseValue:
    real_part: float
    omega: float
    t: float
    error_estimate: float
    imag_part: Optional[float] = None


def sinc_kernel(nu, omega, t):
    """sin((nu - omega) t) / (nu - omega), equal to t at nu = omega."""
    if t < 0:
        raise UsageError("sinc_kernel needs t >= 0")
    x = np.asarray(nu, dtype=float) - omega
    out = _k.kernel_vector(x, float(t), _k.KIND_SIN)
    return float(out) if out.ndim == 0 else out


def _window(f: SpectralFunction) -> float:
    return 10.0 * f.width


def _run(f, omega, t, kind, q):
    return _k.integrate(f.packed, f.intervals, f.breakpoints, float(omega), float(t), kind,
                        q.rel_tol, q.abs_tol, int(q.max_subdivisions),
                        bool(q.oscillation_splitting), _window(f))


def _raise_if_failed(status, value, err, omega, t):
    if status == _k.STATUS_MAXSUB:
        raise QuadratureError(f"quadrature did not converge within max_subdivisions "
                              f"(omega={omega}, t={t}, partial={value!r}, err={err:.3g})",
                              value, err, omega, t)
    if status == _k.STATUS_TAIL:
        raise QuadratureError(f"oscillatory tail did not decay (omega={omega}, t={t})",
                              value, err, omega, t)


def convolve_response(f: SpectralFunction, omega: float, t: float,
                      q: QuadConfig = DEFAULT_QUAD, imag: bool = False,
                      imag_sign: int = 1) -> ResponseValue:
    """I(omega, t) and optionally ``imag_sign * int G (cos(x t) - 1) / x``.

    The sign of the imaginary part depends on the operator ordering it is
    attached to, hence the parameter.
    """
    if not t > 0:
        raise UsageError("convolve_response needs t > 0")
    if imag_sign not in (1, -1):
        raise UsageError("imag_sign must be +1 or -1")
    val, err, status, _ = _run(f, omega, t, _k.KIND_SIN, q)
    _raise_if_failed(status, val, err, omega, t)
    im = None
    if imag:
        iv, ie, status, _ = _run(f, omega, t, _k.KIND_IMAG, q)
        _raise_if_failed(status, iv, ie, omega, t)
        im = imag_sign * iv
        err = err + ie
    return ResponseValue(float(val), float(omega), float(t), float(err), im)


def markovian_response(f: SpectralFunction, omega: float) -> float:
    return math.pi * eval_spectral(f, omega)


def profile_arrays(f: SpectralFunction, omega: float, ts: np.ndarray,
                   q: QuadConfig = DEFAULT_QUAD) -> tuple[np.ndarray, np.ndarray]:
    """Values and error estimates of I(omega, t) on ``ts``; t <= 0 gives 0."""
    ts = np.ascontiguousarray(ts, dtype=float)
    vals, errs, status, worst = _k.profile(f.packed, f.intervals, f.breakpoints,
                                           float(omega), ts, _k.KIND_SIN, q.rel_tol,
                                           q.abs_tol, int(q.max_subdivisions),
                                           bool(q.oscillation_splitting), _window(f))
    _raise_if_failed(status, vals[worst], errs[worst], omega, ts[worst])
    return vals, errs


def response_profile(f: SpectralFunction, omega: float, t_grid: Sequence[float],
                     q: QuadConfig = DEFAULT_QUAD) -> list[ResponseValue]:
    ts = np.asarray(t_grid, dtype=float)
    if ts.ndim != 1 or ts.size == 0:
        raise UsageError("t_grid must be a non-empty 1-d sequence")
    if ts[0] <= 0 or np.any(np.diff(ts) <= 0):
        raise UsageError("t_grid must be positive and strictly increasing")
    vals, errs = profile_arrays(f, omega, ts, q)
    return [ResponseValue(float(v), float(omega), float(t), float(e))
            for v, e, t in zip(vals, errs, ts)]
