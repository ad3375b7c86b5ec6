"""Hot and cold bath spectral functions with their KMS extension.

Both families place their features relative to the Floquet sidebands
``omega0 +/- delta_s``, so a spectral function is rebuilt for every
modulation frequency.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from . import kernels as _k


class UsageError(ValueError):
    """Invalid arguments or inconsistent inputs."""


class BathSide(enum.Enum):
    HOT = "hot"
    COLD = "cold"


@dataclass(frozen=True)
class LorentzPeak:
    weight: float = 1.0
    shift: float = 0.0
    width: float = 1.0


@dataclass(frozen=True)
class QuasiLorentzianSpec:
    """Sum of ``N`` truncated Lorentzians, detuned by ``shift`` past the sideband."""

    gamma0: float
    peaks: tuple[LorentzPeak, ...]
    epsilon: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "peaks", tuple(self.peaks))
        if len(self.peaks) < 1:
            raise UsageError("quasi-Lorentzian spectrum needs at least one peak")
        if any(p.width <= 0 for p in self.peaks):
            raise UsageError("peak widths must be positive")
        if any(p.weight < 0 for p in self.peaks) or not any(p.weight > 0 for p in self.peaks):
            raise UsageError("peak weights must be >= 0 with at least one > 0")
        if self.epsilon <= 0:
            raise UsageError("epsilon must be positive")

    @property
    def n_peaks(self) -> int:
        return len(self.peaks)


@dataclass(frozen=True)
class SuperOhmicSpec:
    gamma0: float
    s: float = 2.0
    nu_bar: float = 1.0
    delta: float = 0.1
    epsilon: float = 0.1

    def __post_init__(self):
        if self.s <= 1:
            raise UsageError("super-Ohmic exponent s must exceed 1")
        if self.nu_bar <= 0:
            raise UsageError("nu_bar must be positive")
        if self.delta <= 0:
            raise UsageError("delta must be positive")
        if self.epsilon <= 0:
            raise UsageError("epsilon must be positive")


SpectralModel = Union[QuasiLorentzianSpec, SuperOhmicSpec]

_SPLIT_LORENTZ = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0)
_SPLIT_SUPEROHMIC = (0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0)


@dataclass(frozen=True)
class SpectralFunction:
    """One-sided spectral density of a bath, extended to nu < 0 by KMS.

    Positions of the peaks (Lorentzian) or of the origin (super-Ohmic)
    depend on ``delta_s``.
    """

    side: BathSide
    model: SpectralModel
    beta: float
    omega0: float
    delta_s: float
    _packed: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.beta >= 0 or not math.isfinite(self.beta):
            raise UsageError("beta must be finite and >= 0")
        if self.omega0 <= 0:
            raise UsageError("omega0 must be positive")
        if not 0 < self.delta_s < self.omega0:
            raise UsageError("delta_s must lie in (0, omega0)")
        m = self.model
        if isinstance(m, SuperOhmicSpec):
            bound = min(self.delta_s, self.omega0 - self.delta_s) / 2
            if not m.delta < bound:
                raise UsageError(
                    f"super-Ohmic delta={m.delta} must be < min(delta_s, omega0 - delta_s)/2"
                    f" = {bound:g}")
        if self.side is BathSide.COLD and self.omega0 - m.epsilon <= m.epsilon:
            raise UsageError("cold support (epsilon, omega0 - epsilon) is empty")
        object.__setattr__(self, "_packed", self._pack())

    # -- structure -----------------------------------------------------

    @property
    def hot(self) -> bool:
        return self.side is BathSide.HOT

    @property
    def sideband(self) -> float:
        return self.omega0 + self.delta_s if self.hot else self.omega0 - self.delta_s

    def support(self) -> tuple[float, float]:
        """Open positive-frequency support ``(lo, hi)``; hi may be inf."""
        m = self.model
        if isinstance(m, QuasiLorentzianSpec):
            if self.hot:
                return self.omega0 + m.epsilon, math.inf
            return m.epsilon, self.omega0 - m.epsilon
        if self.hot:
            return self.omega0 + self.delta_s - m.delta, math.inf
        return m.epsilon, self.omega0 - self.delta_s + m.delta

    def peak_positions(self) -> list[float]:
        m = self.model
        if isinstance(m, QuasiLorentzianSpec):
            sign = 1.0 if self.hot else -1.0
            return [self.omega0 + sign * (self.delta_s + p.shift) for p in m.peaks]
        origin = self._superohmic_origin()
        return [origin + (1.0 if self.hot else -1.0) * m.s * m.nu_bar]

    def _superohmic_origin(self) -> float:
        m = self.model
        if self.hot:
            return self.omega0 + self.delta_s - m.delta
        return self.omega0 - self.delta_s + m.delta

    def _pack(self) -> np.ndarray:
        lo, hi = self.support()
        m = self.model
        head = np.zeros(_k.S_PEAKS)
        head[_k.S_BETA] = self.beta
        head[_k.S_LO] = lo
        head[_k.S_HI] = hi
        head[_k.S_GAMMA0] = m.gamma0
        if isinstance(m, QuasiLorentzianSpec):
            head[_k.S_KIND] = _k.FAMILY_LORENTZ
            head[_k.S_NPEAKS] = m.n_peaks
            centers = self.peak_positions()
            tail = [v for p, c in zip(m.peaks, centers) for v in (p.weight, c, p.width)]
            return np.concatenate((head, np.asarray(tail, dtype=float)))
        head[_k.S_KIND] = _k.FAMILY_SUPEROHMIC
        head[_k.S_ORIENT] = 1.0 if self.hot else -1.0
        head[_k.S_ORIGIN] = self._superohmic_origin()
        head[_k.S_S] = m.s
        head[_k.S_NUBAR] = m.nu_bar
        return head

    @property
    def packed(self) -> np.ndarray:
        return self._packed

    @cached_property
    def intervals(self) -> np.ndarray:
        """Support intervals on the full real line, KMS image included."""
        lo, hi = self.support()
        return np.array([[-hi, -lo], [lo, hi]], dtype=float)

    @cached_property
    def breakpoints(self) -> np.ndarray:
        """Points where quadrature panels should be split (peaks, scales, edges)."""
        lo, hi = self.support()
        m = self.model
        pts = []
        if isinstance(m, QuasiLorentzianSpec):
            for p, c in zip(m.peaks, self.peak_positions()):
                for k in _SPLIT_LORENTZ:
                    pts.extend((c - k * p.width, c + k * p.width))
        else:
            origin = self._superohmic_origin()
            sign = 1.0 if self.hot else -1.0
            pts.extend(origin + sign * k * m.nu_bar for k in _SPLIT_SUPEROHMIC)
        pos = np.array([p for p in pts if lo < p < hi], dtype=float)
        return np.unique(np.concatenate((-pos, pos)))

    @property
    def width(self) -> float:
        """Smallest spectral feature width (inverse of the correlation time)."""
        m = self.model
        if isinstance(m, QuasiLorentzianSpec):
            return min(p.width for p in m.peaks)
        return m.nu_bar

    def effective_support(self) -> tuple[float, float]:
        """Smallest positive interval outside which G < 1e-12 * gamma0."""
        lo, hi = self.support()
        m = self.model
        thresh = 1e-12 * m.gamma0
        if isinstance(m, QuasiLorentzianSpec):
            # c w^2 / (d^2 + w^2) / N < thresh  =>  |d| > w sqrt(c / (N thresh / gamma0) - 1)
            reach = [p.width * math.sqrt(max(p.weight / (m.n_peaks * 1e-12) - 1.0, 0.0))
                     for p in m.peaks]
            centers = self.peak_positions()
            a = min(c - r for c, r in zip(centers, reach))
            b = max(c + r for c, r in zip(centers, reach))
            return max(lo, a), min(hi, b)
        origin = self._superohmic_origin()
        # u^s e^{-u/nb} nb^{1-s} falls below 1e-12 beyond u_max
        u = m.s * m.nu_bar
        while u ** m.s / m.nu_bar ** (m.s - 1.0) * math.exp(-u / m.nu_bar) >= 1e-12:
            u *= 1.05
        if self.hot:
            return lo, origin + u
        return max(lo, origin - u), hi

    def __call__(self, nu):
        return eval_spectral(self, nu)


def make_spectral(side: BathSide | str, model: SpectralModel, beta: float, omega0: float,
                  delta_s: float) -> SpectralFunction:
    if isinstance(side, str):
        side = BathSide(side.lower())
    return SpectralFunction(side, model, float(beta), float(omega0), float(delta_s))


def eval_spectral(f: SpectralFunction, nu):
    """G(nu), including the step functions and the KMS branch for nu < 0.

    Accepts a scalar or an array; G(0) = 0.
    """
    if np.ndim(nu) == 0:
        return float(_k.g_vector(np.array([float(nu)]), f.packed)[0])
    return _k.g_vector(np.asarray(nu, dtype=float), f.packed)


_KMS_TOL = 1e-12


def check_kms(f, grid: Sequence[float]) -> bool:
    """True iff |G(-nu) - G(nu) exp(-nu beta)| <= 1e-12 max(1, G(nu)) on the grid.

    ``f`` may be a SpectralFunction or any callable with a ``beta``
    attribute.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise UsageError("check_kms needs a non-empty grid")
    if np.any(grid <= 0):
        raise UsageError("check_kms grid points must be positive")
    g = (lambda x: eval_spectral(f, x)) if isinstance(f, SpectralFunction) else f
    pos = np.array([g(float(x)) for x in grid])
    neg = np.array([g(float(-x)) for x in grid])
    return bool(np.all(np.abs(neg - pos * np.exp(-grid * f.beta)) <= _KMS_TOL * np.maximum(1.0, pos)))


def check_mutual_symmetry(hot: SpectralFunction, cold: SpectralFunction,
                          grid: Sequence[float]) -> bool:
    """True iff G_h(omega0 + nu) == G_c(omega0 - nu) within 1e-12 for grid nu in [0, omega0).

    Points inside the cold guard band ``omega0 - nu <= epsilon_c`` are
    skipped: the cutoff there has no hot counterpart by construction.
    """
    if not math.isclose(hot.omega0, cold.omega0, rel_tol=0, abs_tol=1e-15):
        raise UsageError("hot and cold spectra use different omega0")
    if not math.isclose(hot.delta_s, cold.delta_s, rel_tol=0, abs_tol=1e-15):
        raise UsageError("hot and cold spectra use different delta_s")
    nu = np.asarray(grid, dtype=float)
    nu = nu[(nu >= 0) & (nu < hot.omega0 - cold.model.epsilon)]
    gh = eval_spectral(hot, hot.omega0 + nu)
    gc = eval_spectral(cold, cold.omega0 - nu)
    return bool(np.all(np.abs(gh - gc) <= 1e-12))


def correlation_time(f: SpectralFunction) -> float:
    """Nominal bath memory time: 1/min width (Lorentzian) or 1/nu_bar."""
    return 1.0 / f.width


def total_weight(f: SpectralFunction) -> float:
    """Integral of G over the whole real line, KMS branch included."""
    val, _, status, _ = _k.integrate(f.packed, f.intervals, f.breakpoints, 0.0, 1.0,
                                     _k.KIND_ONE, 1e-12, 1e-15, 100_000, False, 1.0)
    return val
