"""Floquet sidebands of the sinusoidally modulated level splitting.

The modulation ``omega(t) = omega0 + lambda * Delta * sin(Delta t)`` puts the
phase factor ``exp(i lambda cos(Delta t))`` on the transition operator. Its
Fourier amplitudes are Bessel coefficients, so sideband ``q`` at
``omega0 + q Delta`` carries weight ``J_q(lambda)**2``.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import jv

from .spectra import UsageError


class WeightMode(enum.Enum):
    EXACT = "exact"
    SMALL_LAMBDA = "small_lambda"


@dataclass(frozen=True)
class ModulationParams:
    omega0: float
    lambda_: float
    delta_s: float

    def __post_init__(self):
        if not self.omega0 > 0:
            raise UsageError("omega0 must be positive")
        if not 0 <= self.lambda_ < 1:
            raise UsageError(f"lambda must lie in [0, 1), got {self.lambda_}")
        if not 0 < self.delta_s < self.omega0:
            raise UsageError(f"delta_s must lie in (0, omega0), got {self.delta_s}")
        if self.lambda_ > 0.3:
            warnings.warn(f"lambda = {self.lambda_} > 0.3: weak-modulation sidebands are "
                          "no longer accurate", stacklevel=2)

    @property
    def tau_s(self) -> float:
        return 2.0 * math.pi / self.delta_s

    @property
    def omega_hot(self) -> float:
        """Upper sideband omega0 + Delta, the one coupled to the hot bath."""
        return self.omega0 + self.delta_s

    @property
    def omega_cold(self) -> float:
        return self.omega0 - self.delta_s

    @property
    def p1(self) -> float:
        """Weight of the q = +-1 sidebands used by the machine (lambda^2/4)."""
        return self.lambda_ ** 2 / 4.0


@dataclass(frozen=True)
class Sideband:
    q: int
    frequency: float
    weight: float
    nonpositive: bool = False


def _check_qmax(q_max) -> int:
    if int(q_max) != q_max or q_max < 1:
        raise UsageError(f"q_max must be an integer >= 1, got {q_max}")
    return int(q_max)


def sideband_weights(m: ModulationParams, q_max: int = 1,
                     mode: WeightMode | str = WeightMode.EXACT) -> list[Sideband]:
    """Sidebands ``q = -q_max .. q_max`` with their weights P_q."""
    q_max = _check_qmax(q_max)
    mode = WeightMode(mode)
    qs = np.arange(-q_max, q_max + 1)
    lam = m.lambda_
    if mode is WeightMode.EXACT:
        weights = jv(qs, lam) ** 2
    else:
        weights = np.zeros(qs.shape)
        weights[qs == 0] = 1.0 - lam * lam / 2.0
        weights[np.abs(qs) == 1] = lam * lam / 4.0
    freqs = m.omega0 + qs * m.delta_s
    return [Sideband(int(q), float(f), float(p), bool(f <= 0))
            for q, f, p in zip(qs, freqs, weights)]


def sideband_frequencies(m: ModulationParams, q_max: int = 1) -> list[Sideband]:
    """omega_q for q in [-q_max, q_max]; entries with omega_q <= 0 are flagged."""
    q_max = _check_qmax(q_max)
    out = []
    for q in range(-q_max, q_max + 1):
        f = m.omega0 + q * m.delta_s
        out.append(Sideband(q, f, math.nan, f <= 0))
    return out
