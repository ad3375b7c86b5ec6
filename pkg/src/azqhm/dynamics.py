"""Population dynamics of the modulated two-level working fluid.

Only the diagonal of the density matrix is evolved:

    dp1/dt = (lambda^2/4) [R0(t) p0 - R1(t) p1],   p0 = 1 - p1,

with ``R0`` built from the negative-frequency (absorption) responses and
``R1`` from the positive-frequency (emission) ones. The response clock
restarts at every recoupling; during decoupling gaps nothing changes.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .floquet import ModulationParams
from .response import (DEFAULT_QUAD, NumericalError, QuadConfig, convolve_response,
                       markovian_response, profile_arrays)
from .spectra import SpectralFunction, UsageError, correlation_time

P_SLACK = 1e-9


class DegenerateInputError(ValueError):
    pass


@dataclass(frozen=True)
class MachineState:
    p1: float
    t: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.p1 <= 1.0:
            raise UsageError(f"p1 must lie in [0, 1], got {self.p1}")

    @property
    def p0(self) -> float:
        return 1.0 - self.p1


@dataclass(frozen=True)
class CycleConfig:
    n: int = 10
    tbar: Optional[float] = None  # None means 2 tau_B
    cycles: int = 1
    oversample: int = 64

    def __post_init__(self):
        for name in ("n", "cycles", "oversample"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise UsageError(f"{name} must be an integer >= 1, got {v}")
        if self.tbar is not None and not self.tbar >= 0:
            raise UsageError("tbar must be >= 0")
        if self.n < 5:
            warnings.warn(f"n = {self.n} < 5: the secular treatment assumes many "
                          "modulation periods per stroke", stacklevel=2)

    def tau_c(self, m: ModulationParams) -> float:
        return self.n * m.tau_s

    def gap(self, tau_b: float) -> float:
        return 2.0 * tau_b if self.tbar is None else float(self.tbar)


@dataclass(frozen=True)
class RatePair:
    R0: float
    R1: float
    t: float


def _check_pair(hot: SpectralFunction, cold: SpectralFunction, m: ModulationParams):
    if hot.omega0 != m.omega0 or cold.omega0 != m.omega0:
        raise UsageError("spectra and modulation disagree on omega0")
    if hot.delta_s != m.delta_s or cold.delta_s != m.delta_s:
        raise UsageError("spectra and modulation disagree on delta_s")


def rates(hot: SpectralFunction, cold: SpectralFunction, m: ModulationParams, t: float,
          q: QuadConfig = DEFAULT_QUAD) -> RatePair:
    _check_pair(hot, cold, m)
    wh, wc = m.omega_hot, m.omega_cold
    r0 = convolve_response(hot, -wh, t, q).real_part + convolve_response(cold, -wc, t, q).real_part
    r1 = convolve_response(hot, wh, t, q).real_part + convolve_response(cold, wc, t, q).real_part
    return RatePair(r0, r1, t)


def markov_rates(hot, cold, m: ModulationParams) -> RatePair:
    wh, wc = m.omega_hot, m.omega_cold
    r0 = markovian_response(hot, -wh) + markovian_response(cold, -wc)
    r1 = markovian_response(hot, wh) + markovian_response(cold, wc)
    return RatePair(r0, r1, math.inf)


def gibbs_factors(m: ModulationParams, beta_h: float, beta_c: float) -> tuple[float, float]:
    return math.exp(-beta_h * m.omega_hot), math.exp(-beta_c * m.omega_cold)


def steady_state_w(m: ModulationParams, beta_h: float, beta_c: float) -> float:
    """Population ratio p1/p0 of the cyclic steady state for symmetric rates."""
    eh, ec = gibbs_factors(m, beta_h, beta_c)
    return 0.5 * (eh + ec)


def steady_state_w_general(Ih: float, Ic: float, m: ModulationParams, beta_h: float,
                           beta_c: float) -> float:
    if not Ih + Ic > 0:
        raise DegenerateInputError(f"Ih + Ic must be positive, got {Ih + Ic}")
    eh, ec = gibbs_factors(m, beta_h, beta_c)
    return (eh * Ih + ec * Ic) / (Ih + Ic)


def p1_from_w(w: float) -> float:
    return w / (1.0 + w)


def steady_conditions(hot: SpectralFunction, cold: SpectralFunction, m: ModulationParams,
                      cfg: CycleConfig) -> list[str]:
    """Human-readable violations of the conditions that keep rho_ss stationary."""
    out = []
    inv = 1.0 / cfg.tau_c(m)
    temps = [1.0 / b if b > 0 else math.inf for b in (hot.beta, cold.beta)]
    if inv > 0.1 * min(temps):
        out.append(f"1/tau_C = {inv:.4g} is not << min(T_h, T_c) = {min(temps):.4g}")
    if not inv < m.omega_cold:
        out.append(f"1/tau_C = {inv:.4g} is not < omega0 - delta_s = {m.omega_cold:.4g}")
    tau_b = max(correlation_time(hot), correlation_time(cold))
    if cfg.gap(tau_b) < tau_b:
        out.append(f"decoupling gap {cfg.gap(tau_b):.4g} < tau_B = {tau_b:.4g}")
    return out


@dataclass
class Trajectory:
    """Sampled evolution; ``stroke_id`` is -1 in gaps and -2 in the pre-history."""

    t: np.ndarray
    p1: np.ndarray
    R0: np.ndarray
    R1: np.ndarray
    stroke_id: np.ndarray

    @property
    def p0(self) -> np.ndarray:
        return 1.0 - self.p1

    def states(self) -> list[MachineState]:
        return [MachineState(float(p), float(t)) for p, t in zip(self.p1, self.t)]


def stroke_grid(m: ModulationParams, cfg: CycleConfig) -> tuple[np.ndarray, float]:
    """Half-step time grid of one coupling stroke and the RK4 step."""
    steps = cfg.n * cfg.oversample
    dt = m.tau_s / cfg.oversample
    return np.arange(2 * steps + 1) * (0.5 * dt), dt


def stroke_rates(hot, cold, m: ModulationParams, cfg: CycleConfig,
                 q: QuadConfig = DEFAULT_QUAD, markov: bool = False):
    """R0, R1 on the half-step grid of one stroke (same for every cycle)."""
    ts, dt = stroke_grid(m, cfg)
    if markov:
        r = markov_rates(hot, cold, m)
        r0 = np.full(ts.shape, r.R0)
        r1 = np.full(ts.shape, r.R1)
        return ts, dt, r0, r1
    wh, wc = m.omega_hot, m.omega_cold
    r0 = profile_arrays(hot, -wh, ts, q)[0] + profile_arrays(cold, -wc, ts, q)[0]
    r1 = profile_arrays(hot, wh, ts, q)[0] + profile_arrays(cold, wc, ts, q)[0]
    return ts, dt, r0, r1


def _rk4_stroke(p, coef, r0, r1, dt):
    """Fixed-step RK4 over one stroke; r0, r1 are sampled on half steps."""
    steps = (r0.shape[0] - 1) // 2
    out = np.empty(steps + 1)
    out[0] = p

    def rhs(k, y):
        return coef * (r0[k] * (1.0 - y) - r1[k] * y)

    for i in range(steps):
        k = 2 * i
        k1 = rhs(k, p)
        k2 = rhs(k + 1, p + 0.5 * dt * k1)
        k3 = rhs(k + 1, p + 0.5 * dt * k2)
        k4 = rhs(k + 2, p + dt * k3)
        p = p + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not -P_SLACK <= p <= 1.0 + P_SLACK:
            raise NumericalError(f"step rejected: p1 = {p!r} left [0, 1] at step {i + 1}")
        out[i + 1] = p
    return out


def relax_markov(hot, cold, m: ModulationParams, p1_init: float, duration: float,
                 samples: int = 201) -> Trajectory:
    """Exact relaxation under constant Markovian rates, ending at t = 0."""
    r = markov_rates(hot, cold, m)
    rate = m.p1 * (r.R0 + r.R1)
    p_inf = r.R0 / (r.R0 + r.R1) if r.R0 + r.R1 > 0 else p1_init
    s = np.linspace(0.0, duration, samples)
    p = p_inf + (p1_init - p_inf) * np.exp(-rate * s)
    n = s.shape[0]
    return Trajectory(s - duration, p, np.full(n, r.R0), np.full(n, r.R1),
                      np.full(n, -2, dtype=np.int64))


def evolve(hot: SpectralFunction, cold: SpectralFunction, m: ModulationParams,
           cfg: CycleConfig, init: MachineState, q: QuadConfig = DEFAULT_QUAD,
           markov: bool = False) -> Trajectory:
    """Run ``cfg.cycles`` coupling strokes separated by frozen gaps.

    Rows are written at every full RK4 step; each gap contributes one row at
    its end with ``stroke_id = -1``.
    """
    _check_pair(hot, cold, m)
    for msg in steady_conditions(hot, cold, m, cfg):
        warnings.warn(msg, stacklevel=2)
    ts, dt, r0, r1 = stroke_rates(hot, cold, m, cfg, q, markov)
    tau_b = max(correlation_time(hot), correlation_time(cold))
    gap = cfg.gap(tau_b)
    tau_c = cfg.tau_c(m)
    coef = m.p1
    rows_t, rows_p, rows_r0, rows_r1, rows_id = [], [], [], [], []
    p = init.p1
    t0 = init.t
    for c in range(cfg.cycles):
        traj = _rk4_stroke(p, coef, r0, r1, dt)
        rows_t.append(t0 + ts[::2])
        rows_p.append(traj)
        rows_r0.append(r0[::2])
        rows_r1.append(r1[::2])
        rows_id.append(np.full(traj.shape, c, dtype=np.int64))
        p = traj[-1]
        t0 = t0 + tau_c
        if gap > 0:
            t0 = t0 + gap
            rows_t.append(np.array([t0]))
            rows_p.append(np.array([p]))
            rows_r0.append(np.zeros(1))
            rows_r1.append(np.zeros(1))
            rows_id.append(np.array([-1], dtype=np.int64))
    return Trajectory(np.concatenate(rows_t), np.concatenate(rows_p),
                      np.concatenate(rows_r0), np.concatenate(rows_r1),
                      np.concatenate(rows_id))
