"""Heat currents, stroke averages, performance figures and the modulation sweep."""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.integrate import simpson

from .dynamics import CycleConfig, gibbs_factors, stroke_grid, steady_state_w
from .floquet import ModulationParams
from .response import (DEFAULT_QUAD, NumericalError, QuadConfig, convolve_response,
                       markovian_response, profile_arrays)
from .spectra import SpectralFunction, UsageError

THREADS_ENV = "AZQHM_THREADS"


class Regime(enum.Enum):
    HEAT_ENGINE = "HeatEngine"
    REFRIGERATOR = "Refrigerator"
    IDLE = "Idle"


@dataclass(frozen=True)
class InstantCurrents:
    J_h: float
    J_c: float
    W_dot: float
    t: float


@dataclass(frozen=True)
class Averages:
    """Stroke-averaged flows; ``eta`` is set only for engines, ``cop`` only for refrigerators."""

    Jh: float
    Jc: float
    W: float
    eta: float
    cop: float
    regime: Regime


_NAN_AVG = Averages(math.nan, math.nan, math.nan, math.nan, math.nan, Regime.IDLE)


@dataclass(frozen=True)
class PerformanceRecord:
    delta_s: float
    azd: Averages = _NAN_AVG
    markov: Averages = _NAN_AVG
    boost_power: float = math.nan
    boost_cooling: float = math.nan
    error: Optional[str] = None

    @property
    def Jh_avg(self):
        return self.azd.Jh

    @property
    def Jc_avg(self):
        return self.azd.Jc

    @property
    def W_avg(self):
        return self.azd.W

    @property
    def eta(self):
        return self.azd.eta

    @property
    def cop(self):
        return self.azd.cop

    @property
    def regime(self):
        return self.azd.regime


def current_factors(m: ModulationParams, w: float, beta_h: float, beta_c: float):
    """Prefactors a_h, a_c with J_h = a_h I_h and J_c = a_c I_c."""
    eh, ec = gibbs_factors(m, beta_h, beta_c)
    a_h = m.p1 * m.omega_hot * (eh - w) / (w + 1.0)
    a_c = m.p1 * m.omega_cold * (ec - w) / (w + 1.0)
    return a_h, a_c


def heat_currents(hot: SpectralFunction, cold: SpectralFunction, m: ModulationParams,
                  w: float, t: float, q: QuadConfig = DEFAULT_QUAD) -> InstantCurrents:
    if not t > 0:
        raise UsageError("heat_currents needs t > 0")
    if not w >= 0:
        raise UsageError("w must be >= 0")
    a_h, a_c = current_factors(m, w, hot.beta, cold.beta)
    jh = a_h * convolve_response(hot, m.omega_hot, t, q).real_part
    jc = a_c * convolve_response(cold, m.omega_cold, t, q).real_part
    return InstantCurrents(jh, jc, -(jh + jc), t)


def quantum_speed_limit(omega0: float, T_h: float, T_c: float) -> float:
    if not T_c > 0:
        raise UsageError("T_c must be positive")
    if not T_h > T_c:
        raise UsageError(f"quantum speed limit needs T_h > T_c (got {T_h}, {T_c})")
    return omega0 * (T_h - T_c) / (T_h + T_c)


def default_tol(hot: SpectralFunction, cold: SpectralFunction) -> float:
    return 1e-9 * max(hot.model.gamma0, cold.model.gamma0) * hot.omega0


def classify(Jh: float, Jc: float, W: float, tol: float) -> Regime:
    if Jh > tol and Jc < -tol and W < -tol:
        return Regime.HEAT_ENGINE
    if Jc > tol and Jh < -tol and W > tol:
        return Regime.REFRIGERATOR
    return Regime.IDLE


def classify_regime(r, tol: float) -> Regime:
    """Regime of a record (uses the AZD averages) or of an Averages block."""
    a = r.azd if isinstance(r, PerformanceRecord) else r
    return classify(a.Jh, a.Jc, a.W, tol)


def _averages(Jh: float, Jc: float, tol: float) -> Averages:
    W = -(Jh + Jc)
    regime = classify(Jh, Jc, W, tol)
    eta = -W / Jh if regime is Regime.HEAT_ENGINE else math.nan
    cop = -Jc / W if regime is Regime.REFRIGERATOR else math.nan
    return Averages(Jh, Jc, W, eta, cop, regime)


def stroke_currents(hot, cold, m: ModulationParams, cfg: CycleConfig,
                    q: QuadConfig = DEFAULT_QUAD, w: Optional[float] = None):
    """t, J_h(t), J_c(t) on the full-step grid of one stroke."""
    if w is None:
        w = steady_state_w(m, hot.beta, cold.beta)
    ts = stroke_grid(m, cfg)[0][::2]
    a_h, a_c = current_factors(m, w, hot.beta, cold.beta)
    jh = a_h * profile_arrays(hot, m.omega_hot, ts, q)[0]
    jc = a_c * profile_arrays(cold, m.omega_cold, ts, q)[0]
    return ts, jh, jc


def average_over_stroke(hot: SpectralFunction, cold: SpectralFunction, m: ModulationParams,
                        cfg: CycleConfig, q: QuadConfig = DEFAULT_QUAD,
                        tol: Optional[float] = None, azd: bool = True,
                        markov: bool = True) -> PerformanceRecord:
    """Stroke averages (1/tau_C) int_0^tau_C of the currents, plus the Markov baseline."""
    if tol is None:
        tol = default_tol(hot, cold)
    w = steady_state_w(m, hot.beta, cold.beta)
    a_azd = _NAN_AVG
    a_mkv = _NAN_AVG
    if azd:
        ts, jh, jc = stroke_currents(hot, cold, m, cfg, q, w)
        tau_c = ts[-1]
        a_azd = _averages(simpson(jh, x=ts) / tau_c, simpson(jc, x=ts) / tau_c, tol)
    if markov:
        a_h, a_c = current_factors(m, w, hot.beta, cold.beta)
        a_mkv = _averages(a_h * markovian_response(hot, m.omega_hot),
                          a_c * markovian_response(cold, m.omega_cold), tol)
    bp = a_azd.W / a_mkv.W if a_azd.W < 0 and a_mkv.W < 0 else math.nan
    bc = a_azd.Jc / a_mkv.Jc if a_azd.Jc > 0 and a_mkv.Jc > 0 else math.nan
    return PerformanceRecord(m.delta_s, a_azd, a_mkv, bp, bc)


@dataclass(frozen=True)
class SweepSetup:
    """What a sweep needs: a builder of (hot, cold, modulation) for each delta_s."""

    build: Callable[[float], tuple]
    cycle: CycleConfig = field(default_factory=CycleConfig)
    quad: QuadConfig = DEFAULT_QUAD


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "").strip()
    if raw:
        n = int(raw)
        if n < 1:
            raise UsageError(f"{THREADS_ENV} must be >= 1")
        return n
    return os.cpu_count() or 1


def sweep_modulation(scenario, delta_grid: Sequence[float], azd: bool = True,
                     markov: bool = True, threads: Optional[int] = None
                     ) -> list[PerformanceRecord]:
    """One record per grid point, in grid order; failures are recorded, not raised.

    ``scenario`` needs ``build(delta_s) -> (hot, cold, modulation)``,
    ``cycle`` and ``quad`` attributes (a Scenario or a SweepSetup).
    """
    grid = [float(d) for d in delta_grid]
    if not grid:
        raise UsageError("sweep grid is empty")
    cfg, q = scenario.cycle, scenario.quad

    def point(d):
        try:
            hot, cold, m = scenario.build(d)
            return average_over_stroke(hot, cold, m, cfg, q, azd=azd, markov=markov)
        except (NumericalError, UsageError, ValueError) as exc:
            return PerformanceRecord(d, error=f"{type(exc).__name__}: {exc}")

    n = threads or thread_count()
    if n == 1:
        return [point(d) for d in grid]
    # small-delta points are the slowest, so start them first
    order = sorted(range(len(grid)), key=lambda i: grid[i])
    with ThreadPoolExecutor(max_workers=n) as pool:
        done = dict(zip(order, pool.map(point, [grid[i] for i in order])))
    return [done[i] for i in range(len(grid))]


CSV_COLUMNS = ("delta_s", "Jh_azd", "Jc_azd", "W_azd", "eta_azd", "cop_azd", "Jh_mkv",
               "Jc_mkv", "W_mkv", "eta_mkv", "cop_mkv", "regime", "boost_power",
               "boost_cooling")


def record_row(r: PerformanceRecord) -> list[str]:
    a, k = r.azd, r.markov
    regime = "Failed" if r.error else a.regime.value if not math.isnan(a.W) else k.regime.value
    nums = [r.delta_s, a.Jh, a.Jc, a.W, a.eta, a.cop, k.Jh, k.Jc, k.W, k.eta, k.cop]
    row = [repr(float(x)) for x in nums]
    row.append(regime)
    row.extend(repr(float(x)) for x in (r.boost_power, r.boost_cooling))
    return row


def write_sweep_csv(path, records: Sequence[PerformanceRecord]) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow(record_row(r))
