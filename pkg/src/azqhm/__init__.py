"""Finite-time (anti-Zeno) quantum heat machine simulator.

A two-level working fluid with a sinusoidally modulated level splitting is
coupled for ``n`` modulation periods to a hot and a cold bath, then
decoupled. Short couplings broaden the energy window through which the
baths are sampled; this package computes the resulting rates, populations,
heat currents and performance against the Markovian baseline.
"""
__version__ = "0.1.0"

from ._accel import backend  # noqa: E402
from .dynamics import (CycleConfig, MachineState, RatePair, Trajectory, evolve, rates,
                       steady_state_w, steady_state_w_general)
from .floquet import ModulationParams, Sideband, WeightMode, sideband_frequencies, sideband_weights
from .response import (NumericalError, QuadConfig, QuadratureError, ResponseValue,
                       convolve_response, markovian_response, response_profile, sinc_kernel)
from .scenario import Scenario, ScenarioError, load_preset, load_scenario
from .spectra import (BathSide, LorentzPeak, QuasiLorentzianSpec, SpectralFunction,
                      SuperOhmicSpec, UsageError, check_kms, check_mutual_symmetry,
                      correlation_time, eval_spectral, make_spectral)
from .thermo import (InstantCurrents, PerformanceRecord, Regime, average_over_stroke,
                     classify_regime, heat_currents, quantum_speed_limit, sweep_modulation)

__all__ = [
    "backend", "CycleConfig", "MachineState", "RatePair", "Trajectory", "evolve", "rates",
    "steady_state_w", "steady_state_w_general", "ModulationParams", "Sideband", "WeightMode",
    "sideband_frequencies", "sideband_weights", "NumericalError", "QuadConfig",
    "QuadratureError", "ResponseValue", "convolve_response", "markovian_response",
    "response_profile", "sinc_kernel", "Scenario", "ScenarioError", "load_preset",
    "load_scenario", "BathSide", "LorentzPeak", "QuasiLorentzianSpec", "SpectralFunction",
    "SuperOhmicSpec", "UsageError", "check_kms", "check_mutual_symmetry", "correlation_time",
    "eval_spectral", "make_spectral", "InstantCurrents", "PerformanceRecord", "Regime",
    "average_over_stroke", "classify_regime", "heat_currents", "quantum_speed_limit",
    "sweep_modulation",
]
