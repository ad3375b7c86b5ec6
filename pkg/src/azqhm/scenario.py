"""JSON scenario files: schema, validation, defaults and bundled presets."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .dynamics import CycleConfig
from .floquet import ModulationParams
from .response import QuadConfig
from .spectra import (LorentzPeak, QuasiLorentzianSpec, SpectralFunction, SuperOhmicSpec,
                      UsageError, make_spectral)

PRESETS = ("fig2", "fig3", "fig4", "fig5a", "fig5b", "fig6")


class ScenarioError(ValueError):
    """A scenario file that cannot be parsed or fails validation."""

    def __init__(self, msg, path: str = ""):
        super().__init__(f"{path}: {msg}" if path else msg)
        self.path = path


_POS = {"type": "number", "exclusiveMinimum": 0}

_PEAK = {
    "type": "object",
    "additionalProperties": False,
    "required": ["shift", "width"],
    "properties": {
        "weight": {"type": "number", "minimum": 0, "default": 1.0},
        "shift": {"type": "number"},
        "width": _POS,
    },
}

_LORENTZ = {
    "type": "object",
    "additionalProperties": False,
    "required": ["model", "gamma0", "peaks"],
    "properties": {
        "model": {"const": "quasi_lorentzian"},
        "gamma0": _POS,
        "peaks": {"type": "array", "minItems": 1, "items": _PEAK},
        "epsilon": {**_POS, "default": 0.01},
    },
}

_SUPEROHMIC = {
    "type": "object",
    "additionalProperties": False,
    "required": ["model", "gamma0"],
    "properties": {
        "model": {"const": "super_ohmic"},
        "gamma0": _POS,
        "s": {"type": "number", "exclusiveMinimum": 1, "default": 2.0},
        "nu_bar": {**_POS, "default": 1.0},
        "delta": {**_POS, "default": 0.1},
        "epsilon": {**_POS, "default": 0.1},
    },
}

_SPECTRUM = {
    "type": "object",
    "required": ["model"],
    "properties": {"model": {"enum": ["quasi_lorentzian", "super_ohmic"]}},
    "if": {"properties": {"model": {"const": "quasi_lorentzian"}}},
    "then": _LORENTZ,
    "else": _SUPEROHMIC,
}

SCHEMA: dict[str, Any] = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "additionalProperties": False,
    "required": ["modulation", "hot", "cold", "beta_h", "beta_c"],
    "properties": {
        "name": {"type": "string"},
        "description": {"type": "string"},
        "modulation": {
            "type": "object",
            "additionalProperties": False,
            "required": ["omega0", "lambda", "delta_s"],
            "properties": {
                "omega0": _POS,
                "lambda": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
                "delta_s": _POS,
            },
        },
        "hot": _SPECTRUM,
        "cold": _SPECTRUM,
        "beta_h": _POS,
        "beta_c": _POS,
        "cycle": {
            "type": "object",
            "additionalProperties": False,
            "default": {},
            "properties": {
                "n": {"type": "integer", "minimum": 1, "default": 10},
                "tbar": {"type": ["number", "null"], "minimum": 0, "default": None},
                "cycles": {"type": "integer", "minimum": 1, "default": 1},
                "oversample": {"type": "integer", "minimum": 1, "default": 64},
            },
        },
        "quad": {
            "type": "object",
            "additionalProperties": False,
            "default": {},
            "properties": {
                "rel_tol": {**_POS, "default": 1e-8},
                "abs_tol": {**_POS, "default": 1e-12},
                "max_subdivisions": {"type": "integer", "minimum": 16, "default": 2000},
                "oscillation_splitting": {"type": "boolean", "default": True},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "default": {},
            "properties": {
                "delta_min": {**_POS, "default": 0.2},
                "delta_max": {**_POS, "default": 19.0},
                "points": {"type": "integer", "minimum": 0, "default": 60},
            },
        },
    },
}

_VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def _field_path(err: jsonschema.ValidationError) -> str:
    parts = [str(p) for p in err.absolute_path]
    if err.validator == "additionalProperties":
        extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
        parts.extend(extra[:1])
    elif err.validator == "required":
        missing = [k for k in err.validator_value if k not in err.instance]
        parts.extend(missing[:1])
    return ".".join(parts)


def _fill_defaults(doc: dict) -> dict:
    out = copy.deepcopy(doc)
    for key in ("cycle", "quad", "sweep"):
        sub = out.setdefault(key, {})
        for name, prop in SCHEMA["properties"][key]["properties"].items():
            sub.setdefault(name, prop["default"])
    for side in ("hot", "cold"):
        spec = out[side]
        branch = _LORENTZ if spec["model"] == "quasi_lorentzian" else _SUPEROHMIC
        for name, prop in branch["properties"].items():
            if "default" in prop:
                spec.setdefault(name, prop["default"])
        for peak in spec.get("peaks", []):
            peak.setdefault("weight", 1.0)
    return out


@dataclass(frozen=True)
class SweepGrid:
    delta_min: float = 0.2
    delta_max: float = 19.0
    points: int = 60

    def grid(self) -> list[float]:
        """``points`` values strictly inside (delta_min, delta_max), evenly spaced."""
        if self.points < 1:
            raise UsageError("sweep grid has zero points")
        step = (self.delta_max - self.delta_min) / (self.points + 1)
        return [self.delta_min + (k + 1) * step for k in range(self.points)]

    @property
    def spacing(self) -> float:
        return (self.delta_max - self.delta_min) / (self.points + 1)


def _model(d: dict):
    if d["model"] == "quasi_lorentzian":
        peaks = tuple(LorentzPeak(p["weight"], p["shift"], p["width"]) for p in d["peaks"])
        return QuasiLorentzianSpec(d["gamma0"], peaks, d["epsilon"])
    return SuperOhmicSpec(d["gamma0"], d["s"], d["nu_bar"], d["delta"], d["epsilon"])


@dataclass(frozen=True)
class Scenario:
    omega0: float
    lambda_: float
    delta_s: float
    hot_model: Any
    cold_model: Any
    beta_h: float
    beta_c: float
    cycle: CycleConfig = field(default_factory=CycleConfig)
    quad: QuadConfig = field(default_factory=QuadConfig)
    sweep: SweepGrid = field(default_factory=SweepGrid)
    name: str = ""
    document: dict = field(default_factory=dict, compare=False, repr=False)

    def modulation(self, delta_s: float | None = None) -> ModulationParams:
        return ModulationParams(self.omega0, self.lambda_,
                                self.delta_s if delta_s is None else float(delta_s))

    def spectra(self, delta_s: float | None = None) -> tuple[SpectralFunction, SpectralFunction]:
        d = self.delta_s if delta_s is None else float(delta_s)
        return (make_spectral("hot", self.hot_model, self.beta_h, self.omega0, d),
                make_spectral("cold", self.cold_model, self.beta_c, self.omega0, d))

    def build(self, delta_s: float | None = None):
        hot, cold = self.spectra(delta_s)
        return hot, cold, self.modulation(delta_s)

    @property
    def T_h(self) -> float:
        return 1.0 / self.beta_h

    @property
    def T_c(self) -> float:
        return 1.0 / self.beta_c

    def to_dict(self) -> dict:
        return copy.deepcopy(self.document)


def scenario_from_dict(doc: Any) -> Scenario:
    errors = sorted(_VALIDATOR.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        # prefer the most specific error inside if/then branches
        err = jsonschema.exceptions.best_match(errors)
        raise ScenarioError(err.message, _field_path(err))
    full = _fill_defaults(doc)
    mod = full["modulation"]
    if not mod["delta_s"] < mod["omega0"]:
        raise ScenarioError("delta_s must be < omega0", "modulation.delta_s")
    sw = full["sweep"]
    if sw["points"] > 0:
        if not sw["delta_min"] < sw["delta_max"]:
            raise ScenarioError("delta_min must be < delta_max", "sweep.delta_min")
        if not sw["delta_max"] <= mod["omega0"]:
            raise ScenarioError("delta_max must be <= omega0", "sweep.delta_max")
    models = {}
    for side in ("hot", "cold"):
        try:
            models[side] = _model(full[side])
        except UsageError as exc:
            raise ScenarioError(str(exc), side) from None
    cyc = full["cycle"]
    q = full["quad"]
    try:
        sc = Scenario(
            omega0=float(mod["omega0"]), lambda_=float(mod["lambda"]),
            delta_s=float(mod["delta_s"]), hot_model=models["hot"],
            cold_model=models["cold"], beta_h=float(full["beta_h"]),
            beta_c=float(full["beta_c"]),
            cycle=CycleConfig(cyc["n"], cyc["tbar"], cyc["cycles"], cyc["oversample"]),
            quad=QuadConfig(q["rel_tol"], q["abs_tol"], q["max_subdivisions"],
                            q["oscillation_splitting"]),
            sweep=SweepGrid(float(sw["delta_min"]), float(sw["delta_max"]), int(sw["points"])),
            name=full.get("name", ""), document=full)
        sc.build()
    except UsageError as exc:
        raise ScenarioError(str(exc)) from None
    return sc


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{source}: invalid JSON at line {exc.lineno}, column "
                            f"{exc.colno}: {exc.msg}") from None
    return scenario_from_dict(doc)


def load_scenario(path) -> Scenario:
    """Load a JSON scenario file, or a bundled preset by name (e.g. ``fig3``)."""
    p = Path(path)
    if not p.exists() and str(path) in PRESETS:
        return load_preset(str(path))
    try:
        text = p.read_text()
    except OSError as exc:
        raise UsageError(f"cannot read scenario {path}: {exc.strerror}") from None
    return parse_scenario(text, str(path))


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise UsageError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return resources.files("azqhm.presets").joinpath(f"{name}.json").read_text()


def load_preset(name: str) -> Scenario:
    return parse_scenario(preset_text(name), name)


def dump_scenario(sc: Scenario) -> str:
    return json.dumps(sc.to_dict(), indent=2, sort_keys=True)


def carnot(sc: Scenario) -> float:
    return 1.0 - sc.beta_h / sc.beta_c


def nearest_index(grid, x) -> int:
    return min(range(len(grid)), key=lambda i: (abs(grid[i] - x), i))

