"""Scenario files: flat key-value configs with mandatory unit suffixes.

Every physical quantity must carry a unit (``period = 991 nm``); unitless
numbers are accepted only for genuinely dimensionless keys. Validation
collects *all* offending keys before failing, so one round trip fixes a
whole file.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .constants import AMU
from .core import BeamState
from .engine import InterferometerConfig
from .gratings import (DEFAULT_WALL_CUTOFF, IonizingGrating, LaserPhaseGrating,
                       MaterialGrating)
from .species import LIBRARY, get_species


class ScenarioError(ValueError):
    """Config rejected; ``problems`` lists every offending key."""

    def __init__(self, problems: List[str]):
        self.problems = list(problems)
        super().__init__("invalid scenario:\n  " + "\n  ".join(self.problems))


# unit registry: dimension -> {suffix: factor to SI}
UNITS: Dict[str, Dict[str, float]] = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6,
               "nm": 1e-9, "pm": 1e-12},
    "velocity": {"m/s": 1.0, "km/s": 1e3, "mm/s": 1e-3},
    "time": {"s": 1.0, "ms": 1e-3, "us": 1e-6, "µs": 1e-6, "ns": 1e-9},
    "power": {"W": 1.0, "mW": 1e-3, "kW": 1e3},
    "mass": {"kg": 1.0, "amu": AMU},
    "pressure": {"Pa": 1.0, "mbar": 1e2, "bar": 1e5},
    "temperature": {"K": 1.0},
    "rate": {"Hz": 1.0, "mHz": 1e-3, "1/s": 1.0},
    "angle": {"rad": 1.0},
    "area": {"m^2": 1.0, "nm^2": 1e-18},
    "acceleration": {"m/s^2": 1.0},
    "field_gradient": {"V^2/m^3": 1.0},
}


def parse_quantity(text: str, dimension: str) -> float:
    """Parse '<number> <unit>' with a unit suffix of the given dimension."""
    table = UNITS[dimension]
    parts = text.split()
    if len(parts) != 2:
        raise ValueError(f"expected '<number> <unit>' with a {dimension} unit")
    value, unit = parts
    if unit not in table:
        raise ValueError(f"unknown {dimension} unit {unit!r} "
                         f"(expected one of {sorted(table)})")
    return float(value) * table[unit]


# key -> kind; kind is "quantity:<dimension>", "number", "int",
# "choice:a|b|c", or "string"
_GRATING_KEYS = {
    "type": "choice:material|laser|ionizing",
    "period": "quantity:length",
    "open_fraction": "number",
    "thickness": "quantity:length",
    "interaction": "choice:none|vdw_r3|casimir_polder_r4",
    "wall_cutoff": "quantity:length",
    "power": "quantity:power",
    "waist_y": "quantity:length",
    "laser_wavelength": "quantity:length",
    "n0": "number",
    "phi0": "quantity:angle",
}

SCHEMA: Dict[str, str] = {
    "name": "string",
    "species": "string",
    "species.mass": "quantity:mass",
    "mode": "choice:spatial|time_domain",
    "separation": "quantity:length",
    "pulse_delay": "quantity:time",
    "beam.velocity": "quantity:velocity",
    "beam.spread": "number",
    "beam.shape": "choice:gaussian|top_hat",
    "sweep.parameter": "string",
    "sweep.start": "string",  # dimension depends on the swept parameter
    "sweep.stop": "string",
    "sweep.points": "int",
    "seed": "int",
    "gas.mass": "quantity:mass",
    "gas.temperature": "quantity:temperature",
    "gas.pressure": "quantity:pressure",
    "gas.cross_section": "quantity:area",
    "emission.spectrum_file": "string",
    "csl.lambda0": "quantity:rate",
    "csl.r_c": "quantity:length",
    "deflect.geometry_constant": "number",
    "deflect.grad_e_squared": "quantity:field_gradient",
}
for _n in (1, 2, 3):
    for _k, _kind in _GRATING_KEYS.items():
        SCHEMA[f"grating{_n}.{_k}"] = _kind

# parameters a sweep may target, with the dimension of start/stop
SWEEPABLE = {
    "beam.velocity": "velocity",
    "grating2.power": "power",
    "gas.pressure": "pressure",
    "pulse_delay": "time",
    "separation": "length",
}

REQUIRED = ("name", "species", "grating1.type", "grating2.type")


@dataclass
class SweepSpec:
    parameter: str
    start: float
    stop: float
    points: int

    def values(self):
        import numpy as np
        return np.linspace(self.start, self.stop, self.points)


@dataclass
class Scenario:
    name: str
    config: InterferometerConfig
    sweep: Optional[SweepSpec] = None
    seed: int = 0
    raw: Dict[str, str] = field(default_factory=dict)
    values: Dict[str, object] = field(default_factory=dict)  # parsed SI values


def _read_pairs(path: str) -> Dict[str, str]:
    pairs: Dict[str, str] = {}
    problems: List[str] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if "=" not in stripped:
                problems.append(f"line {lineno}: expected 'key = value'")
                continue
            key, _, value = stripped.partition("=")
            key, value = key.strip(), value.strip()
            if key in pairs:
                problems.append(f"line {lineno}: duplicate key {key!r}")
            pairs[key] = value
    if problems:
        raise ScenarioError(problems)
    return pairs


def _check_value(key: str, value: str, kind: str, problems: List[str]):
    if kind == "string":
        return value
    if kind == "number":
        try:
            return float(value)
        except ValueError:
            problems.append(f"{key}: not a number: {value!r}")
            return None
    if kind == "int":
        try:
            return int(value)
        except ValueError:
            problems.append(f"{key}: not an integer: {value!r}")
            return None
    if kind.startswith("choice:"):
        allowed = kind.split(":", 1)[1].split("|")
        if value not in allowed:
            problems.append(f"{key}: {value!r} not one of {allowed}")
            return None
        return value
    dimension = kind.split(":", 1)[1]
    try:
        return parse_quantity(value, dimension)
    except (ValueError, KeyError) as exc:
        problems.append(f"{key}: {exc}")
        return None


def validate_pairs(pairs: Dict[str, str]):
    """Schema-check raw pairs; returns {key: parsed value} or raises."""
    problems: List[str] = []
    parsed = {}
    for key, value in pairs.items():
        kind = SCHEMA.get(key)
        if kind is None:
            problems.append(f"{key}: unknown key")
            continue
        parsed[key] = _check_value(key, value, kind, problems)
    for key in REQUIRED:
        if key not in pairs:
            problems.append(f"{key}: required key missing")

    sweep_keys = [k for k in pairs if k.startswith("sweep.")]
    if sweep_keys:
        for k in ("sweep.parameter", "sweep.start", "sweep.stop", "sweep.points"):
            if k not in pairs:
                problems.append(f"{k}: required for a sweep")
        target = pairs.get("sweep.parameter")
        if target is not None:
            if target not in SWEEPABLE:
                problems.append(f"sweep.parameter: {target!r} not sweepable "
                                f"(choose from {sorted(SWEEPABLE)})")
            else:
                dim = SWEEPABLE[target]
                for k in ("sweep.start", "sweep.stop"):
                    if k in pairs:
                        try:
                            parsed[k] = parse_quantity(pairs[k], dim)
                        except (ValueError, KeyError) as exc:
                            problems.append(f"{k}: {exc}")
        points = parsed.get("sweep.points")
        if isinstance(points, int) and points < 1:
            problems.append("sweep.points: must be >= 1")

    if problems:
        raise ScenarioError(sorted(problems))
    return parsed


def _build_grating(n: int, parsed, problems: List[str]):
    prefix = f"grating{n}."
    gtype = parsed.get(prefix + "type")
    if gtype is None:
        return None

    def get(key, default=None):
        return parsed.get(prefix + key, default)

    try:
        if gtype == "material":
            return MaterialGrating(
                period_d=get("period"),
                open_fraction_f=get("open_fraction"),
                thickness_b=get("thickness", 0.0),
                interaction=get("interaction", "none"),
                wall_cutoff=get("wall_cutoff", DEFAULT_WALL_CUTOFF))
        if gtype == "laser":
            return LaserPhaseGrating(
                period_d=get("period"),
                power_P=get("power", 0.0),
                vertical_waist_wy=get("waist_y"),
                laser_wavelength=get("laser_wavelength"))
        return IonizingGrating(
            period_d=get("period"),
            mean_absorbed_photons_n0=get("n0", 0.0),
            phase_amplitude_phi0=get("phi0", 0.0))
    except (TypeError, ValueError) as exc:
        problems.append(f"grating{n}: {exc}")
        return None


def load_scenario(path: str) -> Scenario:
    """Parse, validate and assemble a scenario file."""
    pairs = _read_pairs(path)
    parsed = validate_pairs(pairs)
    problems: List[str] = []

    sp_name = parsed.get("species", "")
    mass_kg = parsed.get("species.mass")
    try:
        species = get_species(sp_name, None if mass_kg is None else mass_kg / AMU)
    except KeyError:
        problems.append(f"species: unknown species {sp_name!r} "
                        f"(library: {sorted(LIBRARY)})")
        species = None

    g1 = _build_grating(1, parsed, problems)
    g2 = _build_grating(2, parsed, problems)
    g3 = _build_grating(3, parsed, problems)

    beam = None
    try:
        beam = BeamState(
            mean_velocity=parsed.get("beam.velocity", 1.0),
            relative_spread=parsed.get("beam.spread", 0.0),
            distribution_shape=parsed.get("beam.shape", "gaussian"))
    except ValueError as exc:
        problems.append(f"beam: {exc}")

    mode = parsed.get("mode", "spatial")
    config = None
    if not problems:
        try:
            config = InterferometerConfig(
                grating1=g1, grating2=g2, grating3=g3,
                species=species, beam=beam, mode=mode,
                separation_L=parsed.get("separation"),
                pulse_delay_T=parsed.get("pulse_delay"))
        except (TypeError, ValueError) as exc:
            problems.append(f"config: {exc}")
    if problems:
        raise ScenarioError(problems)

    sweep = None
    if "sweep.parameter" in parsed:
        sweep = SweepSpec(parameter=parsed["sweep.parameter"],
                          start=parsed["sweep.start"],
                          stop=parsed["sweep.stop"],
                          points=parsed["sweep.points"])

    return Scenario(name=parsed["name"], config=config, sweep=sweep,
                    seed=parsed.get("seed", 0), raw=dict(pairs),
                    values=parsed)


def apply_sweep_value(scenario: Scenario, value: float) -> InterferometerConfig:
    """Return a copy of the scenario config with the swept parameter set."""
    from dataclasses import replace
    cfg = scenario.config
    target = scenario.sweep.parameter
    if target == "beam.velocity":
        return replace(cfg, beam=replace(cfg.beam, mean_velocity=value))
    if target == "grating2.power":
        return replace(cfg, grating2=replace(cfg.grating2, power_P=value))
    if target == "pulse_delay":
        return replace(cfg, pulse_delay_T=value)
    if target == "separation":
        return replace(cfg, separation_L=value)
    raise ValueError(f"sweep parameter {target!r} does not modify the config")


__all__ = [
    "Scenario", "SweepSpec", "ScenarioError", "load_scenario",
    "apply_sweep_value", "parse_quantity", "validate_pairs", "UNITS",
    "SCHEMA", "SWEEPABLE",
]
