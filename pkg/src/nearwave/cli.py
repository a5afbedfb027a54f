"""Command-line entry points: figure-level sweeps emitted as CSV/JSON data.

Every subcommand reads a scenario file, computes deterministically, and
writes records with unit-suffixed column names. Exit codes: 0 success,
2 config error, 3 I/O error, 4 numerical non-convergence.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from functools import partial

import click
import numpy as np

from .classical import classical_visibility_quadrature
from .constants import AMU, VACUUM_PERMITTIVITY_EPS0
from .core import talbot_time
from .csl import (CslParameters, MassOutOfRangeError, OtimaTemplate,
                  exclusion_map)
from .decoherence import (GasEnvironment, QuadratureError,
                          collisional_channel)
from .engine import (CoherencePreparationError, grating_coefficients,
                     talbot_pattern, time_domain_visibility,
                     velocity_averaged_signal)
from .gratings import IonizingGrating, MaterialGrating
from .metrology import DeflectionField, stark_fringe_shift
from .scenario import Scenario, ScenarioError, apply_sweep_value, load_scenario

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_NUMERICAL = 4


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write(text: str, out: str):
    if out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        sys.exit(EXIT_IO)


def emit(records, columns, out: str, fmt: str):
    """Write records as CSV (header row with units) or JSON (flat array)."""
    if fmt == "csv":
        lines = [",".join(columns)]
        for rec in records:
            lines.append(",".join(_fmt(rec[c]) for c in columns))
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps([{c: rec[c] for c in columns} for rec in records],
                          indent=2) + "\n"
    _write(text, out)


def emit_matrix(row_label, row_values, col_label, col_values, matrix,
                out: str, fmt: str):
    """2-D matrix: rows labeled by row_values, columns by col_values."""
    if fmt == "csv":
        header = [f"{row_label}\\{col_label}"] + [_fmt(float(c))
                                                 for c in col_values]
        lines = [",".join(header)]
        for rv, row in zip(row_values, matrix):
            lines.append(",".join([_fmt(float(rv))]
                                  + [_fmt(float(v)) for v in row]))
        text = "\n".join(lines) + "\n"
    else:
        payload = {col_label: [float(c) for c in col_values],
                   "rows": [{row_label: float(rv),
                             "values": [float(v) for v in row]}
                            for rv, row in zip(row_values, matrix)]}
        text = json.dumps(payload, indent=2) + "\n"
    _write(text, out)


def _load(path: str) -> Scenario:
    try:
        return load_scenario(path)
    except ScenarioError as exc:
        for problem in exc.problems:
            click.echo(f"config error: {problem}", err=True)
        sys.exit(EXIT_CONFIG)
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        sys.exit(EXIT_IO)


def _guard(func, *args, **kwargs):
    """Run a computation, mapping known failure families to exit codes."""
    try:
        return func(*args, **kwargs)
    except (QuadratureError, MassOutOfRangeError, FloatingPointError) as exc:
        click.echo(f"numerical error: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    except (CoherencePreparationError, ValueError) as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except OSError as exc:
        click.echo(f"i/o error: {exc}", err=True)
        sys.exit(EXIT_IO)


def _require_sweep(scenario: Scenario, parameter: str):
    if scenario.sweep is None or scenario.sweep.parameter != parameter:
        click.echo(f"config error: scenario must sweep {parameter!r}",
                   err=True)
        sys.exit(EXIT_CONFIG)
    return scenario.sweep.values()


def _pmap(func, items):
    """Map preserving input order; worker count from NEARWAVE_WORKERS."""
    workers = int(os.environ.get("NEARWAVE_WORKERS", "1"))
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def _sweep_point(scenario: Scenario, n_velocities: int, value: float):
    cfg = apply_sweep_value(scenario, value)
    signal = velocity_averaged_signal(cfg, n_velocities=n_velocities, m_max=2)
    quantum = 2.0 * abs(signal[1] / signal[0])
    classical = classical_visibility_quadrature(cfg, n_velocities=n_velocities)
    return float(quantum), float(classical)


def _all_material(cfg) -> bool:
    gratings = (cfg.grating1, cfg.grating2, cfg.grating3)
    return all(isinstance(g, MaterialGrating) for g in gratings
               if g is not None)


def _with_interaction(cfg, interaction: str):
    def swap(g):
        if g is None:
            return None
        return replace(g, interaction=interaction)
    return replace(cfg, grating1=swap(cfg.grating1),
                   grating2=swap(cfg.grating2), grating3=swap(cfg.grating3))


def _velocity_point(scenario: Scenario, n_velocities: int, value: float):
    """One velocity-sweep record; material masks get the interaction family."""
    cfg = apply_sweep_value(scenario, value)
    record = {"velocity_m_per_s": float(value)}
    if _all_material(cfg):
        for label, interaction in (("quantum_vdw", "vdw_r3"),
                                   ("quantum_cp", "casimir_polder_r4"),
                                   ("quantum_ideal", "none")):
            variant = _with_interaction(cfg, interaction)
            signal = velocity_averaged_signal(variant,
                                              n_velocities=n_velocities,
                                              m_max=2)
            record[f"{label}_visibility"] = float(
                2.0 * abs(signal[1] / signal[0]))
        record["classical_visibility"] = float(
            classical_visibility_quadrature(cfg, n_velocities=n_velocities))
    else:
        quantum, classical = _sweep_point(scenario, n_velocities, value)
        record["quantum_visibility"] = quantum
        record["classical_visibility"] = classical
    return record


common_options = [
    click.option("--seed", type=int, default=None,
                 help="Override the scenario seed."),
    click.option("--out", default="-", show_default=True,
                 help="Output path, '-' for stdout."),
    click.option("--format", "fmt", type=click.Choice(["csv", "json"]),
                 default="csv", show_default=True),
]


def with_common(func):
    for option in reversed(common_options):
        func = option(func)
    return func


@click.group()
def main():
    """Near-field interferometry sweeps and maps, emitted as data."""


@main.command()
@click.argument("scenario_path")
@with_common
def validate(scenario_path, seed, out, fmt):
    """Parse and schema-check a scenario file."""
    scenario = _load(scenario_path)
    emit([{"scenario": scenario.name, "status": "ok",
           "seed": scenario.seed if seed is None else seed}],
         ["scenario", "status", "seed"], out, fmt)


@main.command()
@click.argument("scenario_path")
@click.option("--velocities", default=16, show_default=True,
              help="Velocity quadrature nodes.")
@with_common
def visibility(scenario_path, velocities, seed, out, fmt):
    """Quantum (and classical) fringe visibility of one configuration."""
    scenario = _load(scenario_path)
    cfg = scenario.config

    def compute():
        if cfg.mode == "time_domain":
            quantum = time_domain_visibility(cfg, cfg.pulse_delay_T)
            classical = float("nan")
        else:
            signal = velocity_averaged_signal(cfg, n_velocities=velocities)
            quantum = 2.0 * abs(signal[1] / signal[0])
            classical = classical_visibility_quadrature(
                cfg, n_velocities=velocities)
        return float(quantum), float(classical)

    quantum, classical = _guard(compute)
    emit([{"scenario": scenario.name, "quantum_visibility": quantum,
           "classical_visibility": classical}],
         ["scenario", "quantum_visibility", "classical_visibility"], out, fmt)


@main.command("velocity-sweep")
@click.argument("scenario_path")
@click.option("--velocities", default=12, show_default=True)
@with_common
def velocity_sweep(scenario_path, velocities, seed, out, fmt):
    """Visibility versus mean beam velocity (quantum and classical)."""
    scenario = _load(scenario_path)
    values = _require_sweep(scenario, "beam.velocity")
    records = _guard(_pmap, partial(_velocity_point, scenario, velocities),
                     [float(v) for v in values])
    emit(records, list(records[0].keys()), out, fmt)


@main.command("power-sweep")
@click.argument("scenario_path")
@click.option("--velocities", default=12, show_default=True)
@with_common
def power_sweep(scenario_path, velocities, seed, out, fmt):
    """Visibility versus central laser power (quantum and classical)."""
    scenario = _load(scenario_path)
    values = _require_sweep(scenario, "grating2.power")
    points = _guard(_pmap, partial(_sweep_point, scenario, velocities), values)
    records = [{"power_w": float(p), "quantum_visibility": q,
                "classical_visibility": c}
               for p, (q, c) in zip(values, points)]
    emit(records, ["power_w", "quantum_visibility", "classical_visibility"],
         out, fmt)


@main.command()
@click.argument("scenario_path")
@click.option("--z-max", default=2.0, show_default=True,
              help="Largest propagation distance in Talbot lengths.")
@click.option("--z-points", default=64, show_default=True)
@click.option("--x-points", default=128, show_default=True)
@click.option("--order", default=8, show_default=True,
              help="Fourier truncation of the reconstructed density.")
@with_common
def carpet(scenario_path, z_max, z_points, x_points, order, seed, out, fmt):
    """Near-field intensity carpet behind the first grating."""
    scenario = _load(scenario_path)
    cfg = scenario.config
    v = cfg.beam.mean_velocity

    def compute():
        b = grating_coefficients(cfg.grating1, cfg.species, v)
        x = np.arange(x_points) / x_points
        rows = []
        z_values = np.linspace(0.0, z_max, z_points)
        for z in z_values:
            pattern = talbot_pattern(b, z, m_max=order)
            rows.append(pattern.reconstruct(x))
        return z_values, x, np.array(rows)

    z_values, x, matrix = _guard(compute)
    emit_matrix("z_over_talbot_length", z_values, "x_over_d", x, matrix,
                out, fmt)


@main.command()
@click.argument("scenario_path")
@click.option("--velocities", default=8, show_default=True)
@with_common
def decohere(scenario_path, velocities, seed, out, fmt):
    """Visibility versus residual-gas pressure (collisional channel)."""
    scenario = _load(scenario_path)
    values = scenario.values
    missing = [k for k in ("gas.mass", "gas.temperature", "gas.cross_section")
               if k not in values]
    if missing:
        click.echo(f"config error: decohere needs keys {missing}", err=True)
        sys.exit(EXIT_CONFIG)
    pressures = _require_sweep(scenario, "gas.pressure")
    cfg = scenario.config

    def compute():
        records = []
        for p in pressures:
            env = GasEnvironment(gas_mass=values["gas.mass"],
                                 temperature=values["gas.temperature"],
                                 pressure=float(p))
            channel = collisional_channel(env, cfg.species,
                                          values["gas.cross_section"])
            signal = velocity_averaged_signal(cfg, n_velocities=velocities,
                                              m_max=1, channels=[channel])
            records.append({"pressure_pa": float(p),
                            "visibility": float(2.0 * abs(signal[1] / signal[0]))})
        return records

    records = _guard(compute)
    emit(records, ["pressure_pa", "visibility"], out, fmt)


@main.command("otima-map")
@click.argument("scenario_path")
@click.option("--ratio-min", default=0.7, show_default=True)
@click.option("--ratio-max", default=1.3, show_default=True)
@click.option("--ratio-points", default=25, show_default=True)
@click.option("--n0-min", default=0.5, show_default=True)
@click.option("--n0-max", default=8.0, show_default=True)
@click.option("--n0-points", default=16, show_default=True)
@with_common
def otima_map(scenario_path, ratio_min, ratio_max, ratio_points,
              n0_min, n0_max, n0_points, seed, out, fmt):
    """Visibility map over pulse delay (in Talbot times) and photon number."""
    scenario = _load(scenario_path)
    cfg = scenario.config
    if cfg.mode != "time_domain" or not isinstance(cfg.grating1,
                                                   IonizingGrating):
        click.echo("config error: otima-map needs a time-domain scenario "
                   "with ionizing gratings", err=True)
        sys.exit(EXIT_CONFIG)
    tt = talbot_time(cfg.species.mass, cfg.period_d)
    ratios = np.linspace(ratio_min, ratio_max, ratio_points)
    n0_values = np.linspace(n0_min, n0_max, n0_points)

    def compute():
        matrix = np.empty((len(ratios), len(n0_values)))
        for j, n0 in enumerate(n0_values):
            grating = replace(cfg.grating1, mean_absorbed_photons_n0=float(n0))
            base = replace(cfg, grating1=grating, grating2=grating,
                           grating3=grating)
            for i, ratio in enumerate(ratios):
                matrix[i, j] = time_domain_visibility(base, float(ratio) * tt)
        return matrix

    matrix = _guard(compute)
    emit_matrix("delay_over_talbot_time", ratios, "n0", n0_values, matrix,
                out, fmt)


@main.command()
@click.argument("scenario_path")
@with_common
def deflect(scenario_path, seed, out, fmt):
    """Stark fringe deflection versus beam velocity."""
    scenario = _load(scenario_path)
    values = scenario.values
    missing = [k for k in ("deflect.geometry_constant",
                           "deflect.grad_e_squared") if k not in values]
    if missing:
        click.echo(f"config error: deflect needs keys {missing}", err=True)
        sys.exit(EXIT_CONFIG)
    fld = DeflectionField(
        geometry_constant_K=values["deflect.geometry_constant"],
        grad_E_squared=values["deflect.grad_e_squared"])
    species = scenario.config.species
    alpha_si = 4.0 * np.pi * VACUUM_PERMITTIVITY_EPS0 * species.alpha_stat_vol
    if scenario.sweep is not None:
        velocities = _require_sweep(scenario, "beam.velocity")
    else:
        velocities = [scenario.config.beam.mean_velocity]
    d = scenario.config.period_d
    records = []
    for v in velocities:
        shift = _guard(stark_fringe_shift, fld, alpha_si, species.mass,
                       float(v))
        records.append({"velocity_m_per_s": float(v),
                        "stark_shift_m": float(shift),
                        "shift_over_period": float(shift / d)})
    emit(records, ["velocity_m_per_s", "stark_shift_m", "shift_over_period"],
         out, fmt)


@main.command("csl-map")
@click.argument("scenario_path")
@click.option("--lambda-min", default=1e-12, show_default=True)
@click.option("--lambda-max", default=1e-8, show_default=True)
@click.option("--lambda-points", default=3, show_default=True)
@click.option("--rc-min", default=1e-8, show_default=True)
@click.option("--rc-max", default=1e-6, show_default=True)
@click.option("--rc-points", default=3, show_default=True)
@click.option("--threshold", default=float(np.exp(-1.0)), show_default=True,
              help="Reduction-factor threshold defining the critical mass.")
@with_common
def csl_map(scenario_path, lambda_min, lambda_max, lambda_points,
            rc_min, rc_max, rc_points, threshold, seed, out, fmt):
    """Critical-mass map over localization parameters (masses in amu)."""
    scenario = _load(scenario_path)
    cfg = scenario.config
    if cfg.mode == "time_domain" and isinstance(cfg.grating1, IonizingGrating):
        tt = talbot_time(cfg.species.mass, cfg.period_d)
        template = OtimaTemplate(
            grating=cfg.grating1,
            delay_over_talbot_time=cfg.pulse_delay_T / tt)
    else:
        template = OtimaTemplate()
    lambda_grid = np.logspace(np.log10(lambda_min), np.log10(lambda_max),
                              lambda_points)
    rc_grid = np.logspace(np.log10(rc_min), np.log10(rc_max), rc_points)
    emap = _guard(exclusion_map, lambda_grid, rc_grid, template, threshold)
    emit_matrix("lambda0_hz", lambda_grid, "r_c_m", rc_grid,
                emap.critical_mass / AMU, out, fmt)


if __name__ == "__main__":
    main()
