"""Critical-mass and parameter-exclusion bounds for spontaneous localization.

A time-domain interferometer scaled with the particle mass (pulse delay
tracking the Talbot time at fixed grating period) loses contrast once the
localization rate, growing quadratically with mass, suppresses the
first-order fringe coefficient. The smallest mass at which the reduction
factor crosses a threshold is the critical test mass for the given
localization parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import AMU
from .core import BeamState, talbot_time
from .decoherence import channel_factor, csl_channel
from .engine import InterferometerConfig, time_domain_visibility
from .gratings import IonizingGrating
from .species import gold_cluster

# F2 excimer standing wave: light wavelength 157 nm, grating period 78.5 nm
DEFAULT_OTIMA_PERIOD = 78.5e-9

MASS_BRACKET_AMU = (1e3, 1e12)
BISECTION_TOLERANCE = 0.01
MAX_BISECTIONS = 60


class MassOutOfRangeError(ValueError):
    """No threshold crossing inside the mass bracket."""


@dataclass(frozen=True)
class CslParameters:
    lambda0: float   # single-nucleon localization rate, 1/s
    r_c: float       # localization length, m

    def __post_init__(self):
        if self.lambda0 <= 0.0 or self.r_c <= 0.0:
            raise ValueError("lambda0 and r_c must be positive")


@dataclass(frozen=True)
class OtimaTemplate:
    """Mass-parametric pulsed interferometer for collapse-model tests.

    The pulse delay tracks the Talbot time of the candidate mass; the
    grating period stays fixed. A cell is unusable when the unperturbed
    quantum visibility at the operating point drops below
    ``min_quantum_visibility``.
    """

    grating: IonizingGrating = field(
        default_factory=lambda: IonizingGrating(
            period_d=DEFAULT_OTIMA_PERIOD, mean_absorbed_photons_n0=6.0,
            phase_amplitude_phi0=0.0))
    delay_over_talbot_time: float = 1.0
    min_quantum_visibility: float = 0.1

    def config(self, mass_amu: float) -> InterferometerConfig:
        species = gold_cluster(mass_amu)
        tt = talbot_time(species.mass, self.grating.period_d)
        return InterferometerConfig(
            grating1=self.grating, grating2=self.grating,
            grating3=self.grating, species=species,
            beam=BeamState(mean_velocity=1.0),
            pulse_delay_T=self.delay_over_talbot_time * tt,
            mode="time_domain")


@dataclass
class ExclusionMap:
    lambda0_grid: np.ndarray
    r_c_grid: np.ndarray
    critical_mass: np.ndarray    # kg; NaN where out of range


def csl_visibility(cfg: InterferometerConfig, params: CslParameters) -> float:
    """Time-domain visibility with the localization channel applied."""
    channel = csl_channel(params.lambda0, params.r_c, cfg.species.mass)
    return time_domain_visibility(cfg, cfg.pulse_delay_T, channels=[channel])


def csl_reduction_factor(params: CslParameters, template: OtimaTemplate,
                         mass_amu: float) -> float:
    """Factor multiplying the first-order signal component at this mass."""
    cfg = template.config(mass_amu)
    channel = csl_channel(params.lambda0, params.r_c, cfg.species.mass)
    return abs(channel_factor(channel, cfg, 2, 1.0))


def quantum_operating_visibility(template: OtimaTemplate) -> float:
    """Unperturbed visibility at the operating point (mass independent)."""
    cfg = template.config(1e6)
    return time_domain_visibility(cfg, cfg.pulse_delay_T)


def critical_mass(params: CslParameters, template: OtimaTemplate | None = None,
                  reduction_threshold: float = math.exp(-1.0)) -> float:
    """Smallest mass (kg) whose reduction factor falls below the threshold.

    Bisection on the logarithm of the mass to 1% relative tolerance; the
    reduction factor is monotone decreasing in mass because the event rate
    grows as m^2 and the transit time as m.
    """
    if not 0.0 < reduction_threshold < 1.0:
        raise ValueError("reduction_threshold must lie in (0, 1)")
    template = template or OtimaTemplate()
    if quantum_operating_visibility(template) < template.min_quantum_visibility:
        raise ValueError("operating point has insufficient quantum visibility")

    lo, hi = MASS_BRACKET_AMU
    if csl_reduction_factor(params, template, lo) < reduction_threshold:
        raise MassOutOfRangeError("threshold crossed below the mass bracket")
    if csl_reduction_factor(params, template, hi) > reduction_threshold:
        raise MassOutOfRangeError("no threshold crossing inside the mass bracket")

    log_lo, log_hi = math.log10(lo), math.log10(hi)
    for _ in range(MAX_BISECTIONS):
        if 10.0 ** (log_hi - log_lo) - 1.0 < BISECTION_TOLERANCE:
            break
        mid = 0.5 * (log_lo + log_hi)
        if csl_reduction_factor(params, template, 10.0 ** mid) < reduction_threshold:
            log_hi = mid
        else:
            log_lo = mid
    return 10.0 ** (0.5 * (log_lo + log_hi)) * AMU


def exclusion_map(lambda0_grid, r_c_grid, template: OtimaTemplate | None = None,
                  reduction_threshold: float = math.exp(-1.0)) -> ExclusionMap:
    """Critical mass per (lambda0, r_c) grid cell; unreachable cells are NaN."""
    lambda0_grid = np.asarray(lambda0_grid, dtype=float)
    r_c_grid = np.asarray(r_c_grid, dtype=float)
    if len(lambda0_grid) < 2 or len(r_c_grid) < 2:
        raise ValueError("grids need at least two points per axis")
    template = template or OtimaTemplate()
    masses = np.empty((len(lambda0_grid), len(r_c_grid)))
    for i, lam0 in enumerate(lambda0_grid):
        for j, rc in enumerate(r_c_grid):
            try:
                masses[i, j] = critical_mass(
                    CslParameters(lambda0=lam0, r_c=rc), template,
                    reduction_threshold)
            except MassOutOfRangeError:
                masses[i, j] = math.nan
    return ExclusionMap(lambda0_grid=lambda0_grid, r_c_grid=r_c_grid,
                        critical_mass=masses)


def write_exclusion_csv(emap: ExclusionMap, path):
    """Matrix CSV: first row the r_c axis, first column the lambda0 axis."""
    with open(path, "w") as fh:
        header = ["lambda0_hz\\r_c_m"] + [repr(float(v)) for v in emap.r_c_grid]
        fh.write(",".join(header) + "\n")
        for lam0, row in zip(emap.lambda0_grid, emap.critical_mass):
            cells = [repr(float(lam0))] + [repr(float(v)) for v in row]
            fh.write(",".join(cells) + "\n")


__all__ = [
    "CslParameters", "OtimaTemplate", "ExclusionMap", "csl_visibility",
    "csl_reduction_factor", "critical_mass", "exclusion_map",
    "write_exclusion_csv", "quantum_operating_visibility",
    "MassOutOfRangeError", "DEFAULT_OTIMA_PERIOD",
]
