"""Classical moire prediction: straight rays with thin-grating force impulses.

This is the null hypothesis against quantum interference. Rays pass the
masks ballistically, receive a transverse velocity kick from the
line-integrated grating potential (impulse approximation), and build a
shadow histogram at the third grating. The same first-Fourier-component
extraction as the quantum path keeps the visibility comparison fair.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import HBAR
from .engine import InterferometerConfig, grating_transmission
from .gratings import (IonizingGrating, LaserPhaseGrating, MaterialGrating,
                       transmission_probability_coefficients)
from .species import Species

MIN_SURVIVORS = 1000
DEFAULT_BINS = 256
DEFAULT_PARTITIONS = 16


class AbsorbedRayError(ValueError):
    """The queried position lies on a grating bar (or inside the cutoff)."""


class DegenerateEnsembleError(ValueError):
    """Illumination is not incoherent: divergence window too narrow."""


class StatisticsError(RuntimeError):
    """Too few surviving rays for a meaningful fringe fit."""


@dataclass(frozen=True)
class RayEnsemble:
    """Monte Carlo ensemble description.

    ``divergence_window`` is the uniform transverse-velocity half width;
    ``None`` selects the default of 20 grating periods of transverse travel
    over one grating separation.
    """

    count: int = 1_000_000
    seed: int = 0
    divergence_window: Optional[float] = None

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be positive")


@dataclass
class ClassicalResult:
    visibility: float
    stat_error: float
    histogram: np.ndarray
    bin_centers: np.ndarray
    n_survivors: int
    fringe_phase: float


def _survival_probability(g, s: Species, v_z: float, x: np.ndarray) -> np.ndarray:
    """|t(x)|^2 for rays at transverse positions x (any real values)."""
    d = g.period_d
    if isinstance(g, MaterialGrating):
        offset = np.mod(x + d / 2.0, d) - d / 2.0
        cutoff = g.wall_cutoff if g.interaction != "none" else 0.0
        open_half = g.open_fraction_f * d / 2.0 - cutoff
        return (np.abs(offset) < open_half).astype(float)
    if isinstance(g, LaserPhaseGrating):
        return np.ones_like(np.asarray(x, dtype=float))
    if isinstance(g, IonizingGrating):
        return np.exp(-g.mean_absorbed_photons_n0
                      * np.cos(np.pi * np.asarray(x) / d) ** 2)
    raise TypeError(f"unsupported grating type {type(g).__name__}")


def _kick_array(g, s: Species, v_z: float, x: np.ndarray) -> np.ndarray:
    """Transverse velocity change at positions x (vectorized, no absorption check)."""
    d = g.period_d
    if isinstance(g, MaterialGrating):
        from .gratings import _wall_coefficient
        coeff, power = _wall_coefficient(g, s)
        if coeff == 0.0 or g.thickness_b == 0.0:
            return np.zeros_like(np.asarray(x, dtype=float))
        a = g.open_fraction_f * d
        offset = np.mod(np.asarray(x, dtype=float) + d / 2.0, d) - d / 2.0
        r_plus = np.maximum(a / 2.0 - offset, g.wall_cutoff)
        r_minus = np.maximum(a / 2.0 + offset, g.wall_cutoff)
        scale = g.thickness_b * coeff * power / (s.mass * v_z)
        return scale * (r_plus ** -(power + 1) - r_minus ** -(power + 1))
    if isinstance(g, LaserPhaseGrating):
        from .gratings import laser_phase_amplitude
        phi0 = laser_phase_amplitude(g, s, v_z)
        return -(HBAR / (s.mass * v_z)) * phi0 * (np.pi / d) \
            * np.sin(2.0 * np.pi * np.asarray(x) / d)
    if isinstance(g, IonizingGrating):
        return -(HBAR / (s.mass * v_z)) * g.phase_amplitude_phi0 * (np.pi / d) \
            * np.sin(2.0 * np.pi * np.asarray(x) / d)
    raise TypeError(f"unsupported grating type {type(g).__name__}")


def deflection_kick(g, s: Species, v_z: float, x: float) -> float:
    """Impulse-approximation velocity change for a single ray at position x.

    Material masks use the gradient of the two-wall line-integrated
    potential, Delta v = -(1 / m v_z) d/dx integral V dz; phase gratings use
    the eikonal-phase gradient scaled the same way,
    Delta v = (hbar / m v_z) dphi/dx.
    Raises :class:`AbsorbedRayError` if x sits on a bar of a material mask.
    """
    if isinstance(g, MaterialGrating):
        if _survival_probability(g, s, v_z, np.array([x]))[0] == 0.0:
            raise AbsorbedRayError("ray absorbed on a grating bar")
    return float(_kick_array(g, s, v_z, np.array([x]))[0])


def _probability_coefficient(g, s, v_z, m, grid_size=4096):
    profile = grating_transmission(g, s, v_z, grid_size)
    table = transmission_probability_coefficients(profile, max(m, 1))
    return table.get(m)


def classical_visibility(cfg: InterferometerConfig, ensemble: RayEnsemble,
                         v_z: Optional[float] = None,
                         n_bins: int = DEFAULT_BINS,
                         n_partitions: int = DEFAULT_PARTITIONS,
                         n_bootstrap: int = 64,
                         transverse_acceleration: float = 0.0) -> ClassicalResult:
    """Monte Carlo moire visibility of a spatial-mode configuration.

    Rays are traced G1 -> G2 -> G3 with Bernoulli survival at the masks and
    a force impulse at G2; the arrival histogram (modulo one period) is
    convolved with the third mask and fitted by its first Fourier
    component. Identical seed and partition count give bit-identical
    results.
    """
    if cfg.mode != "spatial":
        raise ValueError("classical model requires spatial mode")
    s = cfg.species
    v = cfg.beam.mean_velocity if v_z is None else v_z
    d = cfg.period_d
    L = cfg.separation_L
    t_flight = L / v

    window = ensemble.divergence_window
    if window is None:
        window = 20.0 * d / t_flight
    if window * t_flight < 10.0 * d:
        raise DegenerateEnsembleError(
            "divergence_window * (L / v_z) must cover >= 10 grating periods "
            "for incoherent illumination")
    if ensemble.count < 10_000:
        warnings.warn("fewer than 1e4 rays: statistics will be poor",
                      stacklevel=2)

    seeds = np.random.SeedSequence(ensemble.seed).spawn(n_partitions)
    counts = np.full(n_partitions, ensemble.count // n_partitions)
    counts[:ensemble.count % n_partitions] += 1

    part_hist = np.zeros((n_partitions, n_bins))
    survivors = 0
    a_ext = transverse_acceleration
    for p in range(n_partitions):
        rng = np.random.default_rng(seeds[p])
        n = int(counts[p])
        if n == 0:
            continue
        x1 = rng.uniform(0.0, d, n)
        vx = rng.uniform(-window, window, n)
        alive = rng.uniform(size=n) < _survival_probability(cfg.grating1, s, v, x1)
        x1, vx = x1[alive], vx[alive]

        x2 = x1 + vx * t_flight + 0.5 * a_ext * t_flight ** 2
        alive = rng.uniform(size=len(x2)) < _survival_probability(
            cfg.grating2, s, v, x2)
        x1, vx, x2 = x1[alive], vx[alive], x2[alive]

        vx2 = vx + a_ext * t_flight + _kick_array(cfg.grating2, s, v, x2)
        x3 = x2 + vx2 * t_flight + 0.5 * a_ext * t_flight ** 2

        hist, _ = np.histogram(np.mod(x3, d), bins=n_bins, range=(0.0, d))
        part_hist[p] = hist
        survivors += len(x3)

    if survivors < MIN_SURVIVORS:
        raise StatisticsError(
            f"only {survivors} rays survive (< {MIN_SURVIVORS})")

    centers = (np.arange(n_bins) + 0.5) * d / n_bins
    t3_0, t3_1 = _third_mask_coefficients(cfg, s, v)

    def fringe(hist):
        s0 = hist.sum() * t3_0
        s1 = np.sum(hist * np.exp(-2j * np.pi * centers / d)) * np.conj(t3_1)
        return 2.0 * abs(s1 / s0), np.angle(s1)

    total = part_hist.sum(axis=0)
    visibility, phase = fringe(total)

    boot_rng = np.random.default_rng(np.random.SeedSequence([ensemble.seed, 0xB007]))
    boot = np.empty(n_bootstrap)
    for b in range(n_bootstrap):
        pick = boot_rng.integers(0, n_partitions, n_partitions)
        boot[b] = fringe(part_hist[pick].sum(axis=0))[0]
    stat_error = float(boot.std(ddof=1)) if n_bootstrap > 1 else 0.0

    return ClassicalResult(visibility=float(visibility),
                           stat_error=stat_error, histogram=total,
                           bin_centers=centers, n_survivors=survivors,
                           fringe_phase=float(phase))


def _third_mask_coefficients(cfg, s, v):
    if cfg.grating3 is None:
        return 1.0, 1.0 + 0.0j
    t3_0 = _probability_coefficient(cfg.grating3, s, v, 0).real
    t3_1 = _probability_coefficient(cfg.grating3, s, v, 1)
    return t3_0, t3_1


def classical_visibility_quadrature(cfg: InterferometerConfig,
                                    v_z: Optional[float] = None,
                                    n_grid: int = 1 << 14,
                                    n_velocities: int = 1) -> float:
    """Deterministic twin of the Monte Carlo moire visibility.

    Valid for an exactly incoherent divergence window (an integer number of
    shadow periods): the arrival phase factorizes into independent
    single-grating integrals, with the force impulse entering the central
    one. With ``n_velocities > 1`` the fringe components are averaged over
    the beam's longitudinal velocity distribution before taking the ratio.
    """
    if cfg.mode != "spatial":
        raise ValueError("classical model requires spatial mode")
    s = cfg.species
    d = cfg.period_d
    x = (np.arange(n_grid) + 0.5) * d / n_grid

    if n_velocities > 1:
        from .core import velocity_weights
        pairs = velocity_weights(cfg.beam, n_velocities)
    else:
        pairs = [(cfg.beam.mean_velocity if v_z is None else v_z, 1.0)]

    numerator = 0.0 + 0.0j
    denominator = 0.0
    for v, w in pairs:
        t_flight = cfg.separation_L / v
        t2 = _survival_probability(cfg.grating2, s, v, x)
        kick = _kick_array(cfg.grating2, s, v, x)
        q0 = t2.mean()
        q1 = np.mean(t2 * np.exp(-2j * np.pi * (2.0 * x + kick * t_flight) / d))
        t1_0 = _probability_coefficient(cfg.grating1, s, v, 0).real
        t1_1 = _probability_coefficient(cfg.grating1, s, v, 1)
        t3_0, t3_1 = _third_mask_coefficients(cfg, s, v)
        numerator += w * t1_1 * q1 * np.conj(t3_1)
        denominator += w * t1_0 * q0 * t3_0
    return float(2.0 * abs(numerator) / denominator)


__all__ = [
    "RayEnsemble", "ClassicalResult", "deflection_kick",
    "classical_visibility", "classical_visibility_quadrature",
    "AbsorbedRayError", "DegenerateEnsembleError", "StatisticsError",
]
