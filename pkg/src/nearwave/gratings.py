"""Complex periodic transmission functions of the three grating families.

A grating is reduced to one period of its complex transmission amplitude
t(x), sampled on a uniform grid, from which Fourier coefficients b_j are
extracted. Material masks carry an eikonal dispersion phase accumulated on
straight trajectories through the slit; laser gratings are pure phase
masks; pulsed ionizing gratings combine a periodic survival amplitude with
a dipole phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR, LIGHT_SPEED_C, VACUUM_PERMITTIVITY_EPS0
from .species import Species

DEFAULT_GRID_SIZE = 4096
DEFAULT_J_MAX = 64
DEFAULT_WALL_CUTOFF = 1e-9  # molecules closer to a wall are counted as absorbed


class SlitBlockedError(ValueError):
    """The wall cutoff swallows the whole slit; nothing is transmitted."""


class AliasingError(ValueError):
    """Requested Fourier order is not resolved by the sample grid."""


@dataclass(frozen=True)
class MaterialGrating:
    """Nanofabricated absorptive mask with an optional dispersion interaction.

    ``interaction`` selects the wall potential inside the slit:
    ``"none"``, ``"vdw_r3"`` (C3/r^3) or ``"casimir_polder_r4"``
    (retarded asymptote, C4/r^4 with C4 derived from the static
    polarizability).
    """

    period_d: float
    open_fraction_f: float
    thickness_b: float = 0.0
    interaction: str = "none"
    wall_cutoff: float = DEFAULT_WALL_CUTOFF

    def __post_init__(self):
        if self.period_d <= 0.0:
            raise ValueError("period_d must be positive")
        if not 0.0 < self.open_fraction_f < 1.0:
            raise ValueError("open_fraction_f must lie in (0, 1)")
        if self.thickness_b < 0.0:
            raise ValueError("thickness_b must be nonnegative")
        if self.wall_cutoff <= 0.0:
            raise ValueError("wall_cutoff must be positive")
        if self.interaction not in ("none", "vdw_r3", "casimir_polder_r4"):
            raise ValueError(f"unknown interaction {self.interaction!r}")


@dataclass(frozen=True)
class LaserPhaseGrating:
    """Off-resonant retro-reflected standing light wave (pure phase mask)."""

    period_d: float
    power_P: float
    vertical_waist_wy: float
    laser_wavelength: float

    def __post_init__(self):
        if self.period_d <= 0.0 or self.vertical_waist_wy <= 0.0 \
                or self.laser_wavelength <= 0.0:
            raise ValueError("geometry parameters must be positive")
        if self.power_P < 0.0:
            raise ValueError("power_P must be nonnegative")
        if abs(self.period_d - self.laser_wavelength / 2.0) > 1e-9 * self.period_d:
            raise ValueError("period_d must equal laser_wavelength / 2")


@dataclass(frozen=True)
class IonizingGrating:
    """Pulsed standing-wave single-photon-ionization grating."""

    period_d: float
    mean_absorbed_photons_n0: float
    phase_amplitude_phi0: float = 0.0

    def __post_init__(self):
        if self.period_d <= 0.0:
            raise ValueError("period_d must be positive")
        if self.mean_absorbed_photons_n0 < 0.0:
            raise ValueError("mean_absorbed_photons_n0 must be nonnegative")


@dataclass(frozen=True)
class TransmissionProfile:
    """One period of t(x) on a uniform grid starting at the slit center."""

    period_d: float
    samples: np.ndarray
    grid_size: int

    def __post_init__(self):
        n = self.grid_size
        if n < 256 or n & (n - 1):
            raise ValueError("grid_size must be a power of two >= 256")
        if len(self.samples) != n:
            raise ValueError("sample count must equal grid_size")
        if np.max(np.abs(self.samples)) > 1.0 + 1e-12:
            raise ValueError("|t(x)| must not exceed 1")


def _wall_coefficient(g: MaterialGrating, s: Species):
    """(C, exponent) of the single-wall potential magnitude C / r^n."""
    if g.interaction == "vdw_r3":
        return s.c3_coefficient, 3
    if g.interaction == "casimir_polder_r4":
        alpha_si = 4.0 * math.pi * VACUUM_PERMITTIVITY_EPS0 * s.alpha_stat_vol
        c4 = 3.0 * HBAR * LIGHT_SPEED_C * alpha_si / (32.0 * math.pi ** 2
                                                      * VACUUM_PERMITTIVITY_EPS0)
        return c4, 4
    return 0.0, 3


def material_slit_phase(g: MaterialGrating, s: Species, v_z: float, x):
    """Eikonal phase at offset ``x`` from the slit center (walls at +-a/2).

    phi(x) = (b / hbar v_z) [C(r-) + C(r+)] with r+- the wall distances.
    """
    a = g.open_fraction_f * g.period_d
    coeff, power = _wall_coefficient(g, s)
    if coeff == 0.0 or g.thickness_b == 0.0:
        return np.zeros_like(np.asarray(x, dtype=float))
    r_minus = np.maximum(a / 2.0 + np.asarray(x, dtype=float), g.wall_cutoff)
    r_plus = np.maximum(a / 2.0 - np.asarray(x, dtype=float), g.wall_cutoff)
    return g.thickness_b / (HBAR * v_z) * coeff * (r_minus ** -power
                                                   + r_plus ** -power)


def _cell_open_fraction(centers, half_width, open_half):
    """Fraction of each grid cell inside the open interval (-open_half, open_half).

    ``centers`` are signed offsets from the slit center, wrapped to one
    period. Fractional coverage keeps the binary Fourier coefficients
    accurate at moderate grid sizes.
    """
    lo = np.abs(centers) - half_width
    hi = np.abs(centers) + half_width
    overlap = np.clip(open_half - lo, 0.0, 2.0 * half_width)
    overlap[hi <= open_half] = 2.0 * half_width
    return overlap / (2.0 * half_width)


def material_transmission(g: MaterialGrating, s: Species, v_z: float,
                          grid_size: int = DEFAULT_GRID_SIZE) -> TransmissionProfile:
    """Sample t(x) of a material mask over one period (slit centered at x=0)."""
    if v_z <= 0.0:
        raise ValueError("v_z must be positive")
    a = g.open_fraction_f * g.period_d
    # the cutoff models absorption where the eikonal phase diverges; an
    # interaction-free mask keeps its full geometric open fraction
    cutoff = g.wall_cutoff if g.interaction != "none" else 0.0
    open_half = a / 2.0 - cutoff
    if open_half <= 0.0:
        raise SlitBlockedError("wall_cutoff >= half the slit width: slit fully blocked")

    d = g.period_d
    x = np.arange(grid_size) * d / grid_size
    # signed offset from the nearest slit center
    offset = np.where(x > d / 2.0, x - d, x)
    amp = _cell_open_fraction(offset, d / (2.0 * grid_size), open_half)
    phase = np.zeros(grid_size)
    inside = amp > 0.0
    if g.interaction != "none":
        phase[inside] = material_slit_phase(g, s, v_z, offset[inside])
    samples = amp * np.exp(1j * phase)
    return TransmissionProfile(period_d=d, samples=samples, grid_size=grid_size)


def laser_phase_amplitude(g: LaserPhaseGrating, s: Species, v_z: float) -> float:
    """Peak phase phi0 of the standing-wave dipole potential.

    Line-integrating the time-averaged dipole potential of a retro-reflected
    gaussian beam along the trajectory gives
    phi0 = 8 sqrt(2 pi) alpha_vol P / (hbar c w_y v_z); the longitudinal
    waist cancels in the integral.
    """
    if v_z <= 0.0:
        raise ValueError("v_z must be positive")
    return (8.0 * math.sqrt(2.0 * math.pi) * s.alpha_opt_vol * g.power_P
            / (HBAR * LIGHT_SPEED_C * g.vertical_waist_wy * v_z))


def laser_phase_transmission(g: LaserPhaseGrating, s: Species, v_z: float,
                             grid_size: int = DEFAULT_GRID_SIZE) -> TransmissionProfile:
    """Pure phase mask t(x) = exp(i phi0 cos^2(pi x / d))."""
    phi0 = laser_phase_amplitude(g, s, v_z)
    x = np.arange(grid_size) * g.period_d / grid_size
    samples = np.exp(1j * phi0 * np.cos(np.pi * x / g.period_d) ** 2)
    return TransmissionProfile(period_d=g.period_d, samples=samples,
                               grid_size=grid_size)


def ionizing_transmission(g: IonizingGrating,
                          grid_size: int = DEFAULT_GRID_SIZE) -> TransmissionProfile:
    """Combined depletion/phase mask of a pulsed ionizing standing wave.

    Survival probability |t|^2 = exp(-n0 cos^2(pi x / d)); the antinodes at
    x = 0 mod d play the role of the grating bars.
    """
    x = np.arange(grid_size) * g.period_d / grid_size
    mod = np.cos(np.pi * x / g.period_d) ** 2
    samples = np.exp(-(g.mean_absorbed_photons_n0 / 2.0) * mod) \
        * np.exp(1j * g.phase_amplitude_phi0 * mod)
    return TransmissionProfile(period_d=g.period_d, samples=samples,
                               grid_size=grid_size)


@dataclass(frozen=True)
class CoefficientTable:
    """Fourier coefficients b_j of a periodic function, |j| <= j_max.

    Index ``j`` maps to ``values[j + j_max]``; orders outside the table are
    treated as zero.
    """

    j_max: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != 2 * self.j_max + 1:
            raise ValueError("values must have length 2 j_max + 1")

    def get(self, j: int) -> complex:
        if abs(j) > self.j_max:
            return 0.0 + 0.0j
        return complex(self.values[j + self.j_max])

    def padded(self, j_max: int) -> np.ndarray:
        """Coefficient array re-indexed for |j| <= j_max, zero outside."""
        out = np.zeros(2 * j_max + 1, dtype=complex)
        lo = min(self.j_max, j_max)
        out[j_max - lo:j_max + lo + 1] = self.values[self.j_max - lo:self.j_max + lo + 1]
        return out


def fourier_coefficients(p: TransmissionProfile,
                         j_max: int = DEFAULT_J_MAX) -> CoefficientTable:
    """b_j of the sampled transmission, t(x) = sum_j b_j exp(2 pi i j x / d)."""
    if j_max < 1:
        raise ValueError("j_max must be >= 1")
    if j_max > p.grid_size // 2:
        raise AliasingError(
            f"j_max={j_max} exceeds grid_size/2={p.grid_size // 2}")
    spectrum = np.fft.fft(p.samples) / p.grid_size
    j = np.arange(-j_max, j_max + 1)
    values = spectrum[np.mod(j, p.grid_size)]
    return CoefficientTable(j_max=j_max, values=values)


def transmission_probability_coefficients(p: TransmissionProfile,
                                          m_max: int) -> CoefficientTable:
    """Fourier coefficients of the transmission probability |t(x)|^2."""
    probability = (np.abs(p.samples) ** 2).astype(complex)
    intensity = TransmissionProfile(p.period_d, probability, p.grid_size)
    return fourier_coefficients(intensity, m_max)


__all__ = [
    "MaterialGrating", "LaserPhaseGrating", "IonizingGrating",
    "TransmissionProfile", "CoefficientTable",
    "material_transmission", "laser_phase_transmission",
    "ionizing_transmission", "fourier_coefficients",
    "transmission_probability_coefficients",
    "material_slit_phase", "laser_phase_amplitude",
    "SlitBlockedError", "AliasingError",
    "DEFAULT_GRID_SIZE", "DEFAULT_J_MAX", "DEFAULT_WALL_CUTOFF",
]
