"""Quantum forward model of three-grating near-field interferometers.

The periodic particle density behind the interferometer is expanded in a
Fourier series whose components combine per-grating coefficient tables:
the mask coefficients of the outer gratings enter at zero argument and the
diffraction coefficients of the central grating at the Talbot argument
m L / L_T (or m T / T_T in the time domain). The sinusoidal visibility is
the ratio 2 |S_1 / S_0| of the transmitted signal components.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import (BeamState, de_broglie_wavelength, talbot_length,
                   talbot_time, velocity_weights)
from .gratings import (CoefficientTable, IonizingGrating, LaserPhaseGrating,
                       MaterialGrating, DEFAULT_GRID_SIZE, DEFAULT_J_MAX,
                       fourier_coefficients, ionizing_transmission,
                       laser_phase_transmission, material_transmission)
from .species import Species

DEFAULT_M_MAX = 8
XI_SANITY_BOUND = 1e6
TRUNCATION_WARN_LEVEL = 1e-8

GratingSpec = MaterialGrating | LaserPhaseGrating | IonizingGrating


class CoherencePreparationError(ValueError):
    """Outer grating is a pure phase mask: no coherence preparation/readout."""


class TruncationWarning(UserWarning):
    pass


class NonSinusoidalWarning(UserWarning):
    """Signal components imply 2 |S_1 / S_0| > 1: not a sinusoidal fringe."""


@dataclass(frozen=True)
class InterferometerConfig:
    """Full description of a three-grating experiment.

    ``grating3 = None`` selects surface-imaging mode: the fringe pattern at
    the third-grating plane is returned without the readout convolution.
    """

    grating1: GratingSpec
    grating2: GratingSpec
    species: Species
    beam: BeamState
    grating3: Optional[GratingSpec] = None
    separation_L: Optional[float] = None
    pulse_delay_T: Optional[float] = None
    mode: str = "spatial"

    def __post_init__(self):
        if self.mode not in ("spatial", "time_domain"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.mode == "spatial":
            if self.separation_L is None or self.separation_L <= 0.0:
                raise ValueError("spatial mode requires separation_L > 0")
        else:
            if self.pulse_delay_T is None or self.pulse_delay_T <= 0.0:
                raise ValueError("time domain mode requires pulse_delay_T > 0")
        d = self.grating1.period_d
        gratings = [self.grating1, self.grating2]
        if self.grating3 is not None:
            gratings.append(self.grating3)
        for g in gratings:
            if abs(g.period_d - d) > 1e-9 * d:
                raise ValueError("all grating periods must be equal")

    @property
    def period_d(self) -> float:
        return self.grating1.period_d


@dataclass
class FourierPattern:
    """Fourier components A_m of a real periodic density, |m| <= m_max."""

    period_d: float
    components: np.ndarray  # length 2 m_max + 1, index m + m_max
    truncation_residual: float = 0.0

    @property
    def m_max(self) -> int:
        return (len(self.components) - 1) // 2

    def get(self, m: int) -> complex:
        if abs(m) > self.m_max:
            return 0.0 + 0.0j
        return complex(self.components[m + self.m_max])

    def reconstruct(self, x) -> np.ndarray:
        """Evaluate the density sum_m A_m exp(2 pi i m x / d) (real part)."""
        x = np.asarray(x, dtype=float)
        m = np.arange(-self.m_max, self.m_max + 1)
        phases = np.exp(2j * np.pi * np.outer(x / self.period_d, m))
        return np.real(phases @ self.components)


def grating_transmission(g: GratingSpec, s: Species, v_z: float,
                         grid_size: int = DEFAULT_GRID_SIZE):
    """Transmission profile of any grating family at longitudinal speed v_z."""
    if isinstance(g, MaterialGrating):
        return material_transmission(g, s, v_z, grid_size)
    if isinstance(g, LaserPhaseGrating):
        return laser_phase_transmission(g, s, v_z, grid_size)
    if isinstance(g, IonizingGrating):
        return ionizing_transmission(g, grid_size)
    raise TypeError(f"unsupported grating type {type(g).__name__}")


def grating_coefficients(g: GratingSpec, s: Species, v_z: float,
                         grid_size: int = DEFAULT_GRID_SIZE,
                         j_max: int = DEFAULT_J_MAX) -> CoefficientTable:
    return fourier_coefficients(grating_transmission(g, s, v_z, grid_size), j_max)


def talbot_lau_coefficient(b: CoefficientTable, m: int, xi: float) -> complex:
    """B_m(xi) = sum_j b_j conj(b_{j-m}) exp(i pi (m - 2j) xi)."""
    if abs(xi) >= XI_SANITY_BOUND:
        raise ValueError("xi outside sanity bound")
    j_max = b.j_max
    j = np.arange(-j_max, j_max + 1)
    shifted = b.padded(j_max + abs(m))[j - m + j_max + abs(m)]
    phases = np.exp(1j * np.pi * (m - 2 * j) * xi)
    return complex(np.sum(b.values * np.conj(shifted) * phases))


def _check_truncation(b: CoefficientTable):
    edge = max(abs(b.get(b.j_max)), abs(b.get(-b.j_max)))
    if edge ** 2 > TRUNCATION_WARN_LEVEL:
        warnings.warn("coefficient table truncated before decay: "
                      f"|b_jmax|^2 = {edge ** 2:.2e}", TruncationWarning,
                      stacklevel=3)


def talbot_lau_coefficients(b: CoefficientTable, xi: float,
                            m_max: int = DEFAULT_M_MAX) -> CoefficientTable:
    """Table of B_m(xi) for |m| <= m_max at a common argument xi."""
    if m_max > b.j_max:
        raise ValueError("m_max must not exceed j_max")
    _check_truncation(b)
    values = np.array([talbot_lau_coefficient(b, m, xi)
                       for m in range(-m_max, m_max + 1)])
    return CoefficientTable(j_max=m_max, values=values)


def talbot_pattern(b: CoefficientTable, L_over_LT: float,
                   m_max: int = DEFAULT_M_MAX) -> FourierPattern:
    """Coherent self-imaging pattern: component m is B_m(m L / L_T).

    The grating period is not known to a bare coefficient table, so the
    caller scales the x axis; period 1 is used here.
    """
    _check_truncation(b)
    comps = np.array([talbot_lau_coefficient(b, m, m * L_over_LT)
                      for m in range(-m_max, m_max + 1)])
    residual = abs(b.get(b.j_max)) ** 2 + abs(b.get(-b.j_max)) ** 2
    return FourierPattern(period_d=1.0, components=comps,
                          truncation_residual=residual)


def _require_absorptive(table_profile, which: str):
    amp = np.abs(table_profile.samples)
    amp_span = float(np.max(amp) - np.min(amp))
    if amp_span < 1e-12:
        phase = np.angle(table_profile.samples)
        if float(np.max(phase) - np.min(phase)) > 1e-9:
            raise CoherencePreparationError(
                f"{which} is a pure phase grating: no coherence "
                "preparation/readout")


def _decoherence_factor(channels, cfg: InterferometerConfig, m: int,
                        v_z: float) -> complex:
    if not channels:
        return 1.0
    from .decoherence import channel_factor
    factor = 1.0 + 0.0j
    for channel in channels:
        factor *= channel_factor(channel, cfg, m, v_z)
    return factor


def detector_signal(cfg: InterferometerConfig, v_z: float,
                    m_max: int = DEFAULT_M_MAX,
                    j_max: int = DEFAULT_J_MAX,
                    grid_size: int = DEFAULT_GRID_SIZE,
                    channels: Sequence = ()) -> np.ndarray:
    """Fourier components S_m (m = 0 .. m_max) of the transmitted signal.

    S_m = conj(B1_m(0)) * B2_{2m}(m L / L_T) * conj(B3_m(0)); the last
    factor is dropped in surface-imaging mode. Decoherence channels
    multiply the central-grating coefficient by its exponential reduction
    factor.
    """
    if v_z <= 0.0:
        raise ValueError("v_z must be positive")
    s = cfg.species
    xi_unit = _xi_per_order(cfg, v_z)

    p1 = grating_transmission(cfg.grating1, s, v_z, grid_size)
    _require_absorptive(p1, "grating1")
    b1 = fourier_coefficients(p1, j_max)
    b2 = grating_coefficients(cfg.grating2, s, v_z, grid_size, j_max)
    if cfg.grating3 is not None:
        p3 = grating_transmission(cfg.grating3, s, v_z, grid_size)
        _require_absorptive(p3, "grating3")
        b3 = fourier_coefficients(p3, j_max)
    else:
        b3 = None

    signal = np.zeros(m_max + 1, dtype=complex)
    for m in range(m_max + 1):
        term = np.conj(talbot_lau_coefficient(b1, m, 0.0))
        term *= talbot_lau_coefficient(b2, 2 * m, m * xi_unit)
        if b3 is not None:
            term *= np.conj(talbot_lau_coefficient(b3, m, 0.0))
        term *= _decoherence_factor(channels, cfg, 2 * m, v_z)
        signal[m] = term
    return signal


def _xi_per_order(cfg: InterferometerConfig, v_z: float) -> float:
    """Talbot argument per fringe order: L / L_T or T / T_T."""
    if cfg.mode == "spatial":
        lam = de_broglie_wavelength(cfg.species.mass, v_z)
        return cfg.separation_L / talbot_length(cfg.period_d, lam)
    return cfg.pulse_delay_T / talbot_time(cfg.species.mass, cfg.period_d)


def sinusoidal_visibility(signal: np.ndarray) -> float:
    """Amplitude-over-offset visibility 2 |S_1 / S_0| of the fringe signal."""
    s0 = signal[0]
    if s0 == 0:
        raise ZeroDivisionError("zeroth signal component vanishes")
    value = 2.0 * abs(signal[1] / s0)
    if value > 1.0:
        warnings.warn(f"visibility {value:.3f} > 1: non-sinusoidal regime",
                      NonSinusoidalWarning, stacklevel=2)
    return value


def velocity_averaged_signal(cfg: InterferometerConfig,
                             n_velocities: int = 16,
                             m_max: int = DEFAULT_M_MAX,
                             j_max: int = DEFAULT_J_MAX,
                             grid_size: int = DEFAULT_GRID_SIZE,
                             channels: Sequence = ()) -> np.ndarray:
    """Signal components averaged over the beam velocity distribution."""
    total = np.zeros(m_max + 1, dtype=complex)
    for v, w in velocity_weights(cfg.beam, n_velocities):
        total += w * detector_signal(cfg, v, m_max, j_max, grid_size, channels)
    return total


def velocity_averaged_pattern(cfg: InterferometerConfig,
                              n_velocities: int = 16,
                              m_max: int = DEFAULT_M_MAX,
                              j_max: int = DEFAULT_J_MAX,
                              grid_size: int = DEFAULT_GRID_SIZE,
                              channels: Sequence = ()):
    """(FourierPattern, visibility) after velocity averaging."""
    signal = velocity_averaged_signal(cfg, n_velocities, m_max, j_max,
                                      grid_size, channels)
    comps = np.concatenate([np.conj(signal[:0:-1]), signal])
    residual = abs(signal[m_max]) / max(abs(signal[0]), 1e-300)
    pattern = FourierPattern(period_d=cfg.period_d, components=comps,
                             truncation_residual=float(residual))
    return pattern, sinusoidal_visibility(signal)


def time_domain_visibility(cfg: InterferometerConfig, T: float,
                           m_max: int = DEFAULT_M_MAX,
                           j_max: int = DEFAULT_J_MAX,
                           grid_size: int = DEFAULT_GRID_SIZE,
                           channels: Sequence = ()) -> float:
    """Visibility of a pulsed (time-domain) configuration at delay T.

    The formula is velocity independent: the Talbot argument is T / T_T and
    ionizing-grating coefficients do not involve v_z.
    """
    if T <= 0.0:
        raise ValueError("T must be positive")
    if cfg.mode != "time_domain":
        raise ValueError("config must be in time_domain mode")
    run_cfg = _with_delay(cfg, T)
    # v_z is a dummy for ionizing gratings
    signal = detector_signal(run_cfg, 1.0, m_max, j_max, grid_size, channels)
    if signal[0] == 0:
        return 0.0
    if abs(signal[1]) == 0.0:
        return 0.0
    return sinusoidal_visibility(signal)


def _with_delay(cfg: InterferometerConfig, T: float) -> InterferometerConfig:
    if cfg.pulse_delay_T == T:
        return cfg
    return InterferometerConfig(
        grating1=cfg.grating1, grating2=cfg.grating2, grating3=cfg.grating3,
        species=cfg.species, beam=cfg.beam, pulse_delay_T=T,
        mode="time_domain")


__all__ = [
    "InterferometerConfig", "FourierPattern", "GratingSpec",
    "grating_transmission", "grating_coefficients",
    "talbot_lau_coefficient", "talbot_lau_coefficients", "talbot_pattern",
    "detector_signal", "sinusoidal_visibility",
    "velocity_averaged_signal", "velocity_averaged_pattern",
    "time_domain_visibility",
    "CoherencePreparationError", "TruncationWarning", "NonSinusoidalWarning",
    "DEFAULT_M_MAX",
]
