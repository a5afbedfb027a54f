"""Environmental decoherence channels and their fringe-coefficient reduction.

A channel is an event rate R(t) plus a decoherence function eta(x) with
|eta| <= 1 and eta(0) = 1. Between the outer gratings the path separation
probed by the environment grows linearly from zero to its maximum at the
central grating; the order-m fringe coefficient is multiplied by

    exp( -int R(t) [1 - eta( (m d / 2) (|v_z t| - L) / L_T )] dt )

over the transit (with L, v_z t, L_T replaced by T, t, T_T in the time
domain).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np
from scipy import integrate

from .constants import AMU, BOLTZMANN_KB, HBAR
from .core import de_broglie_wavelength, talbot_length, talbot_time
from .species import Species

QUAD_RELTOL = 1e-6


class QuadratureError(RuntimeError):
    """Decoherence-factor quadrature failed to converge."""


@dataclass
class DecoherenceChannel:
    """One environmental coupling: event rate and coherence reduction.

    ``rate`` may be a constant (events/s) or a callable of time relative to
    the central grating; ``eta`` maps a path separation in meters to a
    complex factor with magnitude <= 1.
    """

    rate: Union[float, Callable[[float], float]]
    eta: Callable[[float], complex]
    label: str = "channel"

    def rate_at(self, t: float) -> float:
        return self.rate(t) if callable(self.rate) else float(self.rate)


@dataclass(frozen=True)
class GasEnvironment:
    """Residual gas parameters for collisional decoherence."""

    gas_mass: float        # kg
    temperature: float     # K
    pressure: float        # Pa
    scattering_model: str = "isotropic_constant_amplitude"
    scattering_table: tuple = ()   # (theta_rad, |f|^2) rows for "user_table"

    def __post_init__(self):
        if self.gas_mass <= 0.0 or self.temperature <= 0.0 or self.pressure < 0.0:
            raise ValueError("gas parameters must be positive")
        if self.scattering_model not in ("isotropic_constant_amplitude",
                                         "user_table"):
            raise ValueError(
                f"unknown scattering model {self.scattering_model!r}")


def decoherence_factor(channel: DecoherenceChannel, m: int, *, period_d: float,
                       half_span: float, talbot_scale: float,
                       speed: float = 1.0) -> complex:
    """Exponential reduction factor of the order-m coefficient.

    ``half_span`` is L/v_z (spatial) or T (time domain); ``talbot_scale``
    is L_T/v_z or T_T so that the separation argument reads
    (m d / 2)(|t| - half_span) / talbot_scale with t the time relative to
    the central grating.
    """
    if m == 0 and not callable(channel.rate):
        return 1.0 + 0.0j

    def integrand_real(t):
        x = (m * period_d / 2.0) * (abs(t) - half_span) / talbot_scale
        return channel.rate_at(t) * (1.0 - np.real(channel.eta(x)))

    def integrand_imag(t):
        x = (m * period_d / 2.0) * (abs(t) - half_span) / talbot_scale
        return -channel.rate_at(t) * np.imag(channel.eta(x))

    re, re_err = integrate.quad(integrand_real, -half_span, half_span,
                                epsrel=QUAD_RELTOL, epsabs=1e-300, limit=400)
    im, im_err = integrate.quad(integrand_imag, -half_span, half_span,
                                epsrel=QUAD_RELTOL, epsabs=1e-300, limit=400)
    for value, err in ((re, re_err), (im, im_err)):
        if abs(value) > 1e-12 and err > 10.0 * QUAD_RELTOL * abs(value) + 1e-9:
            raise QuadratureError(
                f"decoherence quadrature residual {err:.2e} for value {value:.2e}")
    return complex(math.exp(-re) * complex(math.cos(-im), math.sin(-im)))


def channel_factor(channel: DecoherenceChannel, cfg, m: int,
                   v_z: float) -> complex:
    """Reduction factor of the order-m coefficient for a full configuration."""
    d = cfg.period_d
    if cfg.mode == "spatial":
        lam = de_broglie_wavelength(cfg.species.mass, v_z)
        lt = talbot_length(d, lam)
        return decoherence_factor(channel, m, period_d=d,
                                  half_span=cfg.separation_L / v_z,
                                  talbot_scale=lt / v_z)
    tt = talbot_time(cfg.species.mass, d)
    return decoherence_factor(channel, m, period_d=d,
                              half_span=cfg.pulse_delay_T, talbot_scale=tt)


def apply_channel(B_value: complex, channel: DecoherenceChannel, cfg,
                  m: int, v_z: float = 1.0) -> complex:
    """Multiply a Talbot-Lau coefficient by the channel's reduction factor."""
    return B_value * channel_factor(channel, cfg, m, v_z)


# ---------------------------------------------------------------------------
# collisional channel

def _maxwell_speed_nodes(gas_mass: float, temperature: float, n: int):
    """Gauss-Legendre nodes/weights under the Maxwell-Boltzmann speed pdf."""
    vp = math.sqrt(2.0 * BOLTZMANN_KB * temperature / gas_mass)
    nodes, weights = np.polynomial.legendre.leggauss(n)
    v = 0.5 * (nodes + 1.0) * 5.0 * vp          # [0, 5 v_p]
    pdf = v ** 2 * np.exp(-(v / vp) ** 2)
    w = weights * pdf
    return v, w / w.sum()


def collisional_eta(env: GasEnvironment, x: float, n_angle: int = 64,
                    n_velocity: int = 32) -> complex:
    """Decoherence function of one gas collision at path separation x.

    Angular average of sinc(sin(theta/2) 2 v_g m_g x / hbar) over the
    normalized differential cross section, then a thermal average over the
    gas speed.
    """
    if x < 0.0:
        raise ValueError("x must be nonnegative")
    theta_nodes, theta_weights = np.polynomial.legendre.leggauss(n_angle)
    theta = 0.5 * (theta_nodes + 1.0) * math.pi
    solid = np.sin(theta) * theta_weights
    if env.scattering_model == "isotropic_constant_amplitude":
        f2 = np.ones_like(theta)
    else:
        table = np.asarray(env.scattering_table, dtype=float)
        if table.size == 0:
            raise ValueError("user_table model requires a scattering table")
        f2 = np.interp(theta, table[:, 0], table[:, 1])
    weight = solid * f2
    norm = weight.sum()
    if norm <= 0.0:
        raise QuadratureError("angular quadrature degenerate")
    weight = weight / norm

    v_nodes, v_weights = _maxwell_speed_nodes(env.gas_mass, env.temperature,
                                              n_velocity)
    z = np.outer(v_nodes, np.sin(theta / 2.0)) * (2.0 * env.gas_mass * x / HBAR)
    sinc = np.sinc(z / math.pi)   # sin(z)/z
    return complex(np.sum(v_weights[:, None] * weight[None, :] * sinc))


def mean_gas_speed(env: GasEnvironment) -> float:
    """Mean Maxwell-Boltzmann speed of the gas particles."""
    return math.sqrt(8.0 * BOLTZMANN_KB * env.temperature
                     / (math.pi * env.gas_mass))


def collisional_channel(env: GasEnvironment, s: Species,
                        total_cross_section: float,
                        n_angle: int = 64, n_velocity: int = 32,
                        n_table: int = 200) -> DecoherenceChannel:
    """Channel for scattering of residual gas off the delocalized particle.

    R = n sigma v_rel with the gas number density n = p / (kB T) and the
    mean Maxwell-Boltzmann gas speed as relative-speed convention (the beam
    is slow compared to a room-temperature gas). eta is tabulated on a
    separation grid and interpolated.
    """
    if total_cross_section <= 0.0:
        raise ValueError("cross section must be positive")
    n_density = env.pressure / (BOLTZMANN_KB * env.temperature)
    rate = n_density * total_cross_section * mean_gas_speed(env)

    # eta decays on the momentum-exchange wavelength scale; tabulate out to
    # a few microns which covers every near-field separation of interest
    x_grid = np.linspace(0.0, 5e-6, n_table)
    eta_grid = np.array([collisional_eta(env, x, n_angle, n_velocity)
                         for x in x_grid])

    def eta(x):
        return complex(np.interp(abs(x), x_grid, eta_grid.real))

    return DecoherenceChannel(rate=rate, eta=eta, label="collisional")


# ---------------------------------------------------------------------------
# thermal emission channel

def thermal_emission_channel(spectrum) -> DecoherenceChannel:
    """Channel for isotropic single-photon emission events.

    ``spectrum`` is a sequence of (wavelength_m, rate_hz) pairs. Each
    emitted photon of wavelength lambda reduces coherence over separation x
    by sinc(2 pi x / lambda).
    """
    spectrum = [(float(lam), float(r)) for lam, r in spectrum]
    if not spectrum:
        raise ValueError("emission spectrum is empty")
    for lam, r in spectrum:
        if lam <= 0.0 or r < 0.0:
            raise ValueError("wavelengths must be positive and rates nonnegative")
    total = sum(r for _, r in spectrum)
    lams = np.array([lam for lam, _ in spectrum])
    weights = np.array([r for _, r in spectrum])
    weights = weights / total if total > 0.0 else weights

    def eta(x):
        z = 2.0 * np.pi * abs(x) / lams
        return complex(np.sum(weights * np.sinc(z / np.pi)))

    return DecoherenceChannel(rate=total, eta=eta, label="thermal_emission")


def absorption_visibility_factor(mean_photons: float,
                                 fringe_shift_per_photon: float) -> float:
    """First-order visibility factor for Poissonian photon absorption.

    Each absorbed photon shifts the interferogram by a fixed fraction s of
    the period; the Poisson-weighted superposition multiplies S_1 by
    exp(n (exp(2 pi i s) - 1)), whose magnitude this returns.
    """
    if mean_photons < 0.0:
        raise ValueError("mean_photons must be nonnegative")
    return math.exp(mean_photons
                    * (math.cos(2.0 * math.pi * fringe_shift_per_photon) - 1.0))


# ---------------------------------------------------------------------------
# spontaneous localization channel

def csl_channel(lambda0: float, r_c: float, mass: float) -> DecoherenceChannel:
    """Continuous-spontaneous-localization channel.

    Rate lambda0 (m / amu)^2 with the single-nucleon rate convention, and a
    gaussian localization function of width r_c.
    """
    if lambda0 <= 0.0 or r_c <= 0.0:
        raise ValueError("lambda0 and r_c must be positive")
    if mass <= 0.0:
        raise ValueError("mass must be positive")
    rate = lambda0 * (mass / AMU) ** 2

    def eta(x):
        return math.exp(-x * x / (4.0 * r_c * r_c))

    return DecoherenceChannel(rate=rate, eta=eta, label="csl")


# ---------------------------------------------------------------------------
# file interfaces

def load_two_column(path) -> list[tuple[float, float]]:
    """Read a two-column numeric text file (comma or whitespace separated)."""
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.replace(",", " ").split()
            if len(parts) < 2:
                raise ValueError(f"malformed table line: {line!r}")
            rows.append((float(parts[0]), float(parts[1])))
    if not rows:
        raise ValueError(f"empty table file {path}")
    return rows


def load_emission_spectrum(path) -> DecoherenceChannel:
    """Thermal emission channel from a (wavelength_m, rate_hz) text file."""
    return thermal_emission_channel(load_two_column(path))


def load_scattering_table(path) -> tuple:
    """(theta_rad, |f|^2) rows for the user_table scattering model."""
    return tuple(load_two_column(path))


__all__ = [
    "DecoherenceChannel", "GasEnvironment", "decoherence_factor",
    "channel_factor", "apply_channel", "collisional_eta", "mean_gas_speed",
    "collisional_channel", "thermal_emission_channel",
    "absorption_visibility_factor", "csl_channel",
    "load_two_column", "load_emission_spectrum", "load_scattering_table",
    "QuadratureError",
]
