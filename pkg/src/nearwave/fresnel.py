"""Direct paraxial Fresnel propagation, used as an independent oracle.

The propagator is a plain quadrature over the aperture samples with the
paraxial phase pi (x_a - x_s)^2 / (lambda L); no fast transform is used,
so its correctness is transparent at desk scale.
"""

from __future__ import annotations

import numpy as np

from .gratings import TransmissionProfile


class UndersamplingError(ValueError):
    """Aperture grid does not resolve the finest Fresnel zone."""

    def __init__(self, required: int, actual: int):
        super().__init__(
            f"aperture grid undersampled: need >= {required} points, "
            f"got {actual}")
        self.required = required
        self.actual = actual


def _check_sampling(aperture_x, wavelength, distance, screen_x):
    dx = np.min(np.diff(aperture_x))
    span = max(abs(aperture_x[0] - screen_x[-1]),
               abs(aperture_x[-1] - screen_x[0]))
    limit = wavelength * distance / (2.0 * span)
    if dx > limit:
        total = aperture_x[-1] - aperture_x[0]
        raise UndersamplingError(required=int(np.ceil(total / limit)) + 1,
                                 actual=len(aperture_x))


def fresnel_propagate(aperture_x, aperture_t, wavelength, distance,
                      screen_x) -> np.ndarray:
    """Intensity on ``screen_x`` a distance ``distance`` behind the aperture.

    ``aperture_t`` is the complex amplitude sampled at ``aperture_x``. The
    result is normalized to unit mean over the screen window.
    """
    if distance <= 0.0:
        raise ValueError("distance must be positive")
    aperture_x = np.asarray(aperture_x, dtype=float)
    aperture_t = np.asarray(aperture_t, dtype=complex)
    screen_x = np.asarray(screen_x, dtype=float)
    _check_sampling(aperture_x, wavelength, distance, screen_x)

    intensity = np.empty(len(screen_x))
    # chunk the screen axis so the phase matrix stays modest in memory
    chunk = max(1, int(4e6 / len(aperture_x)))
    for start in range(0, len(screen_x), chunk):
        xs = screen_x[start:start + chunk, None]
        phase = np.pi * (aperture_x[None, :] - xs) ** 2 / (wavelength * distance)
        field = np.exp(1j * phase) @ aperture_t
        intensity[start:start + chunk] = np.abs(field) ** 2
    mean = intensity.mean()
    if mean == 0.0:
        return intensity
    return intensity / mean


def tile_profile(profile: TransmissionProfile, n_periods: int,
                 samples_per_period: int | None = None):
    """Aperture (x, t) covering ``n_periods`` repeats of a grating profile.

    Optionally resamples each period down to ``samples_per_period`` points
    (must divide the native grid) to keep the quadrature affordable.
    """
    t = profile.samples
    if samples_per_period is not None and samples_per_period != profile.grid_size:
        step = profile.grid_size // samples_per_period
        if step * samples_per_period != profile.grid_size:
            raise ValueError("samples_per_period must divide the grid size")
        t = t[::step]
    n = len(t)
    tiled = np.tile(t, n_periods)
    d = profile.period_d
    x = (np.arange(n_periods * n) + 0.5) * d / n - n_periods * d / 2.0
    return x, tiled


def incoherent_source_pattern(profile1: TransmissionProfile,
                              profile2: TransmissionProfile,
                              wavelength: float, distance: float,
                              n_periods: int, screen_x,
                              n_source: int = 32,
                              samples_per_period: int | None = None):
    """Fresnel twin of the two-grating fringe formula (surface imaging).

    Spherical waves from incoherent source points spanning one period of
    the first mask (weighted by its transmission probability) are diffracted
    at a wide second grating and summed in intensity at the screen. The
    screen window should stay near the center of the grating.
    """
    d = profile1.period_d
    x2, t2 = tile_profile(profile2, n_periods, samples_per_period)
    screen_x = np.asarray(screen_x, dtype=float)

    # source points across one period of G1, weighted by |t1|^2
    xs = (np.arange(n_source) + 0.5) * d / n_source - d / 2.0
    idx = np.round((xs % d) / d * profile1.grid_size).astype(int) % profile1.grid_size
    weights = np.abs(profile1.samples[idx]) ** 2
    if weights.sum() == 0.0:
        raise ValueError("first mask transmits nothing")
    weights = weights / weights.sum()

    total = np.zeros(len(screen_x))
    inv = 1.0 / (wavelength * distance)
    for x1, w in zip(xs, weights):
        if w == 0.0:
            continue
        amp = t2 * np.exp(1j * np.pi * (x2 - x1) ** 2 * inv)
        phase = np.pi * (x2[None, :] - screen_x[:, None]) ** 2 * inv
        field = np.exp(1j * phase) @ amp
        total += w * np.abs(field) ** 2
    mean = total.mean()
    return total / mean if mean else total


__all__ = ["fresnel_propagate", "tile_profile", "incoherent_source_pattern",
           "UndersamplingError"]
