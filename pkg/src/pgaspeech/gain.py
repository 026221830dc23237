"""The PGA gain function and its application to a magnitude spectrum.

H = sqrt((1 - c_yd^2) / (1 - c_xd^2)) with

    c_yd = (gamma + rho^2 - xi) / (2 sqrt(gamma rho))
    c_xd = (gamma - rho^2 - xi) / (2 sqrt(xi rho))

At rho = 1 this is exactly the classical geometric-approach gain. Because
gamma and xi are independent estimates, the cosines may leave [-1, 1]; the
ratio stays valid as long as numerator and denominator share a sign. When the
signs disagree (no realizable triangle), the gain falls back to the
consistent-triangle value sqrt(xi / gamma).
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GainGuards:
    """Numerical guards around the gain evaluation; every firing is recorded."""

    cos_delta: float = 1e-6
    h_floor: float = 0.05
    h_ceil: float = 10.0
    rho_floor: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.cos_delta < 1.0:
            raise ValueError("cos_delta must be in (0, 1)")
        if not 0.0 <= self.h_floor <= self.h_ceil:
            raise ValueError("need 0 <= h_floor <= h_ceil")
        if not 0.0 < self.rho_floor <= 1.0:
            raise ValueError("rho_floor must be in (0, 1]")


@dataclass
class GainDiagnostics:
    """Gain values plus clamped cosines and flags for every guard that fired."""

    c_yd: np.ndarray
    c_xd: np.ndarray
    h_raw: np.ndarray
    h: np.ndarray
    rho_floored: np.ndarray
    cos_yd_out: np.ndarray
    cos_xd_out: np.ndarray
    triangle_repair: np.ndarray
    h_floored: np.ndarray
    h_ceiled: np.ndarray


def h_pga(gamma, xi, rho, guards=None):
    """Evaluate the gain for per-bin (gamma, xi, rho); rho = 1 gives the GA gain.

    Returns GainDiagnostics; `h` is the final clamped gain, `h_raw` the value
    before the [h_floor, h_ceil] clamp.
    """
    if guards is None:
        guards = GainGuards()
    g, x, r = np.broadcast_arrays(
        np.asarray(gamma, dtype=np.float64),
        np.asarray(xi, dtype=np.float64),
        np.asarray(rho, dtype=np.float64),
    )
    if not (np.all(np.isfinite(g)) and np.all(np.isfinite(x)) and np.all(np.isfinite(r))):
        raise ValueError("non-finite gain input")
    if np.any(g <= 0.0) or np.any(x <= 0.0):
        raise ValueError("gamma and xi must be positive")

    rho_floored = r < guards.rho_floor
    r = np.maximum(r, guards.rho_floor)

    c_yd = (g + r * r - x) / (2.0 * np.sqrt(g * r))
    c_xd = (g - r * r - x) / (2.0 * np.sqrt(x * r))
    num = 1.0 - c_yd * c_yd
    den = 1.0 - c_xd * c_xd
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den
    consistent = np.isfinite(ratio) & (ratio >= 0.0)
    h_raw = np.where(
        consistent,
        np.sqrt(np.where(consistent, ratio, 1.0)),
        np.sqrt(x / g),
    )
    h = np.clip(h_raw, guards.h_floor, guards.h_ceil)

    lim = 1.0 - guards.cos_delta
    return GainDiagnostics(
        c_yd=np.clip(c_yd, -lim, lim),
        c_xd=np.clip(c_xd, -lim, lim),
        h_raw=h_raw,
        h=h,
        rho_floored=rho_floored,
        cos_yd_out=np.abs(c_yd) > lim,
        cos_xd_out=np.abs(c_xd) > lim,
        triangle_repair=~consistent,
        h_floored=h_raw < guards.h_floor,
        h_ceiled=h_raw > guards.h_ceil,
    )


def mirror_gains(h, n_bins):
    """Expand gains evaluated on bins 0..n/2 to a conjugate-symmetric full set."""
    h = np.asarray(h, dtype=np.float64)
    half = n_bins // 2 + 1
    if h.size == n_bins:
        h = h[:half]
    elif h.size != half:
        raise ValueError("gain vector must cover the half or full spectrum")
    full = np.empty(n_bins)
    full[:half] = h
    full[half:] = h[1:n_bins - half + 1][::-1]
    return full


def apply_gain(spec, h):
    """Scale a frame's magnitude spectrum, keeping the phase unchanged.

    Gains may be given on the non-redundant half spectrum; they are mirrored so
    the modified spectrum stays conjugate symmetric and synthesizes to a real
    frame.
    """
    from .stft import FrameSpectrum

    h = np.asarray(h, dtype=np.float64)
    if np.any(h < 0.0):
        raise ValueError("negative gain")
    full = mirror_gains(h, spec.bins.size)
    new_mag = full * spec.mag
    bins = new_mag * np.exp(1j * spec.phase)
    return FrameSpectrum(bins=bins, mag=new_mag, phase=spec.phase.copy(), frame_index=spec.frame_index)
