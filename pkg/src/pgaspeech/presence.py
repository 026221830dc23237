"""Speech-presence probabilities and the noise-estimation confidence rho.

A smoothed SNR proxy drives three probabilities (local, global, per-frame);
their product sets rho = sqrt(1 - P_local * P_global * P_frame). rho = 1 means
full trust in the noise estimate.
"""

import math
from dataclasses import dataclass

import numpy as np


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(value):
    return 10.0 * math.log10(value)


@dataclass(frozen=True)
class PresenceConfig:
    xi_min: float = db_to_linear(-10.0)
    xi_max: float = db_to_linear(-5.0)
    xi_peak: float = db_to_linear(10.0)
    w_local: int = 1
    w_global: int = 15
    alpha_xi: float = 0.7
    decision_directed: bool = False

    def __post_init__(self):
        if not 0.0 < self.xi_min < self.xi_max:
            raise ValueError("need 0 < xi_min < xi_max")
        if self.xi_peak <= 0.0:
            raise ValueError("xi_peak must be positive")
        if self.w_local > self.w_global:
            raise ValueError("w_local must not exceed w_global")
        if self.w_local < 0:
            raise ValueError("smoothing half-widths must be nonnegative")
        if not 0.0 <= self.alpha_xi < 1.0:
            raise ValueError("alpha_xi must be in [0, 1)")

    @classmethod
    def from_db(cls, xi_min_db=-10.0, xi_max_db=-5.0, xi_peak_db=10.0, **kwargs):
        return cls(
            xi_min=db_to_linear(xi_min_db),
            xi_max=db_to_linear(xi_max_db),
            xi_peak=db_to_linear(xi_peak_db),
            **kwargs,
        )


@dataclass
class PresenceState:
    """All per-frame presence quantities, kept for inspection and tracing."""

    xi: np.ndarray
    xi_local: np.ndarray
    xi_global: np.ndarray
    xi_frame: float
    xi_frame_prev: float
    p_local: np.ndarray
    p_global: np.ndarray
    p_frame: float
    rho: np.ndarray
    frame_index: int = 0


def a_priori_proxy(gamma, cfg):
    """SNR proxy (1 - alpha_xi) * gamma feeding the presence probabilities."""
    return (1.0 - cfg.alpha_xi) * np.asarray(gamma, dtype=np.float64)


def smoothing_taps(w):
    """Normalized Hann-shaped taps of length 2w + 1 with nonzero endpoints.

    Unit sum keeps the smoothed proxy on the same scale as the raw one, so the
    dB thresholds apply unchanged. w = 0 degenerates to a single unit tap.
    """
    if w == 0:
        return np.ones(1)
    taps = np.hanning(2 * w + 3)[1:-1]
    return taps / taps.sum()


def smooth_xi(xi, w):
    """Moving weighted average over 2w + 1 bins; edges replicate the boundary bin."""
    xi = np.asarray(xi, dtype=np.float64)
    if not 0 <= w < xi.size:
        raise ValueError("smoothing half-width must be in [0, nbins)")
    if w == 0:
        return xi.copy()
    padded = np.pad(xi, w, mode="edge")
    return np.convolve(padded, smoothing_taps(w), mode="valid")


def p_psi(xi_smoothed, cfg):
    """Presence probability from a smoothed SNR proxy.

    0 at/below xi_min, 1 at/above xi_max, log-linear in between (the ratio of
    logs is base independent).
    """
    xi_smoothed = np.asarray(xi_smoothed, dtype=np.float64)
    scale = math.log(cfg.xi_max / cfg.xi_min)
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.log(xi_smoothed / cfg.xi_min) / scale
    return np.where(
        xi_smoothed <= cfg.xi_min,
        0.0,
        np.where(xi_smoothed >= cfg.xi_max, 1.0, frac),
    )


def xi_frame_mean(xi):
    """Arithmetic mean of the proxy over all bins of one frame."""
    return float(np.mean(xi))


def _mu(xi_frame, cfg):
    lo = cfg.xi_peak * cfg.xi_min
    hi = cfg.xi_peak * cfg.xi_max
    if xi_frame <= lo:
        return 0.0
    if xi_frame >= hi:
        return 1.0
    val = math.log(xi_frame / lo) / math.log(cfg.xi_max / cfg.xi_min)
    # interpolation can leave [0, 1] for unusual constant choices
    return min(max(val, 0.0), 1.0)


def p_frame(xi_frame, xi_frame_prev, cfg):
    """Frame-level presence probability with one-frame memory.

    0 below xi_min; 1 while the frame mean is rising above xi_min; otherwise a
    log-interpolation between xi_peak*xi_min and xi_peak*xi_max.
    """
    if xi_frame < cfg.xi_min:
        return 0.0
    if xi_frame > xi_frame_prev and xi_frame > cfg.xi_min:
        return 1.0
    return _mu(xi_frame, cfg)


def rho(p_local, p_global, p_frame_value):
    """Noise-estimation confidence sqrt(1 - P_local * P_global * P_frame)."""
    product = np.asarray(p_local, dtype=np.float64) * np.asarray(p_global, dtype=np.float64) * p_frame_value
    return np.sqrt(1.0 - product)


def presence_step(xi, xi_frame_prev, cfg, frame_index=0):
    """Evaluate the full presence chain for one frame's proxy vector."""
    xi = np.asarray(xi, dtype=np.float64)
    xi_local = smooth_xi(xi, cfg.w_local)
    xi_global = smooth_xi(xi, cfg.w_global)
    p_loc = p_psi(xi_local, cfg)
    p_glob = p_psi(xi_global, cfg)
    xf = xi_frame_mean(xi)
    pf = p_frame(xf, xi_frame_prev, cfg)
    return PresenceState(
        xi=xi,
        xi_local=xi_local,
        xi_global=xi_global,
        xi_frame=xf,
        xi_frame_prev=xi_frame_prev,
        p_local=p_loc,
        p_global=p_glob,
        p_frame=pf,
        rho=rho(p_loc, p_glob, pf),
        frame_index=frame_index,
    )
