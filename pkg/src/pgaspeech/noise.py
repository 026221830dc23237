"""Noise power estimation from leading silence frames and a posteriori SNR."""

from dataclasses import dataclass

import numpy as np

PSD_FLOOR = 1e-12
GAMMA_MIN = 1e-6
GAMMA_MAX = 1e6


@dataclass(frozen=True)
class NoiseProfile:
    """Per-bin estimated noise power (magnitude squared), floored at 1e-12."""

    psd: np.ndarray
    frames_used: int

    def __post_init__(self):
        object.__setattr__(self, "psd", np.asarray(self.psd, dtype=np.float64))
        if self.frames_used < 1:
            raise ValueError("frames_used must be >= 1")


def estimate_from_silence(spectra, m):
    """Average |Y|^2 over the first m frames, assumed to contain no speech."""
    if m < 1:
        raise ValueError("need at least one silence frame")
    if m > len(spectra):
        raise ValueError("not enough silence frames")
    power = np.mean([np.asarray(s.mag, dtype=np.float64) ** 2 for s in spectra[:m]], axis=0)
    return NoiseProfile(np.maximum(power, PSD_FLOOR), m)


def a_posteriori_snr(spec, profile):
    """Per-bin |Y|^2 / noise power, clamped to [1e-6, 1e6]."""
    mag = np.asarray(spec.mag, dtype=np.float64)
    if mag.size != profile.psd.size:
        raise ValueError("bin count mismatch between spectrum and noise profile")
    return np.clip(mag ** 2 / profile.psd, GAMMA_MIN, GAMMA_MAX)
