"""Windowed framing, forward/inverse DFT and weighted overlap-add resynthesis.

Analysis frames are windowed with a periodic (DFT-even) window. Synthesis
applies the window again and divides by the accumulated squared window, so an
unmodified analysis-synthesis pass reconstructs the input.
"""

from dataclasses import dataclass, field

import numpy as np

from .audio_io import AudioSignal

WINDOW_KINDS = ("hamming", "hann", "rect")

OLA_DEN_FLOOR = 1e-8


def periodic_window(kind, n):
    """Periodic window of length n; symmetric variants do not overlap-add exactly."""
    t = np.arange(n) * (2.0 * np.pi / n)
    if kind == "hamming":
        return 0.54 - 0.46 * np.cos(t)
    if kind == "hann":
        return 0.5 - 0.5 * np.cos(t)
    if kind == "rect":
        return np.ones(n)
    raise ValueError(f"unknown window kind {kind!r}")


@dataclass(frozen=True)
class AnalysisConfig:
    frame_len: int = 100
    hop: int = 50
    window: str = "hamming"
    sample_rate: int = 8000

    def __post_init__(self):
        if self.frame_len < 2:
            raise ValueError("frame_len must be >= 2")
        if not 1 <= self.hop <= self.frame_len:
            raise ValueError("hop must be in [1, frame_len]")
        if self.window not in WINDOW_KINDS:
            raise ValueError(f"window must be one of {WINDOW_KINDS}")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    def window_values(self):
        return periodic_window(self.window, self.frame_len)


@dataclass
class FrameSpectrum:
    """One frame's complex DFT bins with cached magnitude and phase."""

    bins: np.ndarray
    mag: np.ndarray = field(default=None)
    phase: np.ndarray = field(default=None)
    frame_index: int = 0

    def __post_init__(self):
        self.bins = np.asarray(self.bins, dtype=np.complex128)
        if self.mag is None:
            self.mag = np.abs(self.bins)
        if self.phase is None:
            self.phase = np.angle(self.bins)


def frame_signal(signal, cfg):
    """Slice a signal into overlapping windowed frames (2-D array, one row per frame).

    Frame t covers samples [t*hop, t*hop + frame_len). A zero-padded tail frame
    is appended when samples remain past the last full frame.
    """
    x = signal.samples if isinstance(signal, AudioSignal) else np.asarray(signal, dtype=np.float64)
    n = x.size
    if n < cfg.frame_len:
        raise ValueError("signal too short")
    n_full = (n - cfg.frame_len) // cfg.hop + 1
    covered = (n_full - 1) * cfg.hop + cfg.frame_len
    n_frames = n_full + (1 if covered < n else 0)
    frames = np.zeros((n_frames, cfg.frame_len))
    for t in range(n_frames):
        start = t * cfg.hop
        chunk = x[start:start + cfg.frame_len]
        frames[t, :chunk.size] = chunk
    return frames * cfg.window_values()


def forward(frame, frame_index=0):
    """N-point DFT of a real frame (no 1/N scaling on the forward transform)."""
    bins = np.fft.fft(np.asarray(frame, dtype=np.float64))
    return FrameSpectrum(bins=bins, frame_index=frame_index)


def inverse(spec):
    """Real part of the inverse DFT (1/N scaling), giving a synthesis frame."""
    return np.real(np.fft.ifft(spec.bins))


def overlap_add(frames, cfg, length=None, sample_rate=None):
    """Weighted overlap-add with per-sample normalization by the summed squared window.

    The normalization denominator is floored at 1e-8. The output is truncated
    to `length` samples when given.
    """
    frames = np.atleast_2d(np.asarray(frames, dtype=np.float64))
    if frames.shape[0] < 1:
        raise ValueError("need at least one frame")
    if frames.shape[1] != cfg.frame_len:
        raise ValueError("frame length does not match configuration")
    w = cfg.window_values()
    total = (frames.shape[0] - 1) * cfg.hop + cfg.frame_len
    out = np.zeros(total)
    den = np.zeros(total)
    w2 = w * w
    for t in range(frames.shape[0]):
        start = t * cfg.hop
        out[start:start + cfg.frame_len] += frames[t] * w
        den[start:start + cfg.frame_len] += w2
    out /= np.maximum(den, OLA_DEN_FLOOR)
    if length is not None:
        if length <= total:
            out = out[:length]
        else:
            out = np.concatenate([out, np.zeros(length - total)])
    return AudioSignal(out, sample_rate if sample_rate is not None else cfg.sample_rate)
