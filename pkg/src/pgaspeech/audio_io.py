"""Mono WAV file I/O and SNR-controlled noise mixing."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

PCM16_SCALE = 32768.0


@dataclass(frozen=True)
class AudioSignal:
    """Mono audio: float samples (nominally in [-1, 1]) and a sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.ascontiguousarray(self.samples, dtype=np.float64)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1:
            raise ValueError("audio must be mono (1-D samples)")
        if not np.all(np.isfinite(samples)):
            raise ValueError("non-finite samples")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")

    def __len__(self):
        return int(self.samples.size)

    @property
    def duration(self):
        return self.samples.size / self.sample_rate


def read_wav(path):
    """Read a mono RIFF/WAVE file (PCM16 or IEEE float32).

    PCM16 samples are mapped to [-1, 1) by dividing by 32768. Stereo files are
    rejected rather than silently downmixed.
    """
    try:
        rate, data = wavfile.read(path)
    except Exception as exc:
        raise ValueError(f"unreadable WAV file {path!s}: {exc}") from None
    if data.ndim != 1:
        raise ValueError(f"stereo input not supported ({data.shape[1]} channels); provide mono audio")
    if data.size == 0:
        raise ValueError("empty audio")
    if data.dtype == np.int16:
        samples = data.astype(np.float64) / PCM16_SCALE
    elif data.dtype == np.float32:
        samples = data.astype(np.float64)
    else:
        raise ValueError(f"unsupported sample format {data.dtype}; use PCM16 or float32")
    return AudioSignal(samples, int(rate))


def write_wav(path, signal, fmt="pcm16"):
    """Write a mono WAV file; returns the number of saturated samples.

    PCM16 quantization rounds half away from zero and saturates at the int16
    range (the exact inverse of read_wav up to quantization).
    """
    if fmt == "float32":
        wavfile.write(path, signal.sample_rate, signal.samples.astype(np.float32))
        return 0
    if fmt != "pcm16":
        raise ValueError(f"unknown sample format {fmt!r}")
    scaled = signal.samples * PCM16_SCALE
    quant = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    clipped = int(np.count_nonzero((quant < -32768.0) | (quant > 32767.0)))
    pcm = np.clip(quant, -32768.0, 32767.0).astype(np.int16)
    wavfile.write(path, signal.sample_rate, pcm)
    return clipped


def mix_at_snr(clean, noise, target_snr_db):
    """Add scaled noise to clean speech so the overall SNR equals target_snr_db.

    Powers are measured over the full clean-signal length; the noise is
    truncated to that length starting at offset 0.
    """
    if clean.sample_rate != noise.sample_rate:
        raise ValueError("sample-rate mismatch between clean and noise")
    n = len(clean)
    if len(noise) < n:
        raise ValueError("noise must be at least as long as the clean signal")
    noise_cut = noise.samples[:n]
    p_clean = float(np.sum(clean.samples ** 2))
    p_noise = float(np.sum(noise_cut ** 2))
    if p_clean <= 0.0:
        raise ValueError("zero-power clean signal")
    if p_noise <= 0.0:
        raise ValueError("zero-power noise signal")
    scale = math.sqrt(p_clean / (p_noise * 10.0 ** (target_snr_db / 10.0)))
    return AudioSignal(clean.samples + scale * noise_cut, clean.sample_rate)
