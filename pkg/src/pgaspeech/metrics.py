"""Objective evaluation: overall SNR and segmental SNR, as improvements."""

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .audio_io import AudioSignal

SNR_MIN_DB = -40.0
SNR_MAX_DB = 60.0
SEG_MIN_DB = -10.0
SEG_MAX_DB = 35.0
SILENCE_RMS_FACTOR = 1e-5

EVAL_CSV_COLUMNS = (
    "snrseg_in", "snrseg_out", "snrseg_improvement",
    "snr_in", "snr_out", "snr_improvement", "frames_scored",
)


def _samples(signal):
    if isinstance(signal, AudioSignal):
        return signal.samples
    return np.asarray(signal, dtype=np.float64)


@dataclass(frozen=True)
class EvalReport:
    snrseg_in: float
    snrseg_out: float
    snrseg_improvement: float
    snr_in: float
    snr_out: float
    snr_improvement: float
    frames_scored: int

    def to_json(self):
        return json.dumps(asdict(self))

    def to_csv_row(self):
        return ",".join(
            str(getattr(self, name)) if name == "frames_scored"
            else f"{getattr(self, name):.6f}"
            for name in EVAL_CSV_COLUMNS
        )


def overall_snr(clean, test):
    """10*log10(sum(clean^2) / sum((clean - test)^2)), clamped to [-40, 60] dB."""
    c = _samples(clean)
    t = _samples(test)
    if c.size != t.size:
        raise ValueError(f"length mismatch: clean has {c.size} samples, test has {t.size}")
    p_clean = float(np.sum(c ** 2))
    if p_clean <= 0.0:
        raise ValueError("zero clean signal")
    p_err = float(np.sum((c - t) ** 2))
    if p_err == 0.0:
        return SNR_MAX_DB
    return float(np.clip(10.0 * math.log10(p_clean / p_err), SNR_MIN_DB, SNR_MAX_DB))


def _frame_snrs(clean, test, frame_len, hop):
    c = _samples(clean)
    t = _samples(test)
    if c.size != t.size:
        raise ValueError(f"length mismatch: clean has {c.size} samples, test has {t.size}")
    if c.size < frame_len:
        raise ValueError("signals shorter than one frame")
    threshold = SILENCE_RMS_FACTOR * math.sqrt(float(np.mean(c ** 2)))
    snrs = []
    for start in range(0, c.size - frame_len + 1, hop):
        cf = c[start:start + frame_len]
        tf = t[start:start + frame_len]
        if math.sqrt(float(np.mean(cf ** 2))) <= threshold:
            continue
        p_err = float(np.sum((cf - tf) ** 2))
        if p_err == 0.0:
            snrs.append(SEG_MAX_DB)
        else:
            snr = 10.0 * math.log10(float(np.sum(cf ** 2)) / p_err)
            snrs.append(float(np.clip(snr, SEG_MIN_DB, SEG_MAX_DB)))
    if not snrs:
        raise ValueError("no scoreable frames")
    return np.asarray(snrs)


def snrseg(clean, test, frame_len=100, hop=50):
    """Mean per-frame SNR in dB, each frame clamped to [-10, 35] dB.

    Frames whose clean RMS is below 1e-5 of the global clean RMS are excluded.
    """
    return float(np.mean(_frame_snrs(clean, test, frame_len, hop)))


def improvement(clean, noisy, enhanced, frame_len=100, hop=50):
    """Score (clean, noisy) against (clean, enhanced) for both metrics."""
    seg_in = _frame_snrs(clean, noisy, frame_len, hop)
    seg_out = _frame_snrs(clean, enhanced, frame_len, hop)
    snrseg_in = float(np.mean(seg_in))
    snrseg_out = float(np.mean(seg_out))
    snr_in = overall_snr(clean, noisy)
    snr_out = overall_snr(clean, enhanced)
    return EvalReport(
        snrseg_in=snrseg_in,
        snrseg_out=snrseg_out,
        snrseg_improvement=snrseg_out - snrseg_in,
        snr_in=snr_in,
        snr_out=snr_out,
        snr_improvement=snr_out - snr_in,
        frames_scored=int(seg_in.size),
    )
