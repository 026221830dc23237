"""Full enhancement pipeline: frame, transform, estimate, gain, resynthesize."""

import csv
from dataclasses import dataclass, field

import numpy as np

from .audio_io import AudioSignal
from .gain import GainGuards, apply_gain
from .kernel import GUARD_NAMES, run_chain
from .noise import GAMMA_MAX, GAMMA_MIN, estimate_from_silence
from .presence import PresenceConfig, linear_to_db
from .stft import AnalysisConfig, forward, frame_signal, inverse, overlap_add

METHODS = ("pga", "ga")

TRACE_COLUMNS = ("gamma", "xi", "p_local", "p_global", "p_frame", "rho", "h")


@dataclass(frozen=True)
class EnhancerConfig:
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    presence: PresenceConfig = field(default_factory=PresenceConfig)
    guards: GainGuards = field(default_factory=GainGuards)
    silence_frames: int = 6
    method: str = "pga"

    def __post_init__(self):
        if self.silence_frames < 1:
            raise ValueError("silence_frames must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")

    def describe(self):
        """Flat view of the tunables, thresholds reported in dB."""
        return {
            "method": self.method,
            "frame_len": self.analysis.frame_len,
            "hop": self.analysis.hop,
            "overlap_pct": 100.0 * (1.0 - self.analysis.hop / self.analysis.frame_len),
            "window": self.analysis.window,
            "xi_min_db": linear_to_db(self.presence.xi_min),
            "xi_max_db": linear_to_db(self.presence.xi_max),
            "xi_peak_db": linear_to_db(self.presence.xi_peak),
            "w_local": self.presence.w_local,
            "w_global": self.presence.w_global,
            "alpha_xi": self.presence.alpha_xi,
            "decision_directed": self.presence.decision_directed,
            "silence_frames": self.silence_frames,
            "h_floor": self.guards.h_floor,
            "h_ceil": self.guards.h_ceil,
            "rho_floor": self.guards.rho_floor,
            "cos_delta": self.guards.cos_delta,
        }


@dataclass
class EnhanceTrace:
    """Per-frame means of the chain quantities plus guard-fire counts."""

    gamma: np.ndarray
    xi: np.ndarray
    p_local: np.ndarray
    p_global: np.ndarray
    p_frame: np.ndarray
    rho: np.ndarray
    h: np.ndarray
    guard_counts: np.ndarray
    guard_names: tuple
    backend: str

    @property
    def n_frames(self):
        return int(self.gamma.size)

    def guard_totals(self):
        return dict(zip(self.guard_names, (int(v) for v in self.guard_counts.sum(axis=0))))

    def write_csv(self, path):
        """One row per frame with exactly the seven chain columns."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_COLUMNS)
            for t in range(self.n_frames):
                writer.writerow([
                    f"{self.gamma[t]:.10g}", f"{self.xi[t]:.10g}",
                    f"{self.p_local[t]:.10g}", f"{self.p_global[t]:.10g}",
                    f"{self.p_frame[t]:.10g}", f"{self.rho[t]:.10g}",
                    f"{self.h[t]:.10g}",
                ])


def enhance(noisy, cfg=None):
    """Enhance a noisy signal; returns (enhanced AudioSignal, EnhanceTrace).

    The noise power is estimated from the leading silence frames, which are
    processed and emitted like any other frame, so the output has exactly the
    input's length and sample rate. Frames are processed in order (the frame
    probability carries one frame of state).
    """
    if cfg is None:
        cfg = EnhancerConfig()
    if not np.all(np.isfinite(noisy.samples)):
        raise ValueError("non-finite samples")
    frames = frame_signal(noisy, cfg.analysis)
    if frames.shape[0] < cfg.silence_frames + 1:
        raise ValueError("signal too short: need at least silence_frames + 1 frames")

    spectra = [forward(frames[t], t) for t in range(frames.shape[0])]
    profile = estimate_from_silence(spectra, cfg.silence_frames)
    mag2 = np.stack([s.mag for s in spectra]) ** 2

    chain = run_chain(mag2, profile.psd, cfg.presence, cfg.guards,
                      cfg.method == "ga", GAMMA_MIN, GAMMA_MAX)

    out_frames = np.stack([
        inverse(apply_gain(spectra[t], chain.h[t])) for t in range(len(spectra))
    ])
    out = overlap_add(out_frames, cfg.analysis, length=len(noisy),
                      sample_rate=noisy.sample_rate)

    trace = EnhanceTrace(
        gamma=chain.gamma_mean,
        xi=chain.xi_frame,
        p_local=chain.p_local_mean,
        p_global=chain.p_global_mean,
        p_frame=chain.p_frame,
        rho=chain.rho_mean,
        h=chain.h_mean,
        guard_counts=chain.guard_counts,
        guard_names=GUARD_NAMES,
        backend=chain.backend,
    )
    return out, trace
