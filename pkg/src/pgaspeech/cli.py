"""Command line front end: mix, enhance, eval and spectrogram export."""

import argparse
import sys

import numpy as np

from .audio_io import mix_at_snr, read_wav, write_wav
from .enhance import EnhancerConfig, enhance
from .gain import GainGuards
from .metrics import improvement, overall_snr
from .presence import PresenceConfig
from .stft import AnalysisConfig, forward, frame_signal

SPECTROGRAM_DB_EPS = 1e-12


class UsageError(ValueError):
    """Bad arguments or configuration; maps to exit code 2."""


# config-file key -> (section, field, parser)
CONFIG_KEYS = {
    "frame_len": ("analysis", "frame_len", int),
    "hop": ("analysis", "hop", int),
    "window": ("analysis", "window", str),
    "xi_min_db": ("presence_db", "xi_min_db", float),
    "xi_max_db": ("presence_db", "xi_max_db", float),
    "xi_peak_db": ("presence_db", "xi_peak_db", float),
    "w_local": ("presence", "w_local", int),
    "w_global": ("presence", "w_global", int),
    "alpha_xi": ("presence", "alpha_xi", float),
    "decision_directed": ("presence", "decision_directed", lambda v: v.lower() in ("1", "true", "yes")),
    "silence_frames": ("root", "silence_frames", int),
    "h_floor": ("guards", "h_floor", float),
    "h_ceil": ("guards", "h_ceil", float),
    "rho_floor": ("guards", "rho_floor", float),
    "cos_delta": ("guards", "cos_delta", float),
}


def load_config(path, method):
    """Build an EnhancerConfig from a flat key=value file."""
    sections = {"analysis": {}, "presence": {}, "presence_db": {}, "guards": {}, "root": {}}
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
            section, fieldname, parse = CONFIG_KEYS[key]
            try:
                sections[section][fieldname] = parse(value)
            except ValueError:
                raise UsageError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    try:
        analysis = AnalysisConfig(**sections["analysis"])
        presence = PresenceConfig.from_db(**sections["presence_db"], **sections["presence"])
        guards = GainGuards(**sections["guards"])
        return EnhancerConfig(analysis=analysis, presence=presence, guards=guards,
                              method=method, **sections["root"])
    except ValueError as exc:
        raise UsageError(f"invalid configuration: {exc}") from None


def _cmd_mix(args):
    clean = read_wav(args.clean)
    noise = read_wav(args.noise)
    mixed = mix_at_snr(clean, noise, args.snr)
    clipped = write_wav(args.out, mixed, fmt=args.fmt)
    achieved = overall_snr(clean, mixed)
    print(f"achieved SNR: {achieved:.6f} dB")
    if clipped:
        print(f"warning: {clipped} samples saturated on write")
    return 0


def _cmd_enhance(args):
    if args.config is not None:
        cfg = load_config(args.config, args.method)
    else:
        cfg = EnhancerConfig(method=args.method)
    if args.verbose:
        print("configuration:")
        for key, value in cfg.describe().items():
            if key.endswith("_db"):
                print(f"  {key[:-3]}: {value:g} dB")
            else:
                print(f"  {key}: {value}")
    noisy = read_wav(args.in_path)
    out, trace = enhance(noisy, cfg)
    clipped = write_wav(args.out, out, fmt=args.fmt)
    if args.trace is not None:
        trace.write_csv(args.trace)
    print(f"enhanced {trace.n_frames} frames with method={cfg.method} ({trace.backend} kernel)")
    if clipped:
        print(f"warning: {clipped} samples saturated on write")
    if args.verbose:
        print("guard firings:", trace.guard_totals())
    return 0


def _cmd_eval(args):
    clean = read_wav(args.clean)
    noisy = read_wav(args.noisy)
    enhanced = read_wav(args.enhanced)
    report = improvement(clean, noisy, enhanced)
    if args.json:
        print(report.to_json())
    else:
        print(f"{'metric':<12}{'in':>10}{'out':>10}{'improvement':>14}")
        print(f"{'SNRseg':<12}{report.snrseg_in:>10.2f}{report.snrseg_out:>10.2f}"
              f"{report.snrseg_improvement:>14.2f}")
        print(f"{'overall SNR':<12}{report.snr_in:>10.2f}{report.snr_out:>10.2f}"
              f"{report.snr_improvement:>14.2f}")
        print(f"frames scored: {report.frames_scored}")
    return 0


def _cmd_spectrogram(args):
    if not (args.out.endswith(".csv") or args.out.endswith(".pgm")):
        raise UsageError(f"unsupported extension for {args.out!r}: use .csv or .pgm")
    signal = read_wav(args.in_path)
    cfg = AnalysisConfig(sample_rate=signal.sample_rate)
    frames = frame_signal(signal, cfg)
    half = cfg.frame_len // 2 + 1
    mags = np.stack([forward(frames[t], t).mag[:half] for t in range(frames.shape[0])])
    db = np.maximum(20.0 * np.log10(mags + SPECTROGRAM_DB_EPS), args.db_floor)
    if args.out.endswith(".csv"):
        header = ",".join(f"bin_{k}" for k in range(half))
        np.savetxt(args.out, db, delimiter=",", header=header, comments="", fmt="%.6f")
    else:
        top = float(db.max())
        span = top - args.db_floor
        if span <= 0.0:
            pixels = np.zeros(db.shape, dtype=np.uint8)
        else:
            pixels = np.round((db - args.db_floor) / span * 255.0).astype(np.uint8)
        with open(args.out, "wb") as fh:
            fh.write(f"P5\n{pixels.shape[1]} {pixels.shape[0]}\n255\n".encode("ascii"))
            fh.write(pixels.tobytes())
    print(f"wrote {db.shape[0]} x {db.shape[1]} spectrogram to {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pgaspeech",
        description="Speech enhancement by probabilistic geometric spectral subtraction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mix = sub.add_parser("mix", help="mix noise into clean speech at a target SNR")
    p_mix.add_argument("--clean", required=True, help="clean speech WAV")
    p_mix.add_argument("--noise", required=True, help="noise WAV (at least as long as clean)")
    p_mix.add_argument("--snr", required=True, type=float, help="target SNR in dB")
    p_mix.add_argument("--out", required=True, help="output WAV path")
    p_mix.add_argument("--fmt", choices=("pcm16", "float32"), default="float32",
                       help="output sample format (default float32)")
    p_mix.set_defaults(func=_cmd_mix)

    p_enh = sub.add_parser("enhance", help="enhance a noisy WAV file")
    p_enh.add_argument("--in", dest="in_path", required=True, help="noisy input WAV")
    p_enh.add_argument("--out", required=True, help="enhanced output WAV")
    p_enh.add_argument("--method", choices=("pga", "ga"), default="pga")
    p_enh.add_argument("--trace", help="write per-frame chain trace CSV here")
    p_enh.add_argument("--config", help="key=value config file overriding the defaults")
    p_enh.add_argument("--fmt", choices=("pcm16", "float32"), default="float32",
                       help="output sample format (default float32)")
    p_enh.add_argument("--verbose", action="store_true", help="print configuration and guard stats")
    p_enh.set_defaults(func=_cmd_enhance)

    p_eval = sub.add_parser("eval", help="score an enhanced file against clean and noisy")
    p_eval.add_argument("--clean", required=True)
    p_eval.add_argument("--noisy", required=True)
    p_eval.add_argument("--enhanced", required=True)
    p_eval.add_argument("--json", action="store_true", help="emit a single-line JSON report")
    p_eval.set_defaults(func=_cmd_eval)

    p_spec = sub.add_parser("spectrogram", help="export a magnitude spectrogram matrix")
    p_spec.add_argument("--in", dest="in_path", required=True, help="input WAV")
    p_spec.add_argument("--out", required=True, help="output .csv or .pgm path")
    p_spec.add_argument("--db-floor", type=float, default=-80.0,
                        help="floor for 20*log10 magnitudes (default -80 dB)")
    p_spec.set_defaults(func=_cmd_spectrogram)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
