"""Pure-NumPy per-frame enhancement chain; fallback for the compiled kernel.

Composes the presence and gain module functions frame by frame. The compiled
kernel reimplements the same arithmetic in C and is parity-tested against this
module.
"""

import numpy as np

from . import presence
from .gain import GainGuards, h_pga, mirror_gains

# guard-count columns, one row per frame
GUARD_NAMES = (
    "gamma_low",
    "gamma_high",
    "rho_floor",
    "cos_yd",
    "cos_xd",
    "triangle_repair",
    "h_floor",
    "h_ceil",
)

XI_FLOOR = 1e-12


def run(mag2, psd, taps_local, taps_global, alpha_xi, xi_min, xi_max, xi_peak,
        rho_floor, cos_delta, h_floor, h_ceil, gamma_min, gamma_max,
        ga_mode, decision_directed):
    mag2 = np.asarray(mag2, dtype=np.float64)
    psd = np.asarray(psd, dtype=np.float64)
    n_frames, n_bins = mag2.shape
    half = n_bins // 2 + 1

    pcfg = presence.PresenceConfig(
        xi_min=xi_min, xi_max=xi_max, xi_peak=xi_peak,
        w_local=(taps_local.size - 1) // 2, w_global=(taps_global.size - 1) // 2,
        alpha_xi=alpha_xi, decision_directed=decision_directed,
    )
    guards = GainGuards(cos_delta=cos_delta, h_floor=h_floor, h_ceil=h_ceil, rho_floor=rho_floor)

    h_out = np.empty((n_frames, n_bins))
    gamma_mean = np.empty(n_frames)
    xi_frame = np.empty(n_frames)
    p_local_mean = np.empty(n_frames)
    p_global_mean = np.empty(n_frames)
    p_frame_arr = np.empty(n_frames)
    rho_mean = np.empty(n_frames)
    h_mean = np.empty(n_frames)
    counts = np.zeros((n_frames, len(GUARD_NAMES)), dtype=np.int64)

    xi_frame_prev = xi_min
    prev_recursive = None  # H^2 * gamma of the previous frame (decision-directed only)
    for t in range(n_frames):
        raw = mag2[t] / psd
        gamma = np.clip(raw, gamma_min, gamma_max)
        counts[t, 0] = np.count_nonzero(raw < gamma_min)
        counts[t, 1] = np.count_nonzero(raw > gamma_max)

        if decision_directed:
            prev_term = prev_recursive if prev_recursive is not None else np.ones(n_bins)
            xi = alpha_xi * prev_term + (1.0 - alpha_xi) * np.maximum(gamma - 1.0, 0.0)
            xi = np.maximum(xi, XI_FLOOR)
        else:
            xi = presence.a_priori_proxy(gamma, pcfg)

        state = presence.presence_step(xi, xi_frame_prev, pcfg, frame_index=t)
        xi_frame_prev = state.xi_frame
        rho_full = np.ones(n_bins) if ga_mode else state.rho

        diag = h_pga(gamma[:half], xi[:half], rho_full[:half], guards)
        counts[t, 2] = np.count_nonzero(diag.rho_floored)
        counts[t, 3] = np.count_nonzero(diag.cos_yd_out)
        counts[t, 4] = np.count_nonzero(diag.cos_xd_out)
        counts[t, 5] = np.count_nonzero(diag.triangle_repair)
        counts[t, 6] = np.count_nonzero(diag.h_floored)
        counts[t, 7] = np.count_nonzero(diag.h_ceiled)

        h_full = mirror_gains(diag.h, n_bins)
        h_out[t] = h_full
        gamma_mean[t] = np.mean(gamma)
        xi_frame[t] = state.xi_frame
        p_local_mean[t] = np.mean(state.p_local)
        p_global_mean[t] = np.mean(state.p_global)
        p_frame_arr[t] = state.p_frame
        rho_mean[t] = np.mean(rho_full)
        h_mean[t] = np.mean(h_full)

        if decision_directed:
            prev_recursive = h_full * h_full * gamma

    return (h_out, gamma_mean, xi_frame, p_local_mean, p_global_mean,
            p_frame_arr, rho_mean, h_mean, counts)
