# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled per-frame enhancement chain; same arithmetic as _kernel_py."""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs, log, sqrt

cnp.import_array()

XI_FLOOR = 1e-12


cdef inline Py_ssize_t _clamp_idx(Py_ssize_t i, Py_ssize_t n) nogil:
    if i < 0:
        return 0
    if i >= n:
        return n - 1
    return i


cdef void _smooth(double[::1] src, double[::1] dst, double[::1] taps) nogil:
    cdef Py_ssize_t n = src.shape[0]
    cdef Py_ssize_t w = (taps.shape[0] - 1) // 2
    cdef Py_ssize_t k, j
    cdef double acc
    if w == 0:
        for k in range(n):
            dst[k] = src[k]
        return
    for k in range(n):
        acc = 0.0
        for j in range(-w, w + 1):
            acc += taps[j + w] * src[_clamp_idx(k + j, n)]
        dst[k] = acc


cdef inline double _p_psi_bin(double xi_s, double xi_min, double xi_max, double scale) nogil:
    if xi_s <= xi_min:
        return 0.0
    if xi_s >= xi_max:
        return 1.0
    return log(xi_s / xi_min) / scale


cdef double _p_frame(double xf, double xf_prev, double xi_min, double xi_max,
                     double xi_peak, double scale) nogil:
    cdef double lo = xi_peak * xi_min
    cdef double hi = xi_peak * xi_max
    cdef double val
    if xf < xi_min:
        return 0.0
    if xf > xf_prev and xf > xi_min:
        return 1.0
    if xf <= lo:
        return 0.0
    if xf >= hi:
        return 1.0
    val = log(xf / lo) / scale
    if val < 0.0:
        return 0.0
    if val > 1.0:
        return 1.0
    return val


def run(mag2, psd, taps_local, taps_global, double alpha_xi, double xi_min,
        double xi_max, double xi_peak, double rho_floor, double cos_delta,
        double h_floor, double h_ceil, double gamma_min, double gamma_max,
        bint ga_mode, bint decision_directed):
    cdef double[:, ::1] m2 = np.ascontiguousarray(mag2, dtype=np.float64)
    cdef double[::1] noise = np.ascontiguousarray(psd, dtype=np.float64)
    cdef double[::1] tl = np.ascontiguousarray(taps_local, dtype=np.float64)
    cdef double[::1] tg = np.ascontiguousarray(taps_global, dtype=np.float64)

    cdef Py_ssize_t n_frames = m2.shape[0]
    cdef Py_ssize_t n_bins = m2.shape[1]
    cdef Py_ssize_t half = n_bins // 2 + 1

    h_out = np.empty((n_frames, n_bins))
    gamma_mean = np.empty(n_frames)
    xi_frame = np.empty(n_frames)
    p_local_mean = np.empty(n_frames)
    p_global_mean = np.empty(n_frames)
    p_frame_arr = np.empty(n_frames)
    rho_mean = np.empty(n_frames)
    h_mean = np.empty(n_frames)
    counts = np.zeros((n_frames, 8), dtype=np.int64)

    cdef double[:, ::1] h_v = h_out
    cdef double[::1] gm_v = gamma_mean
    cdef double[::1] xf_v = xi_frame
    cdef double[::1] pl_v = p_local_mean
    cdef double[::1] pg_v = p_global_mean
    cdef double[::1] pf_v = p_frame_arr
    cdef double[::1] rm_v = rho_mean
    cdef double[::1] hm_v = h_mean
    cdef long long[:, ::1] c_v = counts

    gamma_buf = np.empty(n_bins)
    xi_buf = np.empty(n_bins)
    xi_loc_buf = np.empty(n_bins)
    xi_glob_buf = np.empty(n_bins)
    rho_buf = np.empty(n_bins)
    prev_buf = np.ones(n_bins)
    cdef double[::1] gamma = gamma_buf
    cdef double[::1] xi = xi_buf
    cdef double[::1] xi_loc = xi_loc_buf
    cdef double[::1] xi_glob = xi_glob_buf
    cdef double[::1] rho = rho_buf
    cdef double[::1] prev_recursive = prev_buf

    cdef double scale = log(xi_max / xi_min)
    cdef double lim = 1.0 - cos_delta
    cdef double xi_frame_prev = xi_min
    cdef double xi_floor = XI_FLOOR

    cdef Py_ssize_t t, k
    cdef double raw, acc, xf, pf, pl, pg, prod, g, x, r
    cdef double cyd, cxd, num, den, ratio, h_raw, h_val
    cdef bint consistent

    for t in range(n_frames):
        for k in range(n_bins):
            raw = m2[t, k] / noise[k]
            if raw < gamma_min:
                gamma[k] = gamma_min
                c_v[t, 0] += 1
            elif raw > gamma_max:
                gamma[k] = gamma_max
                c_v[t, 1] += 1
            else:
                gamma[k] = raw

        if decision_directed:
            for k in range(n_bins):
                raw = gamma[k] - 1.0
                if raw < 0.0:
                    raw = 0.0
                xi[k] = alpha_xi * prev_recursive[k] + (1.0 - alpha_xi) * raw
                if xi[k] < xi_floor:
                    xi[k] = xi_floor
        else:
            for k in range(n_bins):
                xi[k] = (1.0 - alpha_xi) * gamma[k]

        _smooth(xi, xi_loc, tl)
        _smooth(xi, xi_glob, tg)

        acc = 0.0
        for k in range(n_bins):
            acc += xi[k]
        xf = acc / n_bins
        pf = _p_frame(xf, xi_frame_prev, xi_min, xi_max, xi_peak, scale)
        xi_frame_prev = xf

        acc = 0.0
        for k in range(n_bins):
            pl = _p_psi_bin(xi_loc[k], xi_min, xi_max, scale)
            xi_loc[k] = pl  # reuse buffers for the probabilities
            acc += pl
        pl_v[t] = acc / n_bins
        acc = 0.0
        for k in range(n_bins):
            pg = _p_psi_bin(xi_glob[k], xi_min, xi_max, scale)
            xi_glob[k] = pg
            acc += pg
        pg_v[t] = acc / n_bins

        if ga_mode:
            for k in range(n_bins):
                rho[k] = 1.0
        else:
            for k in range(n_bins):
                prod = xi_loc[k] * xi_glob[k] * pf
                rho[k] = sqrt(1.0 - prod)

        for k in range(half):
            g = gamma[k]
            x = xi[k]
            r = rho[k]
            if r < rho_floor:
                r = rho_floor
                c_v[t, 2] += 1
            cyd = (g + r * r - x) / (2.0 * sqrt(g * r))
            cxd = (g - r * r - x) / (2.0 * sqrt(x * r))
            num = 1.0 - cyd * cyd
            den = 1.0 - cxd * cxd
            if den != 0.0:
                ratio = num / den
                consistent = ratio >= 0.0
            else:
                ratio = 0.0
                consistent = False
            if consistent:
                h_raw = sqrt(ratio)
            else:
                h_raw = sqrt(x / g)
                c_v[t, 5] += 1
            if fabs(cyd) > lim:
                c_v[t, 3] += 1
            if fabs(cxd) > lim:
                c_v[t, 4] += 1
            if h_raw < h_floor:
                h_val = h_floor
                c_v[t, 6] += 1
            elif h_raw > h_ceil:
                h_val = h_ceil
                c_v[t, 7] += 1
            else:
                h_val = h_raw
            h_v[t, k] = h_val
        for k in range(half, n_bins):
            h_v[t, k] = h_v[t, n_bins - k]

        acc = 0.0
        for k in range(n_bins):
            acc += gamma[k]
        gm_v[t] = acc / n_bins
        xf_v[t] = xf
        pf_v[t] = pf
        acc = 0.0
        for k in range(n_bins):
            acc += rho[k]
        rm_v[t] = acc / n_bins
        acc = 0.0
        for k in range(n_bins):
            acc += h_v[t, k]
        hm_v[t] = acc / n_bins

        if decision_directed:
            for k in range(n_bins):
                prev_recursive[k] = h_v[t, k] * h_v[t, k] * gamma[k]

    return (h_out, gamma_mean, xi_frame, p_local_mean, p_global_mean,
            p_frame_arr, rho_mean, h_mean, counts)
