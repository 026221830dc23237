"""Backend selection for the per-frame chain: compiled extension or pure NumPy.

The compiled kernel is used when the extension built; set
PGASPEECH_PURE_PYTHON=1 to force the fallback.
"""

import os
from dataclasses import dataclass

import numpy as np

from . import _kernel_py
from ._kernel_py import GUARD_NAMES
from .presence import smoothing_taps

try:
    from . import _kernel_cy
except ImportError:
    _kernel_cy = None

_FORCED_PURE = os.environ.get("PGASPEECH_PURE_PYTHON", "") not in ("", "0")
USING_COMPILED = _kernel_cy is not None and not _FORCED_PURE


def backend_name():
    return "compiled" if USING_COMPILED else "python"


@dataclass
class ChainResult:
    """Per-frame gains plus trace aggregates and guard-fire counts."""

    h: np.ndarray
    gamma_mean: np.ndarray
    xi_frame: np.ndarray
    p_local_mean: np.ndarray
    p_global_mean: np.ndarray
    p_frame: np.ndarray
    rho_mean: np.ndarray
    h_mean: np.ndarray
    guard_counts: np.ndarray
    backend: str


def run_chain(mag2, psd, presence_cfg, guards, ga_mode, gamma_min, gamma_max, impl=None):
    """Run the gamma -> xi -> probabilities -> rho -> gain chain over all frames."""
    if impl is None:
        impl = _kernel_cy if USING_COMPILED else _kernel_py
    out = impl.run(
        np.ascontiguousarray(mag2, dtype=np.float64),
        np.ascontiguousarray(psd, dtype=np.float64),
        smoothing_taps(presence_cfg.w_local),
        smoothing_taps(presence_cfg.w_global),
        presence_cfg.alpha_xi,
        presence_cfg.xi_min,
        presence_cfg.xi_max,
        presence_cfg.xi_peak,
        guards.rho_floor,
        guards.cos_delta,
        guards.h_floor,
        guards.h_ceil,
        gamma_min,
        gamma_max,
        ga_mode,
        presence_cfg.decision_directed,
    )
    name = "compiled" if impl is _kernel_cy else "python"
    return ChainResult(*out, backend=name)
