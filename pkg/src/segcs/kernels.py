"""Kernel dispatch: compiled extension when built, NumPy fallback otherwise.

The backend is chosen once at import time.  Set SEGCS_KERNELS=numpy to
force the fallback, or SEGCS_KERNELS=compiled to fail loudly when the
extension is missing.  Repeated runs on one backend are bit-identical;
across backends results agree to rounding (summation order differs).
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_np

_requested = os.environ.get("SEGCS_KERNELS", "").strip().lower()
if _requested == "numpy":
    _impl = _kernels_np
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "SEGCS_KERNELS=compiled but the segcs._kernels_cy extension is not built"
            )
        _impl = _kernels_np
        BACKEND = "numpy"


def _check_geometry(m_o, n, src):
    if n % m_o:
        raise ValueError(f"n={n} not divisible into {m_o} segments")
    if src.ndim != 2 or src.shape[1] != m_o:
        raise ValueError(f"src must be (m_e, {m_o}), got {src.shape}")
    if src.size and (src.min() < 0 or src.max() >= m_o):
        raise ValueError("src entries must be 0-based row indices below m_o")


def assemble_rows(phi_o, src) -> np.ndarray:
    """Build the extended rows: segment k of output row r copies row src[r, k]."""
    phi_o = np.ascontiguousarray(phi_o, dtype=np.float64)
    src = np.ascontiguousarray(src, dtype=np.int64)
    m_o, n = phi_o.shape
    _check_geometry(m_o, n, src)
    out = np.empty((src.shape[0], n))
    if src.shape[0]:
        _impl.assemble_rows(phi_o, src, out)
    return out


def accumulate_segments(phi_o, src, x) -> np.ndarray:
    """All m_o + m_e samples via per-segment partial sums, in segment order.

    This mirrors the hardware path where each sub-period product is
    computed once and samples are sums of those products; it must agree
    with the dense matrix product to rounding.
    """
    phi_o = np.ascontiguousarray(phi_o, dtype=np.float64)
    src = np.ascontiguousarray(src, dtype=np.int64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    m_o, n = phi_o.shape
    _check_geometry(m_o, n, src)
    if x.shape != (n,):
        raise ValueError(f"x must have shape ({n},), got {x.shape}")
    out = np.empty(m_o + src.shape[0])
    _impl.accumulate_segments(phi_o, src, x, out)
    return out


def covariance_accumulate(phi_batch, src, x_batch, sum_p, sum_p2) -> None:
    """Add outer products w w^T (and their squares) for a batch of trials."""
    phi_batch = np.ascontiguousarray(phi_batch, dtype=np.float64)
    src = np.ascontiguousarray(src, dtype=np.int64)
    x_batch = np.ascontiguousarray(x_batch, dtype=np.float64)
    b, m_o, n = phi_batch.shape
    _check_geometry(m_o, n, src)
    m = m_o + src.shape[0]
    if x_batch.shape != (b, n):
        raise ValueError(f"x_batch must be ({b}, {n}), got {x_batch.shape}")
    if sum_p.shape != (m, m) or sum_p2.shape != (m, m):
        raise ValueError(f"accumulators must be ({m}, {m})")
    if b:
        _impl.covariance_accumulate(phi_batch, src, x_batch, sum_p, sum_p2)
