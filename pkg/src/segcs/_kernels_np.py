"""NumPy implementations of the hot kernels.

Same contracts as the compiled versions in _kernels_cy; the dispatcher
in kernels.py picks whichever is available.  src holds 0-based source
row indices, one row per extended row, one column per segment.
"""

import numpy as np


def assemble_rows(phi_o, src, out):
    m_o, n = phi_o.shape
    seg = n // m_o
    segments = phi_o.reshape(m_o, m_o, seg)
    out.reshape(src.shape[0], m_o, seg)[...] = segments[src, np.arange(m_o), :]


def accumulate_segments(phi_o, src, x, out):
    m_o, n = phi_o.shape
    seg = n // m_o
    # sub[i, k] is the sub-period product of row i over segment k; the
    # original samples sum their own row's products, the extended ones
    # sum across the rows named by src.
    sub = np.einsum("ikl,kl->ik", phi_o.reshape(m_o, m_o, seg), x.reshape(m_o, seg))
    out[:m_o] = sub.sum(axis=1)
    out[m_o:] = sub[src, np.arange(m_o)].sum(axis=1)


def covariance_accumulate(phi_batch, src, x_batch, sum_p, sum_p2):
    b, m_o, n = phi_batch.shape
    seg = n // m_o
    w_o = np.einsum("bip,bp->bi", phi_batch, x_batch)
    segments = phi_batch.reshape(b, m_o, m_o, seg)
    x_seg = x_batch.reshape(b, m_o, seg)
    gathered = segments[:, src, np.arange(m_o), :]
    w_e = np.einsum("brkl,bkl->br", gathered, x_seg)
    w = np.concatenate([w_o, w_e], axis=1)
    sum_p += w.T @ w
    ww = w * w
    sum_p2 += ww.T @ ww
