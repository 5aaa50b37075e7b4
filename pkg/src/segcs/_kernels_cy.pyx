# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: segment gathers, sub-period accumulation, trial sums.

Arithmetic only; all randomness is drawn by the caller so both backends
consume identical inputs.
"""

from libc.stdint cimport int64_t

import numpy as np


def assemble_rows(const double[:, ::1] phi_o, const int64_t[:, ::1] src, double[:, ::1] out):
    cdef Py_ssize_t m_e = src.shape[0]
    cdef Py_ssize_t m_o = phi_o.shape[0]
    cdef Py_ssize_t n = phi_o.shape[1]
    cdef Py_ssize_t seg = n // m_o
    cdef Py_ssize_t r, k, j, base, s
    for r in range(m_e):
        for k in range(m_o):
            base = k * seg
            s = <Py_ssize_t> src[r, k]
            for j in range(seg):
                out[r, base + j] = phi_o[s, base + j]


def accumulate_segments(const double[:, ::1] phi_o, const int64_t[:, ::1] src, const double[::1] x, double[::1] out):
    cdef Py_ssize_t m_e = src.shape[0]
    cdef Py_ssize_t m_o = phi_o.shape[0]
    cdef Py_ssize_t n = phi_o.shape[1]
    cdef Py_ssize_t seg = n // m_o
    cdef Py_ssize_t i, k, j, r, base
    cdef double acc, part
    for i in range(m_o):
        acc = 0.0
        for k in range(m_o):
            base = k * seg
            part = 0.0
            for j in range(seg):
                part += phi_o[i, base + j] * x[base + j]
            acc += part
        out[i] = acc
    for r in range(m_e):
        acc = 0.0
        for k in range(m_o):
            base = k * seg
            i = <Py_ssize_t> src[r, k]
            part = 0.0
            for j in range(seg):
                part += phi_o[i, base + j] * x[base + j]
            acc += part
        out[m_o + r] = acc


def covariance_accumulate(const double[:, :, ::1] phi_batch, const int64_t[:, ::1] src,
                          const double[:, ::1] x_batch, double[:, ::1] sum_p,
                          double[:, ::1] sum_p2):
    cdef Py_ssize_t nb = phi_batch.shape[0]
    cdef Py_ssize_t m_o = phi_batch.shape[1]
    cdef Py_ssize_t n = phi_batch.shape[2]
    cdef Py_ssize_t m_e = src.shape[0]
    cdef Py_ssize_t m = m_o + m_e
    cdef Py_ssize_t seg = n // m_o
    w_arr = np.empty(m)
    cdef double[::1] w = w_arr
    cdef Py_ssize_t b, i, j, k, r, base
    cdef double acc, p
    for b in range(nb):
        for i in range(m_o):
            acc = 0.0
            for j in range(n):
                acc += phi_batch[b, i, j] * x_batch[b, j]
            w[i] = acc
        for r in range(m_e):
            acc = 0.0
            for k in range(m_o):
                base = k * seg
                i = <Py_ssize_t> src[r, k]
                for j in range(seg):
                    acc += phi_batch[b, i, base + j] * x_batch[b, base + j]
            w[m_o + r] = acc
        for i in range(m):
            for j in range(m):
                p = w[i] * w[j]
                sum_p[i, j] += p
                sum_p2[i, j] += p * p
