# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled permanent kernels: Ryser's formula with a Gray-code subset walk."""

import numpy as np


cdef double complex _ryser(const double complex[:, :] a, double complex[:] row_sums, Py_ssize_t k) noexcept nogil:
    cdef double complex acc = 0.0
    cdef double complex prod
    cdef unsigned long long g, gray, gray_prev = 0, flipped
    cdef Py_ssize_t i, col, bits
    for i in range(k):
        row_sums[i] = 0.0
    for g in range(1, (<unsigned long long>1) << k):
        gray = g ^ (g >> 1)
        flipped = gray ^ gray_prev
        gray_prev = gray
        col = 0
        while not (flipped & ((<unsigned long long>1) << col)):
            col += 1
        if gray & flipped:
            for i in range(k):
                row_sums[i] = row_sums[i] + a[i, col]
        else:
            for i in range(k):
                row_sums[i] = row_sums[i] - a[i, col]
        prod = 1.0
        for i in range(k):
            prod = prod * row_sums[i]
        bits = 0
        while gray:
            gray &= gray - 1
            bits += 1
        if bits & 1:
            acc = acc - prod
        else:
            acc = acc + prod
    if k & 1:
        acc = -acc
    return acc


def permanent(a):
    """Permanent of a square complex matrix, O(2^k * k) via Ryser/Gray code."""
    mat = np.ascontiguousarray(a, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"permanent requires a square matrix, got shape {mat.shape}")
    cdef Py_ssize_t k = mat.shape[0]
    if k == 0:
        return 1.0 + 0.0j
    if k > 62:
        raise ValueError("matrix dimension too large for the 2^k subset walk")
    cdef const double complex[:, :] mv = mat
    cdef double complex[:] scratch = np.empty(k, dtype=np.complex128)
    return complex(_ryser(mv, scratch, k))


def permanent_batch(stack):
    """Permanents of a (B, k, k) stack of complex matrices, returned as (B,)."""
    mats = np.ascontiguousarray(stack, dtype=np.complex128)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise ValueError(f"expected a (B, k, k) stack, got shape {mats.shape}")
    cdef Py_ssize_t nbatch = mats.shape[0]
    cdef Py_ssize_t k = mats.shape[1]
    out = np.empty(nbatch, dtype=np.complex128)
    if k == 0:
        out[:] = 1.0
        return out
    if k > 62:
        raise ValueError("matrix dimension too large for the 2^k subset walk")
    cdef const double complex[:, :, :] mv = mats
    cdef double complex[:] out_mv = out
    cdef double complex[:] scratch = np.empty(k, dtype=np.complex128)
    cdef Py_ssize_t b
    with nogil:
        for b in range(nbatch):
            out_mv[b] = _ryser(mv[b], scratch, k)
    return out
