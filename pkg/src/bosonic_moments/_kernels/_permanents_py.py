"""NumPy implementation of the permanent kernels (fallback backend).

Both routines use Ryser's inclusion-exclusion formula with a Gray-code walk
over column subsets, so each of the 2^k - 1 steps updates the running row
sums with a single column instead of rebuilding them.
"""

import numpy as np


def permanent(a):
    """Permanent of a square complex matrix, O(2^k * k) via Ryser/Gray code."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent requires a square matrix, got shape {a.shape}")
    return complex(permanent_batch(a[np.newaxis])[0])


def permanent_batch(stack):
    """Permanents of a (B, k, k) stack of complex matrices, returned as (B,)."""
    stack = np.asarray(stack, dtype=np.complex128)
    if stack.ndim != 3 or stack.shape[1] != stack.shape[2]:
        raise ValueError(f"expected a (B, k, k) stack, got shape {stack.shape}")
    nbatch, k, _ = stack.shape
    if k == 0:
        return np.ones(nbatch, dtype=np.complex128)

    acc = np.zeros(nbatch, dtype=np.complex128)
    row_sums = np.zeros((nbatch, k), dtype=np.complex128)
    gray_prev = 0
    for g in range(1, 1 << k):
        gray = g ^ (g >> 1)
        flipped = gray ^ gray_prev
        col = flipped.bit_length() - 1
        if gray & flipped:
            row_sums += stack[:, :, col]
        else:
            row_sums -= stack[:, :, col]
        gray_prev = gray
        sign = -1.0 if (gray.bit_count() & 1) else 1.0
        acc += sign * np.prod(row_sums, axis=1)
    if k & 1:
        acc = -acc
    return acc
