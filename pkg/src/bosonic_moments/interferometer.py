"""Linear interferometers and their lift to the n-photon sector.

This is the brute-force side of the artifact: Haar-random unitaries, matrix
permanents, transition amplitudes of the lifted representation, and output
probabilities.  Amplitudes follow the convention pinned by the single-photon
case: rows of the replicated submatrix are indexed by the OUTPUT occupation,
columns by the INPUT one, so the one-photon sector matrix equals the
interferometer matrix itself and the lift is multiplicative,
lift(U V) = lift(U) lift(V).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .combinatorics import FockBasis, Occupation, as_occupation, enumerate_basis

UNITARITY_TOL = 1e-12
LIFT_UNITARITY_TOL = 1e-9


@dataclass(frozen=True)
class Interferometer:
    """An m-mode linear interferometer: an m x m unitary matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"interferometer matrix must be square, got {mat.shape}")
        defect = np.max(np.abs(mat.conj().T @ mat - np.eye(mat.shape[0])))
        if defect > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary: max |U^dag U - I| = {defect:.3e}")
        object.__setattr__(self, "matrix", mat)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]


def rng_stream(seed: int, worker: int = 0) -> np.random.Generator:
    """Counter-based generator; worker w draws from the stream keyed seed XOR w."""
    return np.random.Generator(np.random.Philox(key=seed ^ worker))


def haar_stack(m: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, m, m) stack of independent Haar-distributed unitaries.

    Complex Ginibre matrices are QR-orthonormalized and each column is
    rescaled by the phase of the corresponding diagonal entry of R, which
    corrects the QR gauge so the result is Haar-distributed.
    """
    ginibre = (
        rng.standard_normal((count, m, m)) + 1j * rng.standard_normal((count, m, m))
    ) / math.sqrt(2.0)
    q, r = np.linalg.qr(ginibre)
    diag = np.diagonal(r, axis1=-2, axis2=-1).copy()
    diag /= np.abs(diag)
    return q * diag[:, np.newaxis, :]


def haar_unitary(m: int, seed: int) -> Interferometer:
    """One Haar-random interferometer, deterministic for a fixed seed."""
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")
    return Interferometer(haar_stack(m, 1, rng_stream(seed))[0])


def permanent(a) -> complex:
    """Permanent sum_{sigma} prod_i A[i, sigma(i)] by Ryser's formula.

    The empty 0 x 0 matrix has permanent 1.  Dispatches to the compiled
    kernel when available.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent requires a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        return complex(1.0)
    return complex(_kernels.permanent(a))


def permanent_batch(stack) -> np.ndarray:
    """Permanents of a stack of equally sized square matrices."""
    return np.asarray(_kernels.permanent_batch(np.asarray(stack, dtype=np.complex128)))


def permanent_glynn(a) -> complex:
    """Glynn's formula with a Gray-code walk; independent cross-check oracle.

    Per(A) = 2^{1-k} sum_{delta} (prod delta_i) prod_j sum_i delta_i A[i, j]
    over delta in {+1, -1}^k with delta_1 fixed to +1.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"permanent requires a square matrix, got shape {a.shape}")
    k = a.shape[0]
    if k == 0:
        return complex(1.0)
    if k > 20:
        raise ValueError("Glynn oracle is intended for small matrices")
    col_sums = a.sum(axis=0)
    acc = np.prod(col_sums)
    gray_prev = 0
    for g in range(1, 1 << (k - 1)):
        gray = g ^ (g >> 1)
        flipped = gray ^ gray_prev
        row = flipped.bit_length()  # rows 1..k-1 toggle; row 0 stays +1
        gray_prev = gray
        if gray & flipped:
            col_sums = col_sums - 2.0 * a[row]
        else:
            col_sums = col_sums + 2.0 * a[row]
        parity = -1.0 if (gray.bit_count() & 1) else 1.0
        acc += parity * np.prod(col_sums)
    return complex(acc / 2 ** (k - 1))


def _replication_indices(occ: Occupation) -> list[int]:
    out: list[int] = []
    for mode, count in enumerate(occ.counts):
        out.extend([mode] * count)
    return out


def _amplitude_norm(s: Occupation, t: Occupation) -> float:
    prod = 1
    for c in s.counts:
        prod *= math.factorial(c)
    for c in t.counts:
        prod *= math.factorial(c)
    return math.sqrt(prod)


def amplitude(u: Interferometer, s, t) -> complex:
    """Transition amplitude <t| lift_n(U) |s> for occupations s -> t.

    Equals Per(U[rows(t), cols(s)]) / sqrt(prod s_i! prod t_j!), where the
    n x n submatrix repeats row j t_j times and column i s_i times.
    """
    s = as_occupation(s)
    t = as_occupation(t)
    if s.m != u.m or t.m != u.m:
        raise ValueError("occupations must have the interferometer's mode count")
    if s.total != t.total:
        raise ValueError(
            f"photon totals differ: input {s.total} vs output {t.total}"
        )
    if s.total == 0:
        return complex(1.0)
    rows = _replication_indices(t)
    cols = _replication_indices(s)
    sub = u.matrix[np.ix_(rows, cols)]
    return permanent(sub) / _amplitude_norm(s, t)


def amplitude_batch(mats: np.ndarray, s, t) -> np.ndarray:
    """amplitude() for a (B, m, m) stack of unitaries, vectorized."""
    s = as_occupation(s)
    t = as_occupation(t)
    if s.total != t.total:
        raise ValueError("photon totals differ")
    if s.total == 0:
        return np.ones(mats.shape[0], dtype=np.complex128)
    rows = np.asarray(_replication_indices(t))
    cols = np.asarray(_replication_indices(s))
    sub = mats[:, rows[:, np.newaxis], cols[np.newaxis, :]]
    return permanent_batch(sub) / _amplitude_norm(s, t)


@dataclass(frozen=True)
class HomomorphismMatrix:
    """Matrix of the n-photon lift of an interferometer in the Fock basis."""

    basis: FockBasis
    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=np.complex128)
        d = self.basis.size
        if mat.shape != (d, d):
            raise ValueError(f"expected a {d} x {d} matrix, got {mat.shape}")
        defect = np.max(np.abs(mat.conj().T @ mat - np.eye(d)))
        if defect > LIFT_UNITARITY_TOL:
            raise ValueError(f"lifted matrix is not unitary: defect {defect:.3e}")
        object.__setattr__(self, "matrix", mat)


def homomorphism_matrix(u: Interferometer, n: int) -> HomomorphismMatrix:
    """The D x D matrix of the n-photon lift, entry (t, s) = amplitude(u, s, t)."""
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    basis = enumerate_basis(u.m, n)
    d = basis.size
    if n == 0:
        return HomomorphismMatrix(basis, np.ones((1, 1), dtype=np.complex128))
    # One batched permanent call over all D^2 replicated submatrices.
    rows = [np.asarray(_replication_indices(t)) for t in basis]
    subs = np.empty((d * d, n, n), dtype=np.complex128)
    norms = np.empty(d * d)
    for ti, t_rows in enumerate(rows):
        for si, s in enumerate(basis):
            cols = rows[si]
            subs[ti * d + si] = u.matrix[np.ix_(t_rows, cols)]
            norms[ti * d + si] = _amplitude_norm(s, basis[ti])
    perms = permanent_batch(subs) / norms
    return HomomorphismMatrix(basis, perms.reshape(d, d))


def output_probability(u: Interferometer, input_occ, output_occ) -> float:
    """|amplitude|^2; over all outputs these sum to 1."""
    return float(abs(amplitude(u, input_occ, output_occ)) ** 2)
