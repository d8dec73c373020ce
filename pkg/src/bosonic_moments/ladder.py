"""Photon-removing and photon-adding maps on fixed-sector operators.

The maps  lower(X) = sum_s a_s X a_s^dag  and  raise_(X) = sum_s a_s^dag X a_s
move an operator between adjacent photon-number sectors.  Operators diagonal
in the Fock basis (all Fock projectors and everything the maps produce from
them) are stored as exact rational diagonals: the square-root matrix elements
pair up into the integer multiplicities (p_s + 1) and p_s, so the entire
analytic pipeline downstream stays exact.  General operators use dense
complex matrices.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

import numpy as np

from .combinatorics import FockBasis, as_occupation, enumerate_basis

HERMITICITY_TOL = 1e-12


@lru_cache(maxsize=None)
def _mode_maps(m: int, n_low: int) -> tuple:
    """Per-mode links between the (m, n_low) and (m, n_low + 1) bases.

    For mode s, targets[s][i] is the rank of state_i + e_s in the upper
    basis and counts[s][i] = state_i[s] + 1 the integer multiplicity, for
    state_i running over the lower basis.
    """
    low = enumerate_basis(m, n_low)
    high = enumerate_basis(m, n_low + 1)
    targets = []
    counts = []
    for s in range(m):
        t = np.empty(low.size, dtype=np.intp)
        c = np.empty(low.size, dtype=np.int64)
        for i, occ in enumerate(low):
            t[i] = high.index(occ.replace(s, occ.counts[s] + 1))
            c[i] = occ.counts[s] + 1
        t.setflags(write=False)
        c.setflags(write=False)
        targets.append(t)
        counts.append(c)
    return tuple(targets), tuple(counts)


class SectorOperator:
    """An operator on the n-photon sector of m modes.

    Exactly one payload is set: `diag` (tuple of Fractions, the exact
    diagonal fast path) or `matrix` (dense complex).  The hermitian flag is
    validated at construction for dense payloads; rational diagonals are
    hermitian by construction.
    """

    __slots__ = ("basis", "diag", "matrix", "hermitian")

    def __init__(
        self,
        basis: FockBasis,
        diag: Optional[Sequence] = None,
        matrix: Optional[np.ndarray] = None,
        hermitian: Optional[bool] = None,
    ):
        if (diag is None) == (matrix is None):
            raise ValueError("exactly one of diag or matrix must be given")
        self.basis = basis
        if diag is not None:
            entries = tuple(Fraction(x) for x in diag)
            if len(entries) != basis.size:
                raise ValueError(
                    f"diagonal length {len(entries)} != basis size {basis.size}"
                )
            self.diag = entries
            self.matrix = None
            self.hermitian = True if hermitian is None else hermitian
        else:
            mat = np.array(matrix, dtype=np.complex128)
            if mat.shape != (basis.size, basis.size):
                raise ValueError(
                    f"matrix shape {mat.shape} != ({basis.size}, {basis.size})"
                )
            self.diag = None
            self.matrix = mat
            if hermitian is None:
                hermitian = bool(
                    np.max(np.abs(mat - mat.conj().T), initial=0.0) <= HERMITICITY_TOL
                )
            elif hermitian:
                defect = np.max(np.abs(mat - mat.conj().T), initial=0.0)
                if defect > HERMITICITY_TOL:
                    raise ValueError(
                        f"operator flagged hermitian but |X - X^dag| = {defect:.3e}"
                    )
            self.hermitian = hermitian

    # -- constructors -------------------------------------------------

    @classmethod
    def fock_projector(cls, basis: FockBasis, occ) -> "SectorOperator":
        occ = as_occupation(occ)
        entries = [Fraction(0)] * basis.size
        entries[basis.index(occ)] = Fraction(1)
        return cls(basis, diag=entries)

    @classmethod
    def identity(cls, basis: FockBasis) -> "SectorOperator":
        return cls(basis, diag=[Fraction(1)] * basis.size)

    @classmethod
    def from_matrix(cls, basis: FockBasis, matrix, hermitian=None) -> "SectorOperator":
        return cls(basis, matrix=matrix, hermitian=hermitian)

    # -- payload helpers ----------------------------------------------

    @property
    def is_diagonal(self) -> bool:
        return self.diag is not None

    @property
    def m(self) -> int:
        return self.basis.m

    @property
    def n(self) -> int:
        return self.basis.n

    def to_matrix(self) -> np.ndarray:
        if self.matrix is not None:
            return self.matrix.copy()
        return np.diag(np.array([float(x) for x in self.diag], dtype=np.complex128))

    def is_fock_projector(self) -> bool:
        return self.is_diagonal and sorted(self.diag) == sorted(
            [Fraction(1)] + [Fraction(0)] * (self.basis.size - 1)
        )

    def trace(self) -> Union[Fraction, complex]:
        if self.is_diagonal:
            return sum(self.diag, Fraction(0))
        return complex(np.trace(self.matrix))

    def trace_square(self) -> Union[Fraction, float]:
        """Tr[X^2] (not Tr[X^dag X]); real for hermitian X."""
        if self.is_diagonal:
            return sum((x * x for x in self.diag), Fraction(0))
        value = complex(np.sum(self.matrix * self.matrix.T))
        return value.real if self.hermitian else value

    def hs_norm_sq(self) -> Union[Fraction, float]:
        """Hilbert-Schmidt norm squared Tr[X^dag X]."""
        if self.is_diagonal:
            return sum((x * x for x in self.diag), Fraction(0))
        return float(np.vdot(self.matrix, self.matrix).real)

    def hs_inner(self, other: "SectorOperator") -> Union[Fraction, complex]:
        """Hilbert-Schmidt pairing Tr[X^dag Y]."""
        self._check_same_sector(other)
        if self.is_diagonal and other.is_diagonal:
            return sum((a * b for a, b in zip(self.diag, other.diag)), Fraction(0))
        return complex(np.vdot(self.to_matrix(), other.to_matrix()))

    def _check_same_sector(self, other: "SectorOperator"):
        if self.basis.m != other.basis.m or self.basis.n != other.basis.n:
            raise ValueError(
                f"sector mismatch: ({self.m}, {self.n}) vs ({other.m}, {other.n})"
            )

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "SectorOperator") -> "SectorOperator":
        self._check_same_sector(other)
        if self.is_diagonal and other.is_diagonal:
            return SectorOperator(
                self.basis, diag=[a + b for a, b in zip(self.diag, other.diag)]
            )
        return SectorOperator(
            self.basis,
            matrix=self.to_matrix() + other.to_matrix(),
            hermitian=self.hermitian and other.hermitian,
        )

    def __sub__(self, other: "SectorOperator") -> "SectorOperator":
        return self + other.scaled(-1)

    def scaled(self, factor) -> "SectorOperator":
        if self.is_diagonal and not isinstance(factor, (complex, float)):
            return SectorOperator(self.basis, diag=[Fraction(factor) * x for x in self.diag])
        if self.is_diagonal:
            factor_c = complex(factor)
            if factor_c.imag == 0.0:
                return SectorOperator(
                    self.basis, diag=None, matrix=self.to_matrix() * factor_c
                )
            return SectorOperator(
                self.basis, matrix=self.to_matrix() * factor_c, hermitian=False
            )
        return SectorOperator(
            self.basis,
            matrix=self.matrix * complex(factor),
            hermitian=self.hermitian and complex(factor).imag == 0.0,
        )

    def conj_transpose(self) -> "SectorOperator":
        if self.is_diagonal:
            return self
        return SectorOperator(
            self.basis, matrix=self.matrix.conj().T, hermitian=self.hermitian
        )

    def max_abs(self) -> float:
        if self.is_diagonal:
            return max((abs(float(x)) for x in self.diag), default=0.0)
        return float(np.max(np.abs(self.matrix), initial=0.0))


def lower(x: SectorOperator) -> SectorOperator:
    """One application of sum_s a_s (.) a_s^dag: maps sector n to n - 1."""
    if x.n < 1:
        raise ValueError("cannot lower an operator on the vacuum sector")
    low_basis = enumerate_basis(x.m, x.n - 1)
    targets, counts = _mode_maps(x.m, x.n - 1)
    if x.is_diagonal:
        out = [Fraction(0)] * low_basis.size
        for s in range(x.m):
            t, c = targets[s], counts[s]
            for i in range(low_basis.size):
                out[i] += int(c[i]) * x.diag[t[i]]
        return SectorOperator(low_basis, diag=out)
    mat = x.matrix
    out_mat = np.zeros((low_basis.size, low_basis.size), dtype=np.complex128)
    for s in range(x.m):
        t = targets[s]
        root = np.sqrt(counts[s].astype(np.float64))
        out_mat += np.outer(root, root) * mat[np.ix_(t, t)]
    return SectorOperator(low_basis, matrix=out_mat, hermitian=x.hermitian)


def raise_(x: SectorOperator) -> SectorOperator:
    """One application of sum_s a_s^dag (.) a_s: maps sector n to n + 1."""
    high_basis = enumerate_basis(x.m, x.n + 1)
    targets, counts = _mode_maps(x.m, x.n)
    if x.is_diagonal:
        out = [Fraction(0)] * high_basis.size
        for s in range(x.m):
            t, c = targets[s], counts[s]
            for i in range(x.basis.size):
                out[t[i]] += int(c[i]) * x.diag[i]
        return SectorOperator(high_basis, diag=out)
    mat = x.matrix
    out_mat = np.zeros((high_basis.size, high_basis.size), dtype=np.complex128)
    for s in range(x.m):
        t = targets[s]
        root = np.sqrt(counts[s].astype(np.float64))
        out_mat[np.ix_(t, t)] += np.outer(root, root) * mat
    return SectorOperator(high_basis, matrix=out_mat, hermitian=x.hermitian)


def lower_power(x: SectorOperator, j: int) -> SectorOperator:
    """j-fold lowering; j = 0 is the identity."""
    if j < 0:
        raise ValueError(f"lowering power must be >= 0, got {j}")
    if j > x.n:
        raise ValueError(f"cannot lower {j} times from the {x.n}-photon sector")
    for _ in range(j):
        x = lower(x)
    return x


def raise_power(x: SectorOperator, j: int) -> SectorOperator:
    """j-fold raising; j = 0 is the identity."""
    if j < 0:
        raise ValueError(f"raising power must be >= 0, got {j}")
    for _ in range(j):
        x = raise_(x)
    return x


def commutator_eigenvalue(n: int, m: int) -> int:
    """Scalar by which H = lower o raise - raise o lower acts on sector n."""
    if n < 0 or m < 1:
        raise ValueError(f"need n >= 0 and m >= 1, got ({m}, {n})")
    return m + 2 * n


def annihilation_coefficient_matrix(m: int, n_low: int, s: int) -> np.ndarray:
    """Matrix of a_s from the (n_low + 1)- to the n_low-photon sector (real)."""
    low = enumerate_basis(m, n_low)
    high = enumerate_basis(m, n_low + 1)
    targets, counts = _mode_maps(m, n_low)
    mat = np.zeros((low.size, high.size))
    mat[np.arange(low.size), targets[s]] = np.sqrt(counts[s].astype(np.float64))
    return mat


def lowering_superoperator(m: int, n: int) -> np.ndarray:
    """lower() as an explicit matrix on row-major vectorized sector operators."""
    if n < 1:
        raise ValueError("lowering superoperator needs n >= 1")
    blocks = [annihilation_coefficient_matrix(m, n - 1, s) for s in range(m)]
    return sum(np.kron(a, a) for a in blocks)


def raising_superoperator(m: int, n: int) -> np.ndarray:
    """raise_() as an explicit matrix on row-major vectorized sector operators."""
    blocks = [annihilation_coefficient_matrix(m, n, s) for s in range(m)]
    return sum(np.kron(a.T, a.T) for a in blocks)


def diagonal_lowering_matrix(m: int, n: int) -> np.ndarray:
    """Integer matrix of lower() restricted to Fock-diagonal operators."""
    if n < 1:
        raise ValueError("needs n >= 1")
    low = enumerate_basis(m, n - 1)
    high = enumerate_basis(m, n)
    targets, counts = _mode_maps(m, n - 1)
    mat = np.zeros((low.size, high.size), dtype=np.int64)
    for s in range(m):
        mat[np.arange(low.size), targets[s]] += counts[s]
    return mat


def diagonal_raising_matrix(m: int, n: int) -> np.ndarray:
    """Integer matrix of raise_() restricted to Fock-diagonal operators."""
    return diagonal_lowering_matrix(m, n + 1).T
