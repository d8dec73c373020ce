"""Irreducible-block data of the n-photon operator space.

The operator space of an n-photon sector splits into n + 1 inequivalent
multiplicity-free blocks indexed by k = 0..n.  This module provides their
dimensions, the eigenvalues of raise/lower round trips on each block, the
iterative projection of an operator onto block k, closed-form
Hilbert-Schmidt norms of those projections, and the lowered-purity values
g_l for Fock projectors that make the whole pipeline exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .combinatorics import (
    as_occupation,
    basis_size,
    binomial,
    bounded_compositions,
    factorial,
    pochhammer,
)
from .ladder import (
    SectorOperator,
    lower,
    lower_power,
    lowering_superoperator,
    raise_power,
)

#: Sector sizes above this are refused by the kernel-dimension check.
NULLITY_DIM_GUARD = 64


def _require_block_index(k: int, n: int):
    if k < 0 or k > n:
        raise ValueError(f"block index {k} outside 0..{n}")


def irrep_dim(m: int, k: int) -> int:
    """Dimension of block k: (2k+m-1)/(m-1) * C(k+m-2, k)^2, always an integer."""
    if m < 2:
        raise ValueError("block dimensions need m >= 2 (one mode is degenerate)")
    if k < 0:
        raise ValueError(f"block index must be >= 0, got {k}")
    numerator = (2 * k + m - 1) * binomial(k + m - 2, k) ** 2
    quotient, remainder = divmod(numerator, m - 1)
    assert remainder == 0
    return quotient


def step_eigenvalue(r: int, k: int, m: int) -> int:
    """Eigenvalue (k-r+1)(m+r+k) of raise-then-lower through sector k+1 on block r."""
    if r < 0 or r > k:
        raise ValueError(f"need 0 <= r <= k, got r={r}, k={k}")
    return (k - r + 1) * (m + r + k)


def roundtrip_eigenvalue(r: int, j: int, n: int, m: int) -> int:
    """Eigenvalue of the (n-j)-fold lower-after-raise round trip on block r.

    Equals (n-r)! (m+n+r-1)! / ((j-r)! (j+m+r-1)!), the telescoping product
    of step_eigenvalue(r, k, m) over k = j..n-1; at r = j it reduces to
    (n-j)! * (m+2j)_(n-j).
    """
    if not 0 <= r <= j <= n:
        raise ValueError(f"need 0 <= r <= j <= n, got r={r}, j={j}, n={n}")
    value = 1
    for k in range(j, n):
        value *= step_eigenvalue(r, k, m)
    return value


def decompose(o: SectorOperator) -> list[SectorOperator]:
    """All block components of `o`, bottom-up with memoized lower blocks.

    Component j is (1/a_{j}) (raise^{n-j} lower^{n-j}(o) - sum_{r<j} a_r P_r)
    with a_r = roundtrip_eigenvalue(r, j, n, m).  The components sum to `o`
    and are pairwise orthogonal; on the rational-diagonal payload everything
    stays exact.
    """
    if o.m < 2:
        raise ValueError("projection needs m >= 2 (one mode is degenerate)")
    n = o.n
    components: list[SectorOperator] = []
    lowered = [o]
    for _ in range(n):
        lowered.append(lower(lowered[-1]))
    for j in range(n + 1):
        acc = raise_power(lowered[n - j], n - j)
        for r in range(j):
            acc = acc - components[r].scaled(roundtrip_eigenvalue(r, j, n, o.m))
        scale = roundtrip_eigenvalue(j, j, n, o.m)
        if acc.is_diagonal:
            acc = acc.scaled(Fraction(1, scale))
        else:
            acc = acc.scaled(1.0 / scale)
        components.append(acc)
    return components


def project(o: SectorOperator, k: int) -> SectorOperator:
    """Projection of `o` onto block k of its sector."""
    _require_block_index(k, o.n)
    return decompose(o)[k]


def irrep_norm_closed(o: SectorOperator, k: int) -> Union[Fraction, float]:
    """Closed-form Tr[(P_k o)^2] for hermitian `o`, via lowered purities.

    (1/a_k) sum_{l=0}^{k} (-1)^{k-l} g_l / ((k-l)! (k+l+m-1)_(k-l)) with
    g_l = Tr[(lower^{n-l} o)^2] and a_k = roundtrip_eigenvalue(k, k, n, m).
    Non-hermitian operators must go through project() and an explicit norm.
    """
    if not o.hermitian:
        raise ValueError("closed-form block norms assume a hermitian operator")
    if o.m < 2:
        raise ValueError("closed-form block norms need m >= 2")
    n = o.n
    _require_block_index(k, n)
    lowered = o
    purities = {n: o.trace_square()}
    for steps in range(1, n + 1):
        lowered = lower(lowered)
        purities[n - steps] = lowered.trace_square()
    exact = o.is_diagonal
    total: Union[Fraction, float] = Fraction(0) if exact else 0.0
    for l in range(k + 1):
        denom = factorial(k - l) * pochhammer(k + l + o.m - 1, k - l)
        term_sign = -1 if (k - l) % 2 else 1
        if exact:
            total += Fraction(term_sign, denom) * purities[l]
        else:
            total += term_sign * purities[l] / denom
    scale = roundtrip_eigenvalue(k, k, n, o.m)
    return total / scale if not exact else total / Fraction(scale)


def explicit_norm_sq(o: SectorOperator, k: int) -> Union[Fraction, float]:
    """Tr[P_k(o)^dag P_k(o)] by explicit projection (any operator)."""
    return project(o, k).hs_norm_sq()


def fock_lowered_purity(occ, l: int) -> int:
    """g_l of a Fock projector: ((n-l)!)^2 sum over bounded b of prod C(R_i, b_i)^2.

    The sum runs over 0 <= b <= R componentwise with |b| = n - l.  Special
    cases: collision-free states give ((n-l)!)^2 C(n, n-l) and single-mode
    bunched states ((n-l)!)^2 C(n, n-l)^2.
    """
    occ = as_occupation(occ)
    n = occ.total
    if l < 0 or l > n:
        raise ValueError(f"lowered-purity index {l} outside 0..{n}")
    drop = n - l
    total = 0
    for b in bounded_compositions(drop, occ.counts):
        prod = 1
        for r_i, b_i in zip(occ.counts, b):
            prod *= binomial(r_i, b_i) ** 2
        total += prod
    return factorial(drop) ** 2 * total


def fock_lowered_purity_sum(m: int, n: int, k: int) -> Fraction:
    """sum_R g_{n-k}(|R><R|) over the whole (m, n) basis, in closed form.

    Equals |Phi| * (n! k! / (n-k)!) * (n-k+(m+1)/2)_k / ((m+1)/2)_k; the
    half-integer rising products stay exact through rational arithmetic.
    """
    if m < 1:
        raise ValueError(f"mode count must be >= 1, got {m}")
    _require_block_index(k, n)
    half = Fraction(m + 1, 2)
    value = Fraction(basis_size(m, n) * factorial(n) * factorial(k), factorial(n - k))
    value *= pochhammer(n - k + half, k) / pochhammer(half, k)
    return value


def lowering_nullity(m: int, n: int) -> int:
    """Kernel dimension of the lowering map on the (m, n) operator space.

    Must equal irrep_dim(m, n): the kernel is exactly the top block.
    Assembles the explicit superoperator, so sectors with more than
    NULLITY_DIM_GUARD states are refused.
    """
    if m < 2:
        raise ValueError("kernel check needs m >= 2")
    if n < 0:
        raise ValueError(f"photon number must be >= 0, got {n}")
    d = basis_size(m, n)
    if d > NULLITY_DIM_GUARD:
        raise ValueError(f"sector size {d} exceeds the dimension guard {NULLITY_DIM_GUARD}")
    if n == 0:
        return 1  # the vacuum block: nothing to lower
    superop = lowering_superoperator(m, n)
    rank = np.linalg.matrix_rank(superop)
    return d * d - int(rank)


@dataclass(frozen=True)
class IrrepSpectrum:
    """Per-block dimensions and projection norms of one sector operator."""

    m: int
    n: int
    entries: tuple[tuple[int, int, Union[Fraction, float]], ...]

    def __post_init__(self):
        dims = sum(dim for _, dim, _ in self.entries)
        d = basis_size(self.m, self.n)
        if dims != d * d:
            raise ValueError(
                f"block dimensions sum to {dims}, expected {d * d} (incomplete decomposition)"
            )

    def total_norm_sq(self) -> Union[Fraction, float]:
        return sum(norm for _, _, norm in self.entries)


def operator_spectrum(o: SectorOperator) -> IrrepSpectrum:
    """IrrepSpectrum of `o`: closed-form norms when hermitian, explicit otherwise."""
    entries = []
    for k in range(o.n + 1):
        if o.hermitian:
            norm = irrep_norm_closed(o, k)
        else:
            norm = explicit_norm_sq(o, k)
        entries.append((k, irrep_dim(o.m, k), norm))
    return IrrepSpectrum(o.m, o.n, tuple(entries))
