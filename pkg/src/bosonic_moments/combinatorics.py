"""Exact combinatorics for fixed-photon-number mode configurations.

Everything in this module is integer or rational arithmetic: basis
enumeration and ranking for n photons in m modes, memoized factorials and
binomials, and the terminating special functions (Pochhammer products,
truncated 2F1 sums, collision-free ratios) that the closed-form moment
expressions are built from.  Floating point never enters here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Union

#: Arguments up to this value go through the memo tables; larger ones are
#: computed directly (asymptotic sweeps reach n around 500, well below this).
MEMO_CAP = 4096

ExactScalar = Fraction
Scalar = Union[int, Fraction]


@lru_cache(maxsize=None)
def _factorial_cached(k: int) -> int:
    return math.factorial(k)


def factorial(k: int) -> int:
    """k!, memoized for k <= MEMO_CAP."""
    if k < 0:
        raise ValueError(f"factorial of negative argument {k}")
    if k <= MEMO_CAP:
        return _factorial_cached(k)
    return math.factorial(k)


@lru_cache(maxsize=None)
def _binomial_cached(a: int, b: int) -> int:
    return math.comb(a, b)


def binomial(a: int, b: int) -> int:
    """C(a, b) with the convention C(a, b) = 0 for b < 0 or b > a."""
    if b < 0 or b > a:
        return 0
    if a <= MEMO_CAP:
        return _binomial_cached(a, b)
    return math.comb(a, b)


@dataclass(frozen=True)
class Occupation:
    """Photon counts per mode; the label of one Fock basis state."""

    counts: tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) < 1:
            raise ValueError("occupation needs at least one mode")
        if any((not isinstance(c, int)) or c < 0 for c in self.counts):
            raise ValueError(f"occupation counts must be non-negative integers: {self.counts}")

    @property
    def m(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return sum(self.counts)

    def is_collision_free(self) -> bool:
        return all(c <= 1 for c in self.counts)

    def replace(self, mode: int, value: int) -> "Occupation":
        counts = list(self.counts)
        counts[mode] = value
        return Occupation(tuple(counts))

    def __iter__(self):
        return iter(self.counts)

    def __len__(self):
        return len(self.counts)


def as_occupation(value) -> Occupation:
    """Coerce a tuple/list/Occupation into an Occupation."""
    if isinstance(value, Occupation):
        return value
    return Occupation(tuple(int(v) for v in value))


def collision_free_occupation(m: int, n: int) -> Occupation:
    """The reference collision-free state: one photon in each of the first n modes."""
    if n > m:
        raise ValueError(f"no collision-free state with {n} photons in {m} modes")
    return Occupation(tuple(1 if i < n else 0 for i in range(m)))


def _compositions(m: int, n: int) -> Iterator[tuple[int, ...]]:
    # Ascending lexicographic order: first coordinate varies slowest.
    if m == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _compositions(m - 1, n - first):
            yield (first,) + rest


class FockBasis:
    """All n-photon configurations on m modes, in ascending lexicographic order.

    The order puts (0, ..., 0, n) first and (n, 0, ..., 0) last, which admits
    an O(m) stars-and-bars ranking formula (`rank`).  Construction also
    builds a dict index used by the hot paths.
    """

    __slots__ = ("m", "n", "states", "_index")

    def __init__(self, m: int, n: int):
        if m < 1:
            raise ValueError(f"mode count must be >= 1, got {m}")
        if n < 0:
            raise ValueError(f"photon number must be >= 0, got {n}")
        self.m = m
        self.n = n
        self.states: tuple[Occupation, ...] = tuple(
            Occupation(c) for c in _compositions(m, n)
        )
        self._index = {occ.counts: i for i, occ in enumerate(self.states)}

    @property
    def size(self) -> int:
        return len(self.states)

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i: int) -> Occupation:
        return self.states[i]

    def index(self, occ) -> int:
        """Dict-backed position lookup (same order as `rank`)."""
        occ = as_occupation(occ)
        try:
            return self._index[occ.counts]
        except KeyError:
            raise ValueError(
                f"occupation {occ.counts} is not a {self.n}-photon state on {self.m} modes"
            ) from None

    def rank(self, occ) -> int:
        """O(m) combinatorial rank of `occ` in the canonical order."""
        occ = as_occupation(occ)
        if occ.m != self.m or occ.total != self.n:
            raise ValueError(
                f"occupation {occ.counts} does not belong to the ({self.m}, {self.n}) sector"
            )
        rank = 0
        remaining = self.n
        for i in range(self.m - 1):
            tail_modes = self.m - 1 - i
            s_i = occ.counts[i]
            # states whose i-th count is below s_i, via the hockey-stick sum
            rank += binomial(remaining + tail_modes, tail_modes) - binomial(
                remaining - s_i + tail_modes, tail_modes
            )
            remaining -= s_i
        return rank

    def unrank(self, index: int) -> Occupation:
        """Inverse of `rank`."""
        if not 0 <= index < self.size:
            raise IndexError(f"rank {index} out of range for basis of size {self.size}")
        counts = []
        remaining = self.n
        for i in range(self.m - 1):
            tail_modes = self.m - 1 - i
            value = 0
            while True:
                block = binomial(remaining - value + tail_modes - 1, tail_modes - 1)
                if index < block:
                    break
                index -= block
                value += 1
            counts.append(value)
            remaining -= value
        counts.append(remaining)
        return Occupation(tuple(counts))


@lru_cache(maxsize=None)
def enumerate_basis(m: int, n: int) -> FockBasis:
    """The (m, n) Fock basis with C(n+m-1, n) states, cached per sector."""
    return FockBasis(m, n)


def basis_size(m: int, n: int) -> int:
    """|Phi| = C(n+m-1, n) without materializing the basis."""
    return binomial(n + m - 1, n)


def pochhammer(x: Scalar, p: int) -> Scalar:
    """Rising product x (x+1) ... (x+p-1); the empty product for p = 0.

    Exact for int and Fraction arguments, negative x included.
    """
    if p < 0:
        raise ValueError(f"pochhammer order must be >= 0, got {p}")
    result = x - x + 1  # 1 in the arithmetic of x
    for i in range(p):
        result *= x + i
    return result


def hyp2f1_terminating(k: int, a: Scalar, b: Scalar, z: Scalar) -> Fraction:
    """Terminating sum_{p=0}^{k} (-1)^p C(k, p) (a)_p / (b)_p z^p, exactly.

    Evaluated by the term-ratio recurrence
    t_{p+1} = t_p * (-(k-p)/(p+1)) * (a+p)/(b+p) * z.
    Raises ValueError if some denominator factor b+p vanishes for p < k.
    """
    if k < 0:
        raise ValueError(f"series order must be >= 0, got {k}")
    term = Fraction(1)
    total = Fraction(1)
    for p in range(k):
        denom = Fraction(b) + p
        if denom == 0:
            raise ValueError(
                f"zero denominator Pochhammer factor (b)_p at b={b}, p={p + 1}"
            )
        term *= Fraction(-(k - p), p + 1) * ((Fraction(a) + p) / denom) * Fraction(z)
        total += term
    return total


def collision_free_ratio(m: int, n: int) -> Fraction:
    """Fraction of collision-free configurations, C(m, n) / C(m+n-1, n).

    Returns exact 0 for m < n, where no collision-free configuration exists.
    """
    if m < 1 or n < 0:
        raise ValueError(f"need m >= 1 and n >= 0, got ({m}, {n})")
    if m < n:
        return Fraction(0)
    return Fraction(binomial(m, n), binomial(m + n - 1, n))


def bounded_compositions(total: int, bounds: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    """All vectors 0 <= b <= bounds (componentwise) with sum(b) == total."""
    if total < 0:
        return
    if len(bounds) == 1:
        if total <= bounds[0]:
            yield (total,)
        return
    head = bounds[0]
    for first in range(min(head, total) + 1):
        for rest in bounded_compositions(total - first, bounds[1:]):
            yield (first,) + rest
