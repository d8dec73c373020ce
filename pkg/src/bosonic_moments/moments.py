"""Haar second moments of sector expectation values, plus the MC oracle.

The closed form sums 1/d_k * |P_k(rho)|^2 * |P_k(O)|^2 over the n + 1
irreducible blocks; for Fock-diagonal rational operators the result is an
exact rational.  The Monte-Carlo estimator draws Haar interferometers in
batches, evaluates the squared output probability through the permanent
kernels, and accumulates mean and variance with a merge-stable one-pass
scheme, so a run is reproducible for fixed (seed, samples, worker count).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .combinatorics import as_occupation, basis_size, enumerate_basis
from .interferometer import amplitude_batch, haar_stack, rng_stream
from .irreps import irrep_dim, irrep_norm_closed
from .ladder import SectorOperator

_CHUNK = 20_000


@dataclass(frozen=True)
class MomentEstimate:
    """Sample mean / variance / standard error of a Monte-Carlo average."""

    mean: float
    variance: float
    std_error: float
    samples: int

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("an estimate needs at least two samples")
        expected = math.sqrt(self.variance / self.samples)
        if not math.isclose(self.std_error, expected, rel_tol=1e-12, abs_tol=1e-300):
            raise ValueError("std_error must equal sqrt(variance / samples)")

    @classmethod
    def from_welford(cls, count: int, mean: float, m2: float) -> "MomentEstimate":
        variance = m2 / (count - 1) if count > 1 else 0.0
        variance = max(variance, 0.0)
        return cls(mean, variance, math.sqrt(variance / count), count)


def merge_welford(a: tuple[int, float, float], b: tuple[int, float, float]):
    """Combine two (count, mean, M2) accumulators; order-independent."""
    count_a, mean_a, m2_a = a
    count_b, mean_b, m2_b = b
    if count_a == 0:
        return b
    if count_b == 0:
        return a
    count = count_a + count_b
    delta = mean_b - mean_a
    mean = mean_a + delta * count_b / count
    m2 = m2_a + m2_b + delta * delta * count_a * count_b / count
    return count, mean, m2


def _batch_welford(values: np.ndarray) -> tuple[int, float, float]:
    count = int(values.size)
    mean = float(values.mean())
    m2 = float(np.sum((values - mean) ** 2))
    return count, mean, m2


def second_moment(rho: SectorOperator, obs: SectorOperator) -> Union[Fraction, float]:
    """E_U[ Tr[rho U^dag O U]^2 ] over Haar-random interferometers.

    Both operators must live on the same (m, n) sector and be hermitian;
    exact when both carry rational diagonals.
    """
    rho._check_same_sector(obs)
    if rho.m < 2:
        raise ValueError("second moment formula needs m >= 2 (one mode is degenerate)")
    if not (rho.hermitian and obs.hermitian):
        raise ValueError("second moment closed form assumes hermitian operators")
    exact = rho.is_diagonal and obs.is_diagonal
    total: Union[Fraction, float] = Fraction(0) if exact else 0.0
    for k in range(rho.n + 1):
        dim = irrep_dim(rho.m, k)
        term = irrep_norm_closed(rho, k) * irrep_norm_closed(obs, k)
        if exact:
            total += Fraction(1, dim) * term
        else:
            total += float(term) / dim
    return total


def first_moment(rho: SectorOperator, obs: SectorOperator) -> Fraction:
    """E_U[ Tr[rho U^dag O U] ] = 1/|Phi| for two rank-one Fock projectors."""
    rho._check_same_sector(obs)
    if not (rho.is_fock_projector() and obs.is_fock_projector()):
        raise ValueError("first moment is implemented for rank-one Fock projectors only")
    return Fraction(1, basis_size(rho.m, rho.n))


def _shard(samples: int, workers: int) -> list[int]:
    base, extra = divmod(samples, workers)
    return [base + (1 if w < extra else 0) for w in range(workers)]


def _mc_probability_moments(
    input_occ,
    output_occ,
    samples: int,
    seed: int,
    jobs: int,
    power: int,
) -> MomentEstimate:
    """Welford estimate of E[p_U(output)^power] for one input/output pair."""
    input_occ = as_occupation(input_occ)
    output_occ = as_occupation(output_occ)
    if input_occ.m != output_occ.m or input_occ.total != output_occ.total:
        raise ValueError("input and output must share modes and photon total")
    m = input_occ.m

    def run_worker(worker: int, count: int) -> tuple[int, float, float]:
        rng = rng_stream(seed, worker)
        acc = (0, 0.0, 0.0)
        done = 0
        while done < count:
            batch = min(_CHUNK, count - done)
            mats = haar_stack(m, batch, rng)
            probs = np.abs(amplitude_batch(mats, input_occ, output_occ)) ** 2
            acc = merge_welford(acc, _batch_welford(probs**power))
            done += batch
        return acc

    counts = _shard(samples, max(1, jobs))
    if len(counts) == 1:
        total = run_worker(0, counts[0])
    else:
        with ThreadPoolExecutor(max_workers=len(counts)) as pool:
            parts = list(pool.map(run_worker, range(len(counts)), counts))
        total = (0, 0.0, 0.0)
        for part in parts:
            total = merge_welford(total, part)
    return MomentEstimate.from_welford(*total)


def mc_second_moment(
    input_occ,
    output_occ,
    samples: int,
    seed: int,
    jobs: int = 1,
) -> MomentEstimate:
    """Monte-Carlo estimate of E_U[p_U(output)^2]; oracle for second_moment.

    Deterministic for fixed (seed, samples, jobs): worker w draws from the
    counter-based stream keyed seed XOR w and the accumulator merge is
    order-independent.
    """
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    input_occ = as_occupation(input_occ)
    if input_occ.m == 1:
        # single mode: the one outcome has probability exactly 1
        return MomentEstimate(1.0, 0.0, 0.0, samples)
    return _mc_probability_moments(input_occ, output_occ, samples, seed, jobs, power=2)


def mc_first_moment(
    input_occ,
    output_occ,
    samples: int,
    seed: int,
    jobs: int = 1,
) -> MomentEstimate:
    """Monte-Carlo estimate of E_U[p_U(output)]; oracle for first_moment."""
    if samples < 100:
        raise ValueError(f"need at least 100 samples, got {samples}")
    input_occ = as_occupation(input_occ)
    if input_occ.m == 1:
        return MomentEstimate(1.0, 0.0, 0.0, samples)
    return _mc_probability_moments(input_occ, output_occ, samples, seed, jobs, power=1)


def sector_operator_pair(m: int, n: int, input_occ, output_occ):
    """Fock projectors for an (input, output) pair on the (m, n) sector."""
    basis = enumerate_basis(m, n)
    rho = SectorOperator.fock_projector(basis, input_occ)
    obs = SectorOperator.fock_projector(basis, output_occ)
    return rho, obs
