"""Acceptance suite: one test per criterion, at the stated tolerances.

Each test prints a `criterion N: PASS` line with its runtime so the suite
doubles as a checklist.  Stochastic criteria allow one seeded retry, as
documented.  Criterion 8's literal all-c statement is kept as a strict
expected failure: the exact values (confirmed independently by the closed
form, the alternating-binomial form, and quadrature) violate it for
c in {3, 5, 10}; the c = 2 statement and the dilute part hold and are
asserted for real.  See the test docstrings for the measured numbers.
"""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from bosonic_moments import verify
from bosonic_moments.anticoncentration import (
    mc_p2,
    p2_beta,
    p2_closed,
    p2_integral,
    pz_bound,
)
from bosonic_moments.combinatorics import (
    basis_size,
    collision_free_occupation,
    collision_free_ratio,
    enumerate_basis,
)
from bosonic_moments.interferometer import amplitude_batch, haar_stack, rng_stream
from bosonic_moments.irreps import (
    decompose,
    fock_lowered_purity,
    fock_lowered_purity_sum,
    irrep_dim,
    irrep_norm_closed,
    lowering_nullity,
)
from bosonic_moments.ladder import SectorOperator, lower_power
from bosonic_moments.moments import mc_second_moment, second_moment, sector_operator_pair

SEED = 20_240_817


class _Timer:
    def __init__(self, criterion: str, budget: float):
        self.criterion = criterion
        self.budget = budget

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.start
        status = "PASS" if exc_type is None else "FAIL"
        print(f"criterion {self.criterion}: {status} ({elapsed:.2f}s, budget {self.budget:.0f}s)")
        if exc_type is None:
            assert elapsed < self.budget, (
                f"criterion {self.criterion} exceeded its runtime budget: "
                f"{elapsed:.1f}s >= {self.budget:.0f}s"
            )


def test_criterion_01_exact_triple_agreement():
    with _Timer("1 (triple agreement m<=10, n<=10)", 30.0):
        for m in range(2, 11):
            for n in range(0, 11):
                closed = p2_closed(m, n)
                assert closed == p2_beta(m, n), (m, n)
                quad = p2_integral(m, n)
                assert abs(float(closed) - quad) <= 1e-9 * float(closed), (m, n)


def test_criterion_02_single_photon_law():
    with _Timer("2 (single-photon law m<=50)", 1.0):
        for m in range(2, 51):
            assert p2_closed(m, 1) == Fraction(2 * m, m + 1), m


def test_criterion_03_pipeline_equality():
    with _Timer("3 (end-to-end pipeline equality)", 60.0):
        for m, n in [(2, 2), (3, 2), (3, 3), (4, 2)]:
            basis = enumerate_basis(m, n)
            cf = collision_free_occupation(m, n)
            rho = SectorOperator.fock_projector(basis, cf)
            mean = Fraction(0)
            for occ in basis:
                obs = SectorOperator.fock_projector(basis, occ)
                mean += second_moment(rho, obs)
            mean /= basis.size
            assert p2_closed(m, n) == basis.size**2 * mean, (m, n)


def _criterion_04_once(seed: int) -> list[str]:
    problems = []
    est = mc_p2(3, 2, samples=100_000, seed=seed)
    exact = float(p2_closed(3, 2))
    if abs(est.mean - exact) > 3.0 * est.std_error:
        problems.append(f"mc_p2 pull {(est.mean - exact) / est.std_error:.2f}")
    basis = list(enumerate_basis(3, 2))
    rng = np.random.default_rng(seed)
    for trial in range(5):
        inp = basis[int(rng.integers(0, len(basis)))]
        out = basis[int(rng.integers(0, len(basis)))]
        rho, obs = sector_operator_pair(3, 2, inp, out)
        truth = float(second_moment(rho, obs))
        est = mc_second_moment(inp, out, samples=100_000, seed=seed + trial + 1)
        if abs(est.mean - truth) > 3.0 * est.std_error:
            problems.append(
                f"mc_second_moment {inp.counts}->{out.counts} pull "
                f"{(est.mean - truth) / est.std_error:.2f}"
            )
    return problems


def test_criterion_04_monte_carlo_concordance():
    with _Timer("4 (Monte-Carlo concordance, 1e5 samples)", 300.0):
        problems = _criterion_04_once(SEED)
        if problems:  # one seeded retry permitted
            problems = _criterion_04_once(SEED + 7919)
        assert not problems, problems


def test_criterion_05_sl2_identities():
    with _Timer("5 (sl2 identities m<=4, n<=3)", 30.0):
        res = verify.SuiteResult("sl2")
        for m in range(2, 5):
            for n in range(0, 4):
                verify._sl2_identities(m, n, res)
        assert res.failures == [], res.failures


def test_criterion_06_decomposition_correctness():
    with _Timer("6 (decomposition m<=4, n<=4)", 120.0):
        rng = np.random.default_rng(SEED)
        for m in range(2, 5):
            for n in range(0, 5):
                assert sum(irrep_dim(m, k) for k in range(n + 1)) == basis_size(m, n) ** 2
                assert lowering_nullity(m, n) == irrep_dim(m, n), (m, n)
        # 20 random hermitian operators: 10 exact rational diagonals, 10 dense
        for trial in range(20):
            m = 2 + trial % 3
            n = 1 + trial % 4
            basis = enumerate_basis(m, n)
            if trial < 10:
                op = verify.random_diagonal(basis, rng)
                comps = decompose(op)
                total = comps[0]
                for c in comps[1:]:
                    total = total + c
                assert total.diag == op.diag
                assert sum((c.hs_norm_sq() for c in comps), Fraction(0)) == op.hs_norm_sq()
                for j in range(n + 1):
                    for k in range(j + 1, n + 1):
                        assert comps[j].hs_inner(comps[k]) == 0
            else:
                op = verify.random_hermitian(basis, rng)
                comps = decompose(op)
                total = comps[0]
                for c in comps[1:]:
                    total = total + c
                scale = max(1.0, op.max_abs())
                assert (total - op).max_abs() <= 1e-10 * scale
                norm = op.hs_norm_sq()
                assert abs(sum(float(c.hs_norm_sq()) for c in comps) - norm) <= 1e-9 * max(
                    1.0, norm
                )
                for j in range(n + 1):
                    for k in range(j + 1, n + 1):
                        assert abs(comps[j].hs_inner(comps[k])) <= 1e-10 * max(1.0, norm)
        # closed-form norms match explicit projections on every Fock projector
        for m in range(2, 5):
            for n in range(0, 5):
                basis = enumerate_basis(m, n)
                for occ in basis:
                    proj = SectorOperator.fock_projector(basis, occ)
                    comps = decompose(proj)
                    for k in range(n + 1):
                        assert irrep_norm_closed(proj, k) == comps[k].hs_norm_sq()


def test_criterion_07_g_formulas():
    with _Timer("7 (lowered purities m<=4, n<=4)", 60.0):
        for m in range(1, 5):
            for n in range(0, 5):
                basis = enumerate_basis(m, n)
                sums = [Fraction(0)] * (n + 1)
                for occ in basis:
                    proj = SectorOperator.fock_projector(basis, occ)
                    for l in range(n + 1):
                        g = fock_lowered_purity(occ, l)
                        assert g == lower_power(proj, n - l).trace_square(), (
                            occ.counts,
                            l,
                        )
                        sums[l] += g
                for k in range(n + 1):
                    assert fock_lowered_purity_sum(m, n, k) == sums[n - k], (m, n, k)


def test_criterion_08_asymptotic_trends():
    """The parts of criterion 8 that the exact values support.

    Linear family c = 2: within 0.5 of c+1 at n = 20 and the deviation
    strictly shrinks through n = 200.  Dilute family m = n^3: P2/n inside
    [0.8, 1.2] and trending to 1.  All through the integral path.
    """
    with _Timer("8 (asymptotic trends: c=2 band/monotone, dilute band)", 120.0):
        diffs = [abs(p2_integral(2 * n, n) - 3.0) for n in (20, 50, 100, 200)]
        assert diffs[0] <= 0.5, diffs
        assert all(diffs[i] > diffs[i + 1] for i in range(len(diffs) - 1)), diffs
        ratios = [p2_integral(n**3, n) / n for n in (10, 20, 40)]
        assert all(0.8 <= r <= 1.2 for r in ratios), ratios
        gaps = [abs(r - 1.0) for r in ratios]
        assert all(gaps[i] > gaps[i + 1] for i in range(len(gaps) - 1)), ratios
        # every linear family does satisfy the o(1) law at larger n
        for c in (3, 5, 10):
            assert abs(p2_integral(c * 400, 400) - (c + 1)) < 0.5, c


@pytest.mark.xfail(
    strict=True,
    reason=(
        "spec defect: the criterion's 0.5 band at n=20 fails for c in {3, 5} "
        "(|P2-(c+1)| = 0.786 and 1.222) and monotonicity fails for c = 10 "
        "(P2 = 11.275, 13.825, 12.760, 11.681 at n = 20, 50, 100, 200); "
        "values confirmed exactly by both rational routes. Only the c = 2 "
        "family satisfies the full statement; see the decisions ledger."
    ),
)
def test_criterion_08_literal_all_families():
    """Criterion 8 exactly as written, for every c in {2, 3, 5, 10}."""
    for c in (2, 3, 5, 10):
        diffs = [abs(p2_integral(c * n, n) - (c + 1)) for n in (20, 50, 100, 200)]
        assert diffs[0] <= 0.5, (c, diffs)
        assert all(diffs[i] > diffs[i + 1] for i in range(len(diffs) - 1)), (c, diffs)


def _criterion_09_once(seed: int) -> bool:
    m, n, alpha = 3, 2, 0.5
    basis = enumerate_basis(m, n)
    cf = collision_free_occupation(m, n)
    draws = 10_000
    mats = haar_stack(m, draws, rng_stream(seed))
    threshold = alpha / basis.size
    hits = np.zeros(draws)
    for occ in basis:
        probs = np.abs(amplitude_batch(mats, cf, occ)) ** 2
        hits += (probs >= threshold).astype(float)
    fractions = hits / basis.size
    freq = float(fractions.mean())
    se = float(fractions.std(ddof=1)) / math.sqrt(draws)
    return freq >= pz_bound(m, n, alpha) - 3.0 * se


def test_criterion_09_paley_zygmund_consistency():
    with _Timer("9 (Paley-Zygmund empirical consistency)", 180.0):
        ok = _criterion_09_once(SEED)
        if not ok:
            ok = _criterion_09_once(SEED + 7919)
        assert ok


def test_criterion_10_collision_free_ratio_laws():
    with _Timer("10 (collision-free ratio laws)", 1.0):
        for m in range(1, 13):
            for n in range(0, m + 1):
                prod = Fraction(1)
                for j in range(n):
                    prod *= Fraction(m - j, m + j)
                assert collision_free_ratio(m, n) == prod, (m, n)
        ratio = float(collision_free_ratio(100 * 100, 100))
        assert abs(ratio - math.exp(-1.0)) <= 0.02 * math.exp(-1.0), ratio
