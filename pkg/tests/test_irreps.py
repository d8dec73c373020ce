from fractions import Fraction

import numpy as np
import pytest

from bosonic_moments.combinatorics import (
    basis_size,
    binomial,
    collision_free_occupation,
    enumerate_basis,
    factorial,
    pochhammer,
)
from bosonic_moments.interferometer import haar_unitary, homomorphism_matrix
from bosonic_moments.irreps import (
    IrrepSpectrum,
    decompose,
    explicit_norm_sq,
    fock_lowered_purity,
    fock_lowered_purity_sum,
    irrep_dim,
    irrep_norm_closed,
    lowering_nullity,
    operator_spectrum,
    project,
    roundtrip_eigenvalue,
    step_eigenvalue,
)
from bosonic_moments.ladder import SectorOperator, lower, lower_power, raise_
from bosonic_moments.verify import random_diagonal, random_hermitian


def test_irrep_dim_values():
    assert irrep_dim(5, 0) == 1
    assert irrep_dim(3, 1) == 8
    for k in range(6):
        assert irrep_dim(2, k) == 2 * k + 1
    # n=2, m=3 blocks: 1 + 8 + 27 = 36 = |Phi|^2
    assert [irrep_dim(3, k) for k in range(3)] == [1, 8, 27]
    with pytest.raises(ValueError):
        irrep_dim(1, 2)


@pytest.mark.parametrize("m", range(2, 7))
@pytest.mark.parametrize("n", range(0, 7))
def test_dimension_completeness(m, n):
    assert sum(irrep_dim(m, k) for k in range(n + 1)) == basis_size(m, n) ** 2


def test_step_eigenvalue():
    assert step_eigenvalue(0, 0, 4) == 4
    assert step_eigenvalue(2, 2, 3) == 7  # m + 2k
    with pytest.raises(ValueError):
        step_eigenvalue(3, 2, 4)


def test_roundtrip_eigenvalue_forms():
    for m in range(2, 6):
        for n in range(0, 6):
            for j in range(n + 1):
                # r = j reduces to (n-j)! (m+2j)_(n-j)
                assert roundtrip_eigenvalue(j, j, n, m) == factorial(
                    n - j
                ) * pochhammer(m + 2 * j, n - j)
                for r in range(j + 1):
                    ratio = Fraction(
                        factorial(n - r) * factorial(m + n + r - 1),
                        factorial(j - r) * factorial(j + m + r - 1),
                    )
                    assert roundtrip_eigenvalue(r, j, n, m) == ratio
    assert roundtrip_eigenvalue(3, 3, 3, 4) == 1  # empty ladder
    with pytest.raises(ValueError):
        roundtrip_eigenvalue(2, 1, 3, 4)


def test_projection_resolution_exact(rng):
    for m, n in [(2, 2), (3, 2), (4, 3)]:
        basis = enumerate_basis(m, n)
        op = random_diagonal(basis, rng)
        comps = decompose(op)
        total = comps[0]
        for c in comps[1:]:
            total = total + c
        assert total.diag == op.diag
        for j in range(n + 1):
            for k in range(j + 1, n + 1):
                assert comps[j].hs_inner(comps[k]) == 0
        assert sum((c.hs_norm_sq() for c in comps), Fraction(0)) == op.hs_norm_sq()


def test_projection_k0_is_scaled_identity(rng):
    basis = enumerate_basis(3, 2)
    op = random_diagonal(basis, rng)
    k0 = project(op, 0)
    expected = SectorOperator.identity(basis).scaled(Fraction(op.trace(), basis.size))
    assert k0.diag == expected.diag
    assert irrep_norm_closed(op, 0) == Fraction(op.trace() ** 2, basis.size)


def test_top_block_in_lowering_kernel(rng):
    for m, n in [(2, 2), (3, 2), (3, 3)]:
        op = random_diagonal(enumerate_basis(m, n), rng)
        top = decompose(op)[-1]
        assert lower(top).max_abs() == 0


def test_dense_projection_matches_diagonal(rng):
    basis = enumerate_basis(3, 2)
    diag_op = random_diagonal(basis, rng)
    dense_op = SectorOperator.from_matrix(basis, diag_op.to_matrix())
    for k in range(3):
        a = project(diag_op, k).to_matrix()
        b = project(dense_op, k).matrix
        assert np.max(np.abs(a - b)) <= 1e-10


def test_block_eigenvalue_of_roundtrip(rng):
    m, n = 3, 2
    op = random_diagonal(enumerate_basis(m, n), rng)
    for k, comp in enumerate(decompose(op)):
        once = lower(raise_(comp))
        expected = comp.scaled(step_eigenvalue(k, n, m))
        assert once.diag == expected.diag


def test_closed_norm_requires_hermitian():
    basis = enumerate_basis(2, 1)
    op = SectorOperator.from_matrix(basis, np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert not op.hermitian
    with pytest.raises(ValueError, match="hermitian"):
        irrep_norm_closed(op, 0)
    # the explicit route still works and is Parseval-consistent
    total = sum(explicit_norm_sq(op, k) for k in range(2))
    assert total == pytest.approx(op.hs_norm_sq(), rel=1e-12)


def test_closed_norm_matches_projection_for_fock_projectors():
    for m in range(2, 5):
        for n in range(0, 5):
            basis = enumerate_basis(m, n)
            for occ in basis:
                proj = SectorOperator.fock_projector(basis, occ)
                comps = decompose(proj)
                for k in range(n + 1):
                    assert irrep_norm_closed(proj, k) == comps[k].hs_norm_sq()


def test_collision_free_norms_frozen_case():
    # worked by hand from the lowered purities g = (4, 2, 1) at (m, n) = (2, 2)
    basis = enumerate_basis(2, 2)
    cf = SectorOperator.fock_projector(basis, (1, 1))
    norms = [irrep_norm_closed(cf, k) for k in range(3)]
    assert norms == [Fraction(1, 3), Fraction(0), Fraction(2, 3)]
    bunched = SectorOperator.fock_projector(basis, (0, 2))
    assert [irrep_norm_closed(bunched, k) for k in range(3)] == [
        Fraction(1, 3),
        Fraction(1, 2),
        Fraction(1, 6),
    ]


def test_haar_invariance_of_norms(rng):
    m, n = 3, 2
    basis = enumerate_basis(m, n)
    u = haar_unitary(m, seed=4711)
    phi = homomorphism_matrix(u, n).matrix
    x = random_hermitian(basis, rng)
    conj = SectorOperator.from_matrix(basis, phi @ x.matrix @ phi.conj().T)
    for k in range(n + 1):
        assert irrep_norm_closed(conj, k) == pytest.approx(
            irrep_norm_closed(x, k), rel=1e-8, abs=1e-10
        )


def test_lowering_nullity():
    assert lowering_nullity(2, 2) == 5
    assert lowering_nullity(3, 1) == 8
    assert lowering_nullity(2, 0) == 1
    for m in range(2, 5):
        for n in range(0, 4):
            assert lowering_nullity(m, n) == irrep_dim(m, n)
    with pytest.raises(ValueError, match="guard"):
        lowering_nullity(6, 5)


def test_fock_lowered_purity_examples():
    # collision-free, n=2, l=1
    assert fock_lowered_purity((1, 1, 0), 1) == 2
    # bunched |2,0>, l=1
    assert fock_lowered_purity((2, 0), 1) == 4
    with pytest.raises(ValueError):
        fock_lowered_purity((1, 1), 5)


def test_fock_lowered_purity_ladder_oracle():
    for m in range(1, 5):
        for n in range(0, 5):
            basis = enumerate_basis(m, n)
            for occ in basis:
                proj = SectorOperator.fock_projector(basis, occ)
                for l in range(n + 1):
                    oracle = lower_power(proj, n - l).trace_square()
                    assert fock_lowered_purity(occ, l) == oracle


def test_fock_lowered_purity_specializations():
    for n in range(1, 6):
        cf = tuple([1] * n)
        bunched = tuple([n] + [0] * (n - 1)) if n > 1 else (n,)
        for l in range(n + 1):
            base = factorial(n - l) ** 2 * binomial(n, n - l)
            assert fock_lowered_purity(cf, l) == base
            assert fock_lowered_purity(bunched, l) == factorial(n - l) ** 2 * binomial(
                n, n - l
            ) ** 2


def test_fock_lowered_purity_sum():
    for m in range(1, 5):
        for n in range(0, 5):
            basis = enumerate_basis(m, n)
            for k in range(n + 1):
                brute = sum(fock_lowered_purity(occ, n - k) for occ in basis)
                assert fock_lowered_purity_sum(m, n, k) == brute
    # k = 0 collapses to |Phi| (every summand is 1)
    assert fock_lowered_purity_sum(3, 4, 0) == basis_size(3, 4)
    # k = n collapses to |Phi| (n!)^2
    assert fock_lowered_purity_sum(3, 3, 3) == basis_size(3, 3) * factorial(3) ** 2


def test_operator_spectrum():
    basis = enumerate_basis(3, 2)
    cf = SectorOperator.fock_projector(basis, collision_free_occupation(3, 2))
    spec = operator_spectrum(cf)
    assert [dim for _, dim, _ in spec.entries] == [1, 8, 27]
    assert spec.total_norm_sq() == 1
    assert [norm for _, _, norm in spec.entries] == [
        Fraction(1, 6),
        Fraction(2, 15),
        Fraction(7, 10),
    ]
    with pytest.raises(ValueError, match="incomplete"):
        IrrepSpectrum(3, 2, ((0, 1, Fraction(1)),))


def test_project_guards():
    basis = enumerate_basis(2, 2)
    op = SectorOperator.identity(basis)
    with pytest.raises(ValueError):
        project(op, 3)
    degenerate = SectorOperator.identity(enumerate_basis(1, 2))
    with pytest.raises(ValueError):
        project(degenerate, 0)
