import math

import numpy as np
import pytest

from bosonic_moments.combinatorics import collision_free_occupation, enumerate_basis
from bosonic_moments.interferometer import (
    Interferometer,
    amplitude,
    amplitude_batch,
    haar_stack,
    haar_unitary,
    homomorphism_matrix,
    output_probability,
    permanent,
    permanent_glynn,
    rng_stream,
)
from bosonic_moments.verify import naive_permanent


def test_interferometer_rejects_nonunitary():
    with pytest.raises(ValueError, match="unitary"):
        Interferometer(np.array([[1.0, 0.1], [0.0, 1.0]]))


def test_haar_unitary_is_unitary_and_deterministic():
    for m in (1, 2, 5):
        u = haar_unitary(m, seed=3)
        assert np.max(np.abs(u.matrix.conj().T @ u.matrix - np.eye(m))) <= 1e-12
    assert np.array_equal(haar_unitary(4, 9).matrix, haar_unitary(4, 9).matrix)
    assert not np.array_equal(haar_unitary(4, 9).matrix, haar_unitary(4, 10).matrix)


def test_haar_unitary_m1_is_phase():
    u = haar_unitary(1, seed=5)
    assert abs(abs(u.matrix[0, 0]) - 1.0) <= 1e-14


def test_haar_first_moment():
    # E|U_00|^2 = 1/m for Haar-distributed unitaries
    m, samples = 3, 20000
    mats = haar_stack(m, samples, rng_stream(123))
    values = np.abs(mats[:, 0, 0]) ** 2
    se = values.std(ddof=1) / math.sqrt(samples)
    assert abs(values.mean() - 1.0 / m) <= 3.0 * se


@pytest.mark.parametrize("k", range(0, 6))
def test_permanent_against_naive(rng, k):
    for _ in range(3):
        a = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        expected = naive_permanent(a) if k else 1.0
        assert permanent(a) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_permanent_known_values():
    assert permanent(np.eye(3)) == pytest.approx(1.0)
    assert permanent(np.ones((5, 5))) == pytest.approx(math.factorial(5))
    with pytest.raises(ValueError):
        permanent(np.ones((2, 3)))


@pytest.mark.parametrize("k", [2, 5, 8, 10])
def test_ryser_vs_glynn(rng, k):
    a = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
    assert permanent(a) == pytest.approx(permanent_glynn(a), rel=1e-9)


def test_amplitude_identity_cases():
    eye = Interferometer(np.eye(3))
    basis = enumerate_basis(3, 3)
    for s in basis:
        for t in basis:
            amp = amplitude(eye, s, t)
            assert amp == pytest.approx(1.0 if s == t else 0.0, abs=1e-12)


def test_amplitude_single_photon_pins_convention():
    u = haar_unitary(3, seed=21)
    for i in range(3):
        for j in range(3):
            s = tuple(1 if a == i else 0 for a in range(3))
            t = tuple(1 if a == j else 0 for a in range(3))
            assert amplitude(u, s, t) == pytest.approx(u.matrix[j, i], abs=1e-14)


def test_amplitude_rejects_mismatched_totals():
    u = haar_unitary(2, seed=1)
    with pytest.raises(ValueError):
        amplitude(u, (1, 0), (1, 1))


def test_amplitude_batch_matches_scalar(rng):
    mats = haar_stack(3, 7, rng_stream(77))
    s, t = (1, 1, 0), (0, 2, 0)
    batch = amplitude_batch(mats, s, t)
    for i in range(7):
        u = Interferometer(mats[i])
        assert batch[i] == pytest.approx(amplitude(u, s, t), abs=1e-13)


def test_homomorphism_vacuum_and_single_photon():
    u = haar_unitary(3, seed=2)
    assert homomorphism_matrix(u, 0).matrix.tolist() == [[1.0 + 0.0j]]
    phi = homomorphism_matrix(u, 1)
    # single-particle sector equals the matrix up to the basis-order permutation
    basis = phi.basis
    perm = [basis.index(tuple(1 if a == i else 0 for a in range(3))) for i in range(3)]
    reordered = phi.matrix[np.ix_(perm, perm)]
    assert np.max(np.abs(reordered - u.matrix)) <= 1e-13


@pytest.mark.parametrize("m,n", [(2, 2), (3, 2), (4, 3)])
def test_homomorphism_unitarity_and_multiplicativity(m, n):
    u = haar_unitary(m, seed=m * 10 + n)
    v = haar_unitary(m, seed=m * 11 + n)
    phi_u = homomorphism_matrix(u, n).matrix
    phi_v = homomorphism_matrix(v, n).matrix
    d = phi_u.shape[0]
    assert np.max(np.abs(phi_u.conj().T @ phi_u - np.eye(d))) <= 1e-9
    uv = Interferometer(u.matrix @ v.matrix)
    assert np.max(np.abs(homomorphism_matrix(uv, n).matrix - phi_u @ phi_v)) <= 1e-8


def test_output_probability_identity_and_completeness():
    eye = Interferometer(np.eye(4))
    assert output_probability(eye, (1, 1, 0, 0), (1, 1, 0, 0)) == pytest.approx(1.0)
    assert output_probability(eye, (1, 1, 0, 0), (0, 1, 1, 0)) == pytest.approx(0.0)

    for m, n in [(3, 2), (4, 3), (5, 4)]:
        u = haar_unitary(m, seed=m + 2 * n)
        inp = collision_free_occupation(m, n)
        total = sum(output_probability(u, inp, occ) for occ in enumerate_basis(m, n))
        assert total == pytest.approx(1.0, abs=1e-9)


def test_single_photon_marginal():
    u = haar_unitary(4, seed=33)
    inp = (1, 0, 0, 0)
    for j in range(4):
        out = tuple(1 if a == j else 0 for a in range(4))
        assert output_probability(u, inp, out) == pytest.approx(
            abs(u.matrix[j, 0]) ** 2, abs=1e-14
        )
