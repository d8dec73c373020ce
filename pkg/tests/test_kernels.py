import numpy as np
import pytest

from bosonic_moments import _kernels
from bosonic_moments._kernels import _permanents_py
from bosonic_moments.verify import naive_permanent


def random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_selected_backend_exposed():
    assert _kernels.BACKEND in ("cython", "python")


@pytest.mark.parametrize("k", range(0, 7))
def test_python_backend_matches_naive(rng, k):
    a = random_complex(rng, (k, k))
    expected = naive_permanent(a) if k else 1.0
    assert _permanents_py.permanent(a) == pytest.approx(expected, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("k", range(0, 9))
def test_backends_agree(rng, k):
    stack = random_complex(rng, (5, k, k))
    via_py = _permanents_py.permanent_batch(stack)
    via_selected = _kernels.permanent_batch(stack)
    np.testing.assert_allclose(via_selected, via_py, rtol=1e-12, atol=1e-12)
    for mat in stack:
        assert _kernels.permanent(mat) == pytest.approx(
            _permanents_py.permanent(mat), rel=1e-12, abs=1e-12
        )


def test_batch_shape_validation():
    with pytest.raises(ValueError):
        _permanents_py.permanent_batch(np.zeros((3, 2, 4)))
    with pytest.raises(ValueError):
        _permanents_py.permanent(np.zeros((2, 3)))


def test_empty_and_identity():
    assert _kernels.permanent_batch(np.zeros((4, 0, 0))).tolist() == [1, 1, 1, 1]
    assert _kernels.permanent(np.eye(5)) == pytest.approx(1.0)
    assert _kernels.permanent(np.ones((4, 4))) == pytest.approx(24.0)
