import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from extcliff._kernels import available_backends
from extcliff.errors import DimensionError
from extcliff.gf2 import BitMatrix, kernel_basis, matvec, rank
from extcliff.pauli import BitString

BACKENDS = available_backends()


def dense_rank(dense: np.ndarray) -> int:
    """Independent rank by plain row reduction on a uint8 array."""
    a = dense.copy() % 2
    r = 0
    for c in range(a.shape[1]):
        piv = next((i for i in range(r, a.shape[0]) if a[i, c]), None)
        if piv is None:
            continue
        a[[r, piv]] = a[[piv, r]]
        for i in range(a.shape[0]):
            if i != r and a[i, c]:
                a[i] ^= a[r]
        r += 1
    return r


@pytest.mark.parametrize("backend", BACKENDS)
def test_zero_matrix_kernel_is_everything(backend):
    basis = kernel_basis(BitMatrix.zeros(4, 3), backend)
    assert len(basis) == 3
    assert rank(BitMatrix.from_rows(basis), backend) == 3


@pytest.mark.parametrize("backend", BACKENDS)
def test_identity_kernel_is_empty(backend):
    assert kernel_basis(BitMatrix.identity(3), backend) == []


@pytest.mark.parametrize("backend", BACKENDS)
def test_random_kernel(backend, rng):
    A = BitMatrix.random(20, 12, rng)
    basis = kernel_basis(A, backend)
    for v in basis:
        assert matvec(A, v).weight() == 0
    assert len(basis) + dense_rank(A.to_dense()) == 12
    if basis:
        assert rank(BitMatrix.from_rows(basis), backend) == len(basis)


@pytest.mark.parametrize("backend", BACKENDS)
def test_rank_nullity_many_shapes(backend, rng):
    shapes = [(int(r), int(c)) for r, c in rng.integers(1, 513, size=(1000, 2))]
    for k, (r, c) in enumerate(shapes):
        if backend == "python" and k % 10:
            continue  # the pure fallback runs a tenth of the sweep
        density = float(rng.choice([0.02, 0.5]))
        A = BitMatrix.random(r, c, rng, density)
        basis = kernel_basis(A, backend)
        assert rank(A, backend) + len(basis) == c


def test_kernel_is_deterministic(rng):
    A = BitMatrix.random(30, 50, rng)
    first = kernel_basis(A)
    assert all(kernel_basis(A) == first for _ in range(3))
    for b in BACKENDS:
        assert kernel_basis(A, b) == first


def test_kernel_matches_dense_rank_on_structured_matrices():
    dense = np.array([[1, 1, 0, 0], [0, 0, 1, 1], [1, 1, 1, 1]], dtype=np.uint8)
    A = BitMatrix.from_dense(dense)
    assert [str(v) for v in kernel_basis(A)] == ["1100", "0011"]


def test_matvec_examples():
    t = BitString.from_str("10110")
    assert matvec(BitMatrix.identity(5), t) == t
    assert matvec(BitMatrix.zeros(3, 5), t).weight() == 0
    cols = [BitString.from_str(s) for s in ("101", "011", "110")]
    A = BitMatrix.from_columns(cols, 3)
    for j, col in enumerate(cols):
        assert matvec(A, BitString.unit(3, j)) == col
    with pytest.raises(DimensionError):
        matvec(A, BitString.zeros(4))


def test_tail_bits_must_be_zero():
    data = np.array([[1 << 5]], dtype=np.uint64)
    with pytest.raises(DimensionError):
        BitMatrix(1, 3, data)


@given(st.integers(1, 70), st.integers(1, 70), st.integers(0, 2**32))
def test_dense_round_trip_and_transpose(r, c, seed):
    rng = np.random.default_rng(seed)
    dense = (rng.random((r, c)) < 0.5).astype(np.uint8)
    A = BitMatrix.from_dense(dense)
    np.testing.assert_array_equal(A.to_dense(), dense)
    np.testing.assert_array_equal(A.transpose().to_dense(), dense.T)
    i, j = int(rng.integers(r)), int(rng.integers(c))
    assert A[i, j] == dense[i, j]
