import numpy as np
import pytest
from sympy import GF, Matrix
from sympy.polys.matrices import DomainMatrix

from dualalpha.complex import FilteredComplex, euler_characteristic
from dualalpha.homology import (
    NonPrimeModulusError,
    SparseMatrixFp,
    betti,
    euler_from_betti,
    is_prime,
    rank_fp,
    stirling_reference,
)

HOLLOW = FilteredComplex.closure([(0, 1), (0, 2), (1, 2)])
FILLED = FilteredComplex.closure([(0, 1, 2)])
OCTAHEDRON = FilteredComplex.closure([(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)])


def reference_rank(dense: np.ndarray, p: int) -> int:
    if dense.size == 0:
        return 0
    return DomainMatrix.from_Matrix(Matrix(dense.tolist())).convert_to(GF(p)).rank()


@pytest.mark.parametrize(
    "dense, p, expected",
    [
        ([[1, 0], [0, 1]], 5, 2),
        ([[1, 1], [1, 1]], 2, 1),
        ([[2]], 2, 0),
        ([[0, 0], [0, 0]], 3, 0),
        ([[1, 2], [2, 4]], 7, 1),
        ([[1, 2], [3, 4]], 2, 1),  # det = -2
    ],
)
def test_rank_small(dense, p, expected):
    assert rank_fp(SparseMatrixFp.from_dense(dense, p)) == expected


@pytest.mark.parametrize("p", [2, 3, 5, 7])
@pytest.mark.parametrize("seed", range(4))
def test_rank_matches_dense_reference(p, seed):
    rng = np.random.default_rng(seed)
    rows, cols = rng.integers(5, 80, size=2)
    density = rng.uniform(0.02, 0.2)
    dense = np.where(rng.random((rows, cols)) < density, rng.integers(1, p, size=(rows, cols)), 0)
    if seed % 2:
        # low-rank: duplicate some rows as combinations of others
        dense[: rows // 3] = (dense[rows // 3: 2 * (rows // 3)] * 2) % p
    assert rank_fp(SparseMatrixFp.from_dense(dense, p)) == reference_rank(dense, p)


def test_rank_of_large_sparse_matrix():
    rng = np.random.default_rng(42)
    dense = np.where(rng.random((200, 200)) < 0.02, 1, 0)
    assert rank_fp(SparseMatrixFp.from_dense(dense, 2)) == reference_rank(dense, 2)


def test_rank_empty():
    assert rank_fp(SparseMatrixFp.from_triples((0, 0), [], 3)) == 0
    assert rank_fp(SparseMatrixFp.from_triples((4, 3), [], 3)) == 0


def test_from_triples_reduces_and_deduplicates():
    m = SparseMatrixFp.from_triples((2, 2), [(0, 0, 1), (0, 0, 2), (1, 1, 5), (1, 0, -1)], 3)
    assert m.triples() == [(1, 0, 2), (1, 1, 2)]
    with pytest.raises(IndexError):
        SparseMatrixFp.from_triples((2, 2), [(2, 0, 1)], 3)


@pytest.mark.parametrize(
    "cx, K, expected",
    [
        (HOLLOW, 1, (1, 1)),
        (FILLED, 1, (1, 0)),
        (OCTAHEDRON, 2, (1, 0, 1)),
        (FilteredComplex({(0,): 0.0, (1,): 0.0}), 0, (2,)),
    ],
)
def test_betti(cx, K, expected):
    assert betti(cx, 2, K) == expected


@pytest.mark.parametrize("p", [2, 3, 5])
def test_euler_matches_alternating_betti(p):
    cx = FilteredComplex.closure([(0, 1, 2), (1, 2, 3), (3, 4), (4, 5), (5, 3), (6,)])
    b = betti(cx, p, cx.dimension)
    assert euler_from_betti(b) == euler_characteristic(cx)
    assert b == (2, 1, 0)


def test_betti_independent_of_insertion_order():
    tris = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    forward = FilteredComplex.closure(tris)
    backward = FilteredComplex.closure(list(reversed(tris)))
    assert betti(forward, 3, 2) == betti(backward, 3, 2)


def test_betti_rejects_composite():
    with pytest.raises(NonPrimeModulusError):
        betti(HOLLOW, 4, 1)


def test_is_prime():
    assert [n for n in range(12) if is_prime(n)] == [2, 3, 5, 7, 11]
    assert not is_prime(2.0)


@pytest.mark.parametrize("n, expected", [(1, (1,)), (2, (1, 1)), (3, (1, 3, 2)), (4, (1, 6, 11, 6))])
def test_stirling_reference(n, expected):
    assert stirling_reference(n) == expected
