import numpy as np
import pytest

from ssrs import linalg
from ssrs.field import make_field

FIELDS = [(2, 2), (7, 1), (7, 3), (13, 3)]


@pytest.mark.parametrize("q,m", FIELDS)
def test_rref_shape_and_idempotence(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(0)
    for _ in range(20):
        M = F.random_elements(rng, (6, 9))
        R, piv = linalg.rref(F, M)
        R2, piv2 = linalg.rref(F, R)
        assert np.array_equal(R[: len(piv)], R2[: len(piv2)])
        assert piv == piv2
        for r, c in enumerate(piv):
            col = R[: len(piv), c]
            assert col[r] == 1 and np.count_nonzero(col) == 1


@pytest.mark.parametrize("q,m", FIELDS)
def test_rank_known_construction(q, m):
    # rank oracle: r independent rows plus random combinations of them
    F = make_field(q, m)
    rng = np.random.default_rng(1)
    for _ in range(20):
        r = int(rng.integers(1, 5))
        A = linalg.random_full_rank(F, r, 8, rng)
        C = F.random_elements(rng, (5, r))
        M = np.vstack([A, linalg.matmul(F, C, A)])
        assert linalg.rank(F, M) == r
        B = linalg.random_invertible(F, 8, rng)
        assert linalg.rank(F, linalg.matmul(F, M, B)) == r


@pytest.mark.parametrize("q,m", FIELDS)
def test_right_kernel(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(2)
    for _ in range(20):
        M = F.random_elements(rng, (4, 7))
        K = linalg.right_kernel(F, M)
        assert K.shape[0] == 7 - linalg.rank(F, M)
        prod = linalg.matmul(F, M, K.T)
        assert not prod.any()
        assert linalg.rank(F, K) == K.shape[0]


@pytest.mark.parametrize("q,m", FIELDS)
def test_inv_and_solve(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(3)
    for _ in range(20):
        A = linalg.random_invertible(F, 5, rng)
        Ai = linalg.inv(F, A)
        assert np.array_equal(linalg.matmul(F, A, Ai), linalg.identity(5))
        x = F.random_elements(rng, (5,))
        b = linalg.matvec(F, A, x)
        assert np.array_equal(linalg.solve_right(F, A, b), x)
    # inconsistent system
    A = np.zeros((2, 2), dtype=np.int64)
    assert linalg.solve_right(F, A, np.array([1, 0], dtype=np.int64)) is None


def test_matmul_matches_python_loop():
    F = make_field(7, 3)
    rng = np.random.default_rng(4)
    A = F.random_elements(rng, (3, 4))
    B = F.random_elements(rng, (4, 2))
    C = linalg.matmul(F, A, B)
    for i in range(3):
        for j in range(2):
            acc = np.int64(0)
            for l in range(4):
                acc = F.add(acc, F.mul(A[i, l], B[l, j]))
            assert C[i, j] == acc


@pytest.mark.parametrize("q,m", FIELDS)
def test_code_equal_under_row_operations(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(5)
    for _ in range(10):
        G = linalg.random_full_rank(F, 3, 8, rng)
        S = linalg.random_invertible(F, 3, rng)
        assert linalg.code_equal(F, G, linalg.matmul(F, S, G))
        other = linalg.random_full_rank(F, 3, 8, rng)
        if linalg.code_equal(F, G, other):  # astronomically unlikely
            continue
        assert not linalg.code_equal(F, G, other)


def test_block_diag():
    F = make_field(7, 1)
    rng = np.random.default_rng(6)
    blocks = [F.random_elements(rng, (2, 2)) for _ in range(3)]
    D = linalg.block_diag(blocks)
    assert D.shape == (6, 6)
    for i, b in enumerate(blocks):
        assert np.array_equal(D[2 * i : 2 * i + 2, 2 * i : 2 * i + 2], b)
    assert not D[0:2, 2:].any() and not D[2:4, 4:].any()
