import numpy as np
import pytest

from ssrs import linalg
from ssrs.codes import (
    LinearCode,
    dual,
    puncture,
    random_code,
    shorten,
    square,
    star_product,
)
from ssrs.field import make_field

FIELDS = [(2, 2), (7, 1), (13, 3)]


@pytest.mark.parametrize("q,m", FIELDS)
def test_dual_orthogonality(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(0)
    for _ in range(15):
        C = random_code(F, 10, 4, rng)
        D = dual(C)
        assert C.dim + D.dim == 10
        assert not linalg.matmul(F, C.gen, D.gen.T).any()
        assert dual(D) == C


def _shorten_oracle(C, positions):
    # definition route: codewords vanishing on `positions`, then restricted
    F = C.field
    pos = sorted(positions)
    A = C.gen[:, pos]  # combos a with a.A = 0 give the vanishing words
    K = linalg.right_kernel(F, A.T)
    words = linalg.matmul(F, K, C.gen)
    keep = [j for j in range(C.n) if j not in set(pos)]
    return LinearCode(F, words[:, keep])


@pytest.mark.parametrize("q,m", FIELDS)
def test_shorten_matches_definition(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(1)
    for _ in range(15):
        C = random_code(F, 12, 5, rng)
        pos = sorted(rng.permutation(12)[:3].tolist())
        assert shorten(C, pos) == _shorten_oracle(C, pos)


@pytest.mark.parametrize("q,m", FIELDS)
def test_puncture_words(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(2)
    C = random_code(F, 12, 5, rng)
    pos = [1, 4, 9]
    P = puncture(C, pos)
    keep = [j for j in range(12) if j not in pos]
    for _ in range(20):
        msg = F.random_elements(rng, (5,))
        w = linalg.matvec(F, C.gen.T, msg)
        assert P.contains(w[keep])


@pytest.mark.parametrize("q,m", FIELDS)
def test_shorten_puncture_duality(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(3)
    for _ in range(15):
        C = random_code(F, 11, 5, rng)
        pos = sorted(rng.permutation(11)[:3].tolist())
        assert shorten(C, pos) == dual(puncture(dual(C), pos))
        assert puncture(C, pos) == dual(shorten(dual(C), pos))


def test_star_product_span():
    F = make_field(7, 1)
    rng = np.random.default_rng(4)
    A = random_code(F, 10, 3, rng)
    B = random_code(F, 10, 3, rng)
    S = star_product(A, B)
    for i in range(A.dim):
        for j in range(B.dim):
            w = F.mul(A.gen[i], B.gen[j])
            assert S.contains(w)
    # sampled mode agrees with the exact span
    assert star_product(A, B, rng=np.random.default_rng(9)) == S


def test_square_dimension_random_codes():
    # random [n, k] codes typically have square dimension k(k+1)/2
    F = make_field(7, 1)
    rng = np.random.default_rng(5)
    hits = 0
    for _ in range(50):
        C = random_code(F, 28, 6, rng)
        hits += square(C).dim == 21
    assert hits >= 47
