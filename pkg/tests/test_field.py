import numpy as np
import pytest

from ssrs.field import (
    Field,
    basis_rank,
    complete_basis,
    dual_basis,
    is_basis,
    make_field,
    random_subspace,
    square_subspace,
    subspace_contains,
)

FIELDS = [(2, 2), (7, 3), (13, 3), (3, 4)]


def test_gf4_tables():
    # classic GF(4) = {0, 1, w, w+1} with w^2 = w + 1; encoding c0 + 2*c1
    F = make_field(2, 2)
    add = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    mul = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]]
    for a in range(4):
        for b in range(4):
            assert F.add(np.int64(a), np.int64(b)) == add[a][b]
            assert F.mul(np.int64(a), np.int64(b)) == mul[a][b]


def test_smallest_modulus_is_deterministic():
    # low-degree-first comparison: GF(4) uses X^2+X+1, GF(343) uses X^3+X^2+1
    assert list(make_field(2, 2).modulus) == [1, 1, 1]
    assert list(make_field(7, 3).modulus) == [1, 0, 1, 1]
    assert make_field(7, 3) is make_field(7, 3)  # cached context


@pytest.mark.parametrize("q,m", FIELDS)
def test_field_axioms(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(7)
    a = F.random_elements(rng, (200,))
    b = F.random_elements(rng, (200,))
    c = F.random_elements(rng, (200,))
    assert np.array_equal(F.add(a, b), F.add(b, a))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.array_equal(F.mul(a, F.mul(b, c)), F.mul(F.mul(a, b), c))
    assert np.array_equal(
        F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c))
    )
    assert np.array_equal(F.add(a, F.neg(a)), np.zeros(200, dtype=np.int64))
    nz = F.random_nonzero(rng, (200,))
    assert np.array_equal(F.mul(nz, F.inv(nz)), np.ones(200, dtype=np.int64))
    assert np.array_equal(F.sub(a, b), F.add(a, F.neg(b)))


@pytest.mark.parametrize("q,m", FIELDS)
def test_pow_and_generator(q, m):
    F = make_field(q, m)
    g = np.int64(F.generator)
    seen = {1}
    acc = np.int64(1)
    for _ in range(F.order - 2):
        acc = F.mul(acc, g)
        seen.add(int(acc))
    assert len(seen) == F.order - 1  # generator has full multiplicative order
    rng = np.random.default_rng(3)
    a = F.random_nonzero(rng, (50,))
    assert np.array_equal(F.pow(a, F.order - 1), np.ones(50, dtype=np.int64))


@pytest.mark.parametrize("q,m", FIELDS)
def test_frobenius_and_trace(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(11)
    a = F.random_elements(rng, (100,))
    b = F.random_elements(rng, (100,))
    # Frobenius is additive and fixes GF(q)
    assert np.array_equal(
        F.frobenius(F.add(a, b)), F.add(F.frobenius(a), F.frobenius(b))
    )
    base = np.arange(q, dtype=np.int64)
    assert np.array_equal(F.frobenius(base), base)
    # trace = sum of conjugates, lands in GF(q), and is GF(q)-linear
    conj = a.copy()
    tr = a.copy()
    for _ in range(m - 1):
        conj = F.frobenius(conj)
        tr = F.add(tr, conj)
    assert np.array_equal(F.trace(a), tr)
    assert np.all(F.trace(a) < q)
    lam = np.int64(rng.integers(1, q))
    assert np.array_equal(F.trace(F.mul(lam, a)), F.mul(lam, F.trace(a)))


@pytest.mark.parametrize("q,m", FIELDS)
def test_digits_roundtrip(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(5)
    a = F.random_elements(rng, (64,))
    d = F.digits(a)
    assert d.shape == (64, m) and np.all(d < q)
    assert np.array_equal(F.from_digits(d), a)


@pytest.mark.parametrize("q,m", [(7, 3), (13, 3), (3, 4)])
def test_dual_basis_pairing(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(2)
    for _ in range(10):
        basis = random_subspace(F, m, rng)
        dual = dual_basis(F, basis)
        for i in range(m):
            for j in range(m):
                tr = int(F.trace(F.mul(basis[i], dual[j])))
                assert tr == (1 if i == j else 0)


@pytest.mark.parametrize("q,m", [(2, 2), (7, 3), (13, 3)])
def test_subspaces(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(9)
    for lam in range(1, m + 1):
        S = random_subspace(F, lam, rng)
        assert basis_rank(F, S) == lam
        full = complete_basis(F, S)
        assert is_basis(F, full) and np.array_equal(full[:lam], S)
        # closure under random GF(q)-combinations
        coeffs = rng.integers(0, q, size=(20, lam))
        vals = np.array(
            [F.sum(F.mul(c.astype(np.int64), S)) for c in coeffs]
        )
        assert np.all(subspace_contains(F, S, vals))
        outside = F.random_elements(rng, (100,))
        frac = np.mean(
            [subspace_contains(F, S, outside[i : i + 1]) for i in range(100)]
        )
        assert frac <= q ** (lam - m) + 0.1  # membership is rare for lam < m


def test_square_subspace_products():
    F = make_field(7, 3)
    rng = np.random.default_rng(4)
    S = random_subspace(F, 2, rng)
    sq = square_subspace(F, S)
    # ordered products b0b0, b0b1, b1b1
    assert int(sq[0]) == int(F.mul(S[0], S[0]))
    assert int(sq[1]) == int(F.mul(S[0], S[1]))
    assert int(sq[2]) == int(F.mul(S[1], S[1]))


def test_nonprime_base_field():
    F = make_field(4, 2)  # GF(16) over GF(4)
    rng = np.random.default_rng(1)
    a = F.random_nonzero(rng, (50,))
    b = F.random_elements(rng, (50,))
    assert np.array_equal(F.mul(a, F.inv(a)), np.ones(50, dtype=np.int64))
    assert np.array_equal(F.mul(F.add(a, b), a), F.add(F.mul(a, a), F.mul(b, a)))
    assert np.all(F.trace(b) < 4)
