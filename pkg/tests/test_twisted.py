import numpy as np
import pytest

from ssrs import grs, linalg
from ssrs.codes import LinearCode, random_code, star_product
from ssrs.expansion import expand_vector, subspace_subcode
from ssrs.field import make_field, random_subspace
from ssrs.twisted import (
    choose_shortening,
    distinguish,
    expected_dims,
    k_set,
    pair_count,
    pair_index,
    pair_list,
    shortened_twisted_square,
    squared_family,
    twisted_product,
    twisted_square,
)


def test_pair_bookkeeping():
    assert pair_count(2) == 3 and pair_count(3) == 6
    assert pair_list(2) == [(0, 0), (0, 1), (1, 1)]
    assert pair_list(3) == [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)]
    for lam in (2, 3, 4):
        for idx, (r, s) in enumerate(pair_list(lam)):
            assert pair_index(r, s) == idx


@pytest.mark.parametrize("q,m,lam", [(7, 3, 2), (13, 3, 2), (7, 5, 3)])
def test_twisted_product_computes_field_product(q, m, lam):
    # the twisted coordinates against the product family recover a * b
    F = make_field(q, m)
    rng = np.random.default_rng(0)
    for _ in range(20):
        basis = random_subspace(F, lam, rng)
        fam = squared_family(F, basis)
        ca = F.subfield.random_elements(rng, (lam,))
        cb = F.subfield.random_elements(rng, (lam,))
        a = F.sum(F.mul(ca, basis))
        b = F.sum(F.mul(cb, basis))
        tw = twisted_product(F, ca, cb, lam)
        assert int(F.dot(tw, fam)) == int(F.mul(a, b))


def test_twisted_square_words_are_products():
    # squeezing any twisted-square word over the product family lands in
    # the star square of the parent code
    F = make_field(13, 3)
    rng = np.random.default_rng(1)
    C = random_code(F, 10, 4, rng)
    S = np.stack([random_subspace(F, 2, rng) for _ in range(10)])
    E = subspace_subcode(C, S)
    T = twisted_square(E)
    sq = star_product(C, C)
    fams = np.stack([squared_family(F, S[i]) for i in range(10)])
    for row in T.code.gen:
        blocks = row.reshape(10, 3)
        vals = np.array([F.dot(blocks[i], fams[i]) for i in range(10)])
        assert sq.contains(vals)


def test_k_set():
    assert k_set(2, 3, 2) == []  # C(3,2)=3 == m: nothing past m
    assert k_set(3, 5, 2) == [5, 11]  # C(4,2)=6, one dropped per block


@pytest.mark.parametrize(
    "q,m,lam,n,k,rand_e,rs_e,ok",
    [
        (7, 3, 2, 120, 55, 360, 327, True),
        (7, 5, 3, 160, 75, 800, 745, True),
        (13, 3, 2, 120, 50, 360, 297, True),
        (7, 4, 2, 40, 24, 160, 160, False),  # lam <= m/2 barrier: no gap
    ],
)
def test_expected_dims(q, m, lam, n, k, rand_e, rs_e, ok):
    re_, rs_, ok_ = expected_dims(q, m, lam, n, k)
    assert (re_, rs_, ok_) == (rand_e, rs_e, ok)


def test_rs_square_dim_bound_small():
    F = make_field(13, 3)
    rng = np.random.default_rng(2)
    n, k, lam = 60, 25, 2
    code = grs.random_grs(F, n, k, rng)
    C = LinearCode(F, grs.generator(code))
    S = np.stack([random_subspace(F, lam, rng) for _ in range(n)])
    T = shortened_twisted_square(subspace_subcode(C, S))
    assert T.dim <= F.m * (2 * k - 1)


def test_choose_shortening():
    assert choose_shortening(13, 3, 2, 120, 50) == 0
    s = choose_shortening(13, 3, 2, 200, 120)
    assert s is not None and 2 * (120 - s) < 200 - s
    assert choose_shortening(7, 4, 2, 40, 24) is None  # barrier


@pytest.mark.parametrize("parent", ["grs", "random"])
def test_distinguish_verdicts(parent):
    F = make_field(13, 3)
    rng = np.random.default_rng(3)
    n, k, lam = 60, 30, 2
    if parent == "grs":
        C = LinearCode(F, grs.generator(grs.random_grs(F, n, k, rng)))
        expected = "GRS-like"
    else:
        C = random_code(F, n, k, rng)
        expected = "random-like"
    S = np.stack([random_subspace(F, lam, rng) for _ in range(n)])
    rep = distinguish(subspace_subcode(C, S), k)
    assert rep.verdict == expected
    d = rep.as_dict()
    assert d["q"] == 13 and d["k"] == 30 and d["verdict"] == expected


def test_distinguish_barrier_inconclusive():
    F = make_field(7, 4)
    rng = np.random.default_rng(4)
    n, k, lam = 40, 24, 2
    C = LinearCode(F, grs.generator(grs.random_grs(F, n, k, rng)))
    S = np.stack([random_subspace(F, lam, rng) for _ in range(n)])
    rep = distinguish(subspace_subcode(C, S), k)
    assert rep.verdict == "inconclusive"
    assert not rep.condition_ok and rep.shorten_blocks_used == -1
