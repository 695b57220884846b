"""End-to-end acceptance checks at the published parameter sets."""

import math
import time

import numpy as np
import pytest

from ssrs import grs, linalg
from ssrs.codes import LinearCode, dual, puncture, random_code, shorten, square
from ssrs.expansion import (
    block_puncture,
    block_shorten,
    completed_bases,
    dual_expanded,
    expand_code,
    expand_vector,
    squeeze_vector,
    subspace_subcode,
)
from ssrs.field import dual_basis, make_field, random_subspace, subspace_contains
from ssrs.scheme import (
    SchemeParams,
    packed_public_key,
    public_key_bits,
    sparse_block_vector,
    ssrs_decrypt,
    ssrs_encrypt,
    ssrs_keygen,
    ssrs_regenerate,
    xgrs_decrypt,
    xgrs_encrypt,
    xgrs_keygen,
    xgrs_to_ssrs,
)
from ssrs.attack import attack_high_rate, attack_low_rate
from ssrs.twisted import (
    distinguish,
    shortened_twisted_square,
    squared_family,
    subcode_dim,
    twisted_square,
)


def _random_subcode_expansion(F, n, k, lam, rng, parent="random"):
    if parent == "rs":
        C = LinearCode(F, grs.generator(grs.random_grs(F, n, k, rng)))
    else:
        C = random_code(F, n, k, rng)
    S = np.stack([random_subspace(F, lam, rng) for _ in range(n)])
    return subspace_subcode(C, S)


# -- criteria 1 and 2: dimension table reproduction ----------------------------


@pytest.mark.parametrize(
    "q,m,lam,n,k,rs_dim,rand_dim,trials",
    [(7, 3, 2, 120, 55, 327, 360, 20), (7, 5, 3, 160, 75, 745, 800, 5)],
)
def test_dimension_table(q, m, lam, n, k, rs_dim, rand_dim, trials):
    F = make_field(q, m)
    rng = np.random.default_rng(100)
    for parent, expected in (("rs", rs_dim), ("random", rand_dim)):
        for _ in range(trials):
            E = _random_subcode_expansion(F, n, k, lam, rng, parent)
            assert shortened_twisted_square(E).dim == expected


# -- criterion 3: square-code laws ---------------------------------------------


def test_grs_square_law():
    F = make_field(13, 3)
    rng = np.random.default_rng(101)
    for _ in range(50):
        n = int(rng.integers(8, 30))
        k = int(rng.integers(2, n // 2 + 1))
        code = grs.random_grs(F, n, k, rng)
        sq = square(LinearCode(F, grs.generator(code)))
        target = grs.GrsCode(F, code.x, F.mul(code.y, code.y), 2 * k - 1)
        assert sq == LinearCode(F, grs.generator(target))


def test_random_square_dimension_is_typically_quadratic():
    F = make_field(7, 1)
    rng = np.random.default_rng(102)
    hits = 0
    for _ in range(100):
        k = int(rng.integers(3, 7))
        n = int(rng.integers(k * (k + 1) // 2, 40))
        hits += square(random_code(F, n, k, rng)).dim == k * (k + 1) // 2
    assert hits >= 95


# -- criterion 4: commuting-diagram suite --------------------------------------

DIAGRAM_FIELDS = [(2, 2), (7, 3), (13, 3)]


@pytest.mark.parametrize("q,m", DIAGRAM_FIELDS)
def test_diagram_shorten_puncture_duality(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(103)
    for _ in range(50):
        C = random_code(F, 10, 4, rng)
        pos = sorted(rng.permutation(10)[:3].tolist())
        assert shorten(C, pos) == dual(puncture(dual(C), pos))


@pytest.mark.parametrize("q,m", DIAGRAM_FIELDS)
def test_diagram_subcode_is_shortened_expansion(q, m):
    # subspace subcode = expansion over completed bases, shortened at the
    # completion coordinates; checked against the membership definition
    F = make_field(q, m)
    lam = max(1, m - 1)
    rng = np.random.default_rng(104)
    for _ in range(50):
        C = random_code(F, 6, 4, rng)
        S = np.stack([random_subspace(F, lam, rng) for _ in range(6)])
        E = subspace_subcode(C, S)
        full = completed_bases(F, S)
        for row in E.code.gen:
            padded = np.zeros((6, m), dtype=np.int64)
            padded[:, :lam] = row.reshape(6, lam)
            w = squeeze_vector(F, padded.reshape(-1), full)
            assert C.contains(w)
            assert all(
                subspace_contains(F, S[i], w[i : i + 1]) for i in range(6)
            )


@pytest.mark.parametrize("q,m", DIAGRAM_FIELDS)
def test_diagram_expand_vs_puncture_shorten(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(105)
    for _ in range(50):
        C = random_code(F, 8, 3, rng)
        bases = np.stack([random_subspace(F, m, rng) for _ in range(8)])
        blocks = sorted(rng.permutation(8)[:2].tolist())
        keep = [j for j in range(8) if j not in blocks]
        E = expand_code(C, bases)
        assert block_puncture(E, blocks).code == \
            expand_code(puncture(C, blocks), bases[keep]).code
        assert block_shorten(E, blocks).code == \
            expand_code(shorten(C, blocks), bases[keep]).code


@pytest.mark.parametrize("q,m", DIAGRAM_FIELDS)
def test_diagram_dual_of_expansion(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(106)
    for _ in range(50):
        C = random_code(F, 6, 3, rng)
        bases = np.stack([random_subspace(F, m, rng) for _ in range(6)])
        duals = np.stack([dual_basis(F, b) for b in bases])
        assert dual_expanded(expand_code(C, bases)).code == \
            expand_code(dual(C), duals).code


@pytest.mark.parametrize("q,m", DIAGRAM_FIELDS)
def test_diagram_basis_change_block_diagonal(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(107)
    for _ in range(50):
        C = random_code(F, 5, 3, rng)
        b1 = np.stack([random_subspace(F, m, rng) for _ in range(5)])
        b2 = np.stack([random_subspace(F, m, rng) for _ in range(5)])
        mats = [
            expand_vector(F, b1[i], b2[i][None, :].repeat(m, 0)).reshape(m, m)
            for i in range(5)
        ]
        D = linalg.block_diag(mats)
        lhs = expand_code(C, b2).code
        rhs = linalg.matmul(F.subfield, expand_code(C, b1).code.gen, D)
        assert lhs == LinearCode(F.subfield, rhs)


@pytest.mark.parametrize("q,m", DIAGRAM_FIELDS)
def test_diagram_scalar_multiplication(q, m):
    F = make_field(q, m)
    rng = np.random.default_rng(108)
    for _ in range(50):
        C = random_code(F, 6, 3, rng)
        a = F.random_nonzero(rng, (6,))
        bases = np.stack([random_subspace(F, m, rng) for _ in range(6)])
        scaled = LinearCode(F, F.mul(C.gen, a[None, :]))
        assert expand_code(scaled, F.mul(bases, a[:, None])).code == \
            expand_code(C, bases).code


@pytest.mark.parametrize("q,m", DIAGRAM_FIELDS)
def test_diagram_grs_to_rs_reduction(q, m):
    F = make_field(q, m)
    lam = max(1, m - 1)
    rng = np.random.default_rng(109)
    for _ in range(50):
        n = 6 if F.order > 8 else 4
        code = grs.random_grs(F, n, 3, rng)
        S = np.stack([random_subspace(F, lam, rng) for _ in range(n)])
        rs = grs.GrsCode(F, code.x, np.ones(n, dtype=np.int64), 3)
        Sy = F.mul(S, F.inv(code.y)[:, None])
        lhs = subspace_subcode(LinearCode(F, grs.generator(code)), S)
        rhs = subspace_subcode(LinearCode(F, grs.generator(rs)), Sy)
        assert lhs.code == rhs.code


@pytest.mark.parametrize("q,m", [(7, 3), (13, 3)])
def test_diagram_square_of_subcode_inclusion(q, m):
    # twisted-square words recombine, block by block, into the star square
    # of the parent code
    F = make_field(q, m)
    rng = np.random.default_rng(110)
    for _ in range(50):
        C = random_code(F, 8, 3, rng)
        S = np.stack([random_subspace(F, 2, rng) for _ in range(8)])
        E = subspace_subcode(C, S)
        if E.dim == 0:
            continue
        T = twisted_square(E)
        sq = square(C)
        fams = np.stack([squared_family(F, S[i]) for i in range(8)])
        for row in T.code.gen:
            blocks = row.reshape(8, 3)
            vals = np.array([F.dot(blocks[i], fams[i]) for i in range(8)])
            assert sq.contains(vals)


# -- criterion 5: scheme round trips -------------------------------------------


def test_ssrs_and_xgrs_round_trips_100():
    P = SchemeParams(13, 3, 2, 120, 50)
    rng = np.random.default_rng(111)
    kp = ssrs_keygen(P, rng)
    Fq = P.field.subfield
    for _ in range(100):
        msg = Fq.random_elements(rng, (kp.g_pub.shape[0],))
        assert np.array_equal(
            ssrs_decrypt(kp, ssrs_encrypt(P, kp.g_pub, msg, rng)), msg
        )
    xkp = xgrs_keygen(P, rng)
    for _ in range(100):
        y = sparse_block_vector(P, rng)
        assert np.array_equal(xgrs_decrypt(xkp, xgrs_encrypt(P, xkp.h_pub, y)), y)


def test_xgrs_full_scale_round_trip():
    P = SchemeParams(13, 3, 2, 1258, 1031)
    rng = np.random.default_rng(112)
    t0 = time.time()
    kp = xgrs_keygen(P, rng)
    y = sparse_block_vector(P, rng)
    c = xgrs_encrypt(P, kp.h_pub, y)
    assert np.array_equal(xgrs_decrypt(kp, c), y)
    assert time.time() - t0 <= 300


# -- criterion 6: scheme equivalence -------------------------------------------


def test_xgrs_equals_ssrs_on_50_keys():
    P = SchemeParams(13, 3, 2, 60, 30)
    rng = np.random.default_rng(113)
    for _ in range(50):
        kp = xgrs_keygen(P, rng)
        x, bases = xgrs_to_ssrs(kp)
        assert ssrs_regenerate(P, x, bases).code == kp.public_code.code


# -- criterion 7: key sizes ----------------------------------------------------


@pytest.mark.parametrize(
    "q,m,lam,n,k,kb", [(13, 3, 2, 1258, 1031, 579), (7, 4, 2, 1872, 1666, 844)]
)
def test_key_size_table(q, m, lam, n, k, kb):
    P = SchemeParams(q, m, lam, n, k)
    assert abs(public_key_bits(P) / 8000 - kb) <= 1


def test_packed_key_matches_formula_size():
    P = SchemeParams(13, 3, 2, 120, 50)
    kp = xgrs_keygen(P, np.random.default_rng(114))
    assert abs(len(packed_public_key(kp)) - public_key_bits(P) / 8) <= 1


# -- criteria 8 and 9: end-to-end attacks --------------------------------------


def test_attack_low_rate_20_instances():
    P = SchemeParams(13, 3, 2, 120, 50)
    wins = 0
    for i in range(20):
        kp = ssrs_keygen(P, np.random.default_rng(1000 + i))
        t0 = time.time()
        res = attack_low_rate(kp.public_code, P, rng=np.random.default_rng(2000 + i))
        assert time.time() - t0 <= 600
        wins += bool(res.valid)
    assert wins >= 19


def test_attack_high_rate_10_instances():
    P = SchemeParams(13, 3, 2, 200, 120)
    wins = 0
    for i in range(10):
        kp = ssrs_keygen(P, np.random.default_rng(500 + i))
        t0 = time.time()
        res = attack_high_rate(kp.public_code, P, rng=np.random.default_rng(600 + i))
        assert time.time() - t0 <= 1800
        wins += bool(res.valid)
    assert wins >= 9


@pytest.mark.slow
def test_attack_full_type_one():
    P = SchemeParams(13, 3, 2, 1258, 1031)
    kp = ssrs_keygen(P, np.random.default_rng(115))
    res = attack_high_rate(kp.public_code, P, rng=np.random.default_rng(116))
    assert res.stage == "ok" and res.valid


# -- criterion 10: barrier behavior --------------------------------------------


def test_barrier_distinguish_and_attack():
    P = SchemeParams(7, 4, 2, 40, 24)
    kp = ssrs_keygen(P, np.random.default_rng(117))
    rep = distinguish(kp.public_code, P.k)
    assert rep.verdict == "inconclusive" and not rep.condition_ok
    res = attack_low_rate(kp.public_code, P, rng=np.random.default_rng(118))
    assert res.stage == "not-attackable" and not res.valid


# -- criterion 11: statistical subcode dimension -------------------------------


def test_subcode_dimension_tail():
    q, m, lam, n, k = 7, 3, 2, 120, 55
    F = make_field(q, m)
    rng = np.random.default_rng(119)
    typical = subcode_dim(m, lam, n, k)
    exceed = 0
    for _ in range(200):
        E = _random_subcode_expansion(F, n, k, lam, rng, "random")
        exceed += E.dim > typical
    assert exceed <= 10  # at most 5% of 200
