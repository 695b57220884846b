"""The twisted square of a block-structured code and the derived distinguisher.

For a code with blocks of lam GF(q) symbols per position, the twisted product
of two words a, b maps block i to the C(lam+1, 2) values
a_{i,r} b_{i,s} + a_{i,s} b_{i,r} (r < s) and a_{i,r} b_{i,r} (r = s), the
pair (r, s) stored at offset s(s+1)/2 + r.  Squeezing a twisted product
against the pairwise products of the block bases yields the componentwise
product of the squeezed words, which ties the twisted square of a subspace
subcode of a GRS code to the square of the parent code.  The dimension gap
between that case and a random code of the same parameters is the
distinguisher; shortening extends its range to lower-rate codes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np

from .codes import LinearCode, shorten
from .expansion import ExpandedCode, block_columns


def pair_count(lam):
    return lam * (lam + 1) // 2


def pair_index(r, s):
    """Offset of the unordered pair (r <= s) inside a twisted block."""
    return s * (s + 1) // 2 + r


def pair_list(lam):
    """Pairs (r, s) in storage order."""
    return [(r, s) for s in range(lam) for r in range(s + 1)]


def squared_family(F, basis):
    """Pairwise products of a lam-element basis, in twisted storage order."""
    basis = np.asarray(basis, dtype=np.int64)
    return np.array(
        [int(F.mul(basis[r], basis[s])) for r, s in pair_list(basis.shape[0])],
        dtype=np.int64,
    )


def twisted_product(F, a, b, lam):
    """Twisted product of two block vectors over GF(q)."""
    return twisted_rows(F, a[None, :], b[None, :], lam)[0]


def twisted_rows(F, A, B, lam):
    """Row-wise twisted products of two stacks of block vectors."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    if A.shape != B.shape or A.shape[1] % lam:
        raise ValueError("shape mismatch")
    rows, ln = A.shape
    n = ln // lam
    A3 = A.reshape(rows, n, lam)
    B3 = B.reshape(rows, n, lam)
    C = pair_count(lam)
    out = np.empty((rows, n, C), dtype=np.int64)
    for r, s in pair_list(lam):
        prod = F.mul(A3[:, :, r], B3[:, :, s])
        if r != s:
            prod = F.add(prod, F.mul(A3[:, :, s], B3[:, :, r]))
        out[:, :, pair_index(r, s)] = prod
    return out.reshape(rows, n * C)


def twisted_square(E):
    """The span of all twisted products of pairs of codewords of E.

    By bilinearity it is generated by the products of generator pairs.
    """
    G = E.code.gen
    K = G.shape[0]
    iu, ju = np.triu_indices(K)
    rows = twisted_rows(E.code.field, G[iu], G[ju], E.block_len)
    return ExpandedCode(
        LinearCode(E.code.field, rows), E.ambient, pair_count(E.block_len)
    )


def k_set(lam, m, n):
    """Twisted coordinates beyond the first m of each block."""
    C = pair_count(lam)
    return [i * C + j for i in range(n) for j in range(m, C)]


def shortened_twisted_square(E):
    """Twisted square shortened at the coordinates past m in every block.

    The result has m GF(q) symbols per position; for a subspace subcode of a
    GRS code (with position subspaces whose squares fill GF(q^m)) it is the
    expansion of a subcode of the square of the parent code.
    """
    T = twisted_square(E)
    m = E.ambient.m
    ks = k_set(E.block_len, m, T.n_blocks)
    if not ks:
        return ExpandedCode(T.code, E.ambient, T.block_len)
    sh = shorten(T.code, ks)
    return ExpandedCode(sh, E.ambient, min(m, T.block_len))


@dataclass
class DistinguisherReport:
    q: int
    m: int
    lam: int
    n: int
    k: int
    observed_dim: int
    random_expected: int
    rs_expected: int
    condition_ok: bool
    verdict: str
    shorten_blocks_used: int

    def as_dict(self):
        return asdict(self)


def subcode_dim(m, lam, n, k):
    """Typical dimension of the subspace subcode itself."""
    return k * m - n * (m - lam)


def expected_dims(q, m, lam, n, k):
    """Expected shortened-twisted-square dimensions for both hypotheses.

    Returns (random_expected, rs_expected, condition_ok): the typical
    dimension when the block code expands a random code, the typical
    dimension when it expands a subspace subcode of a GRS code, and whether
    the gap condition (GRS bound strictly below the random bound) holds.
    """
    C = pair_count(lam)
    k0 = subcode_dim(m, lam, n, k)
    random_expected = min(m * n, math.comb(max(k0, -1) + 1, 2) - n * (C - m))
    rs_expected = min(m * n, m * (2 * k - 1))
    condition_ok = k0 >= 2 and m * (2 * k - 1) < random_expected
    return random_expected, rs_expected, condition_ok


def choose_shortening(q, m, lam, n, k, slack=0.95):
    """Smallest number of shortened blocks making the distinguisher apply.

    The gap condition is required with a multiplicative slack on its right
    hand side so that borderline parameter sets are shortened into the
    comfortably distinguishable regime.  Returns None when no s works.
    """
    # 2(k-s)-1 <= (n-s)-2 so support recovery on the square is possible
    for s in range(max(0, 2 * k - n + 1), k - 1):
        rand_e, rs_e, ok = expected_dims(q, m, lam, n - s, k - s)
        if ok and m * (2 * (k - s) - 1) < slack * rand_e:
            return s
    return None


def distinguish(E, k, s=None, slack=0.95, rng=None):
    """Decide whether E looks like a subspace subcode of a GRS code.

    E is the public block code (block_len = lam), k the claimed parent
    dimension.  s blocks are shortened first (s is chosen automatically by
    default; the first s blocks are used unless an rng is supplied); the
    verdict compares the observed shortened-twisted-square dimension
    against both expectations.
    """
    F = E.ambient
    q, m, lam = F.q, F.m, E.block_len
    n = E.n_blocks
    if lam < 2:
        raise ValueError("distinguisher needs block_len >= 2")
    if s is None:
        s = choose_shortening(q, m, lam, n, k, slack=slack)
    if s is None:
        rand_e, rs_e, _ = expected_dims(q, m, lam, n, k)
        return DistinguisherReport(
            q, m, lam, n, k, -1, rand_e, rs_e, False, "inconclusive", -1
        )
    rand_e, rs_e, ok = expected_dims(q, m, lam, n - s, k - s)
    if s:
        if rng is not None:
            blocks = rng.permutation(n)[:s].tolist()
        else:
            blocks = list(range(s))
        Es = ExpandedCode(shorten(E.code, block_columns(lam, blocks)), F, lam)
    else:
        Es = E
    observed = shortened_twisted_square(Es).dim
    if ok and observed <= rs_e:
        verdict = "GRS-like"
    elif observed >= rand_e:
        verdict = "random-like"
    else:
        verdict = "inconclusive"
    return DistinguisherReport(
        q, m, lam, n, k, observed, rand_e, rs_e, ok, verdict, s
    )
