"""Key recovery against SSRS/XGRS public keys.

Pipeline: (1) the shortened twisted square of the public block code is, for
honest keys, the expansion of a subcode of the square of the parent code over
the per-position product bases; (2) guess-and-squeeze recovers those bases up
to scalars block by block, after which squeezing yields a GRS code whose
support is recovered in a canonical normalization by Sidelnikov-Shestakov;
(3) the subspace bases of the public code itself are the kernel of a linear
system tying the public generator to the parity check of the recovered
Reed-Solomon code.  High-rate keys are handled by shortening the public code
on block sets and stitching the partial supports with three fixed anchors.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from . import field as fld
from . import grs, linalg
from .codes import LinearCode
from .expansion import ExpandedCode, block_shorten, squeeze_matrix
from .grs import RecoveryError
from .scheme import SsrsKeyPair, ssrs_decrypt, ssrs_encrypt, ssrs_regenerate
from .twisted import choose_shortening, expected_dims, shortened_twisted_square


class AttackError(Exception):
    def __init__(self, stage, msg):
        super().__init__(f"{stage}: {msg}")
        self.stage = stage


@dataclass
class GuessSqueezeResult:
    bases: np.ndarray  # (n_blocks, m), each row correct up to a scalar
    family: str
    candidates_tried: int


@dataclass
class RecoveredKey:
    params: object
    x: np.ndarray | None
    bases: np.ndarray | None
    valid: bool
    stage: str  # "ok" when valid, else the failing stage


# -- candidate basis families --------------------------------------------------


@functools.lru_cache(maxsize=None)
def _candidates_cached(fkey, family):
    q, m = fkey
    F = fld.make_field(q, m)
    if family == "power":
        gs = np.arange(1, F.order, dtype=np.int64)
        cols = [np.ones_like(gs)]
        for _ in range(m - 1):
            cols.append(F.mul(cols[-1], gs))
        cand = np.stack(cols, axis=1)
    elif family == "all":
        free = np.stack(
            np.meshgrid(*([np.arange(F.order)] * (m - 1)), indexing="ij"), axis=-1
        ).reshape(-1, m - 1)
        cand = np.hstack([np.ones((free.shape[0], 1), dtype=np.int64), free])
    else:
        raise ValueError(f"unknown candidate family {family!r}")
    keep = _independent_mask(F, cand)
    return cand[keep]


def basis_candidates(F, family):
    """All candidate bases of the family, one representative per scalar class.

    "power" lists (1, g, ..., g^{m-1}) for every g of degree m; for m = 3,
    lam = 2 these are exactly the product bases (b0^2, b0 b1, b1^2) up to a
    scalar, so the family is complete for the twisted-square stage there.
    "all" lists every basis with first element 1.
    """
    return _candidates_cached((F.q, F.m), family)


def _independent_mask(F, cand):
    """Which candidate rows are GF(q)-independent tuples."""
    m = F.m
    d = F.digits(cand)  # (N, m, m)
    if m == 1:
        return cand[:, 0] != 0
    if m == 2:
        det = F.subfield.sub(
            F.subfield.mul(d[:, 0, 0], d[:, 1, 1]),
            F.subfield.mul(d[:, 0, 1], d[:, 1, 0]),
        )
        return det != 0
    if m == 3:
        Fq = F.subfield
        det = np.zeros(cand.shape[0], dtype=np.int64)
        for (a, b, c), sign in (
            ((0, 1, 2), 1),
            ((1, 2, 0), 1),
            ((2, 0, 1), 1),
            ((0, 2, 1), -1),
            ((2, 1, 0), -1),
            ((1, 0, 2), -1),
        ):
            term = Fq.mul(Fq.mul(d[:, 0, a], d[:, 1, b]), d[:, 2, c])
            det = Fq.add(det, term if sign > 0 else Fq.neg(term))
        return det != 0
    return np.array([linalg.rank(F.subfield, di) == m for di in d])


# -- guess and squeeze ---------------------------------------------------------


def _normalize_columns(F, W):
    """Scale every column so its first nonzero entry is 1; zero columns stay."""
    nz = W != 0
    any_nz = nz.any(axis=0)
    first = nz.argmax(axis=0)
    pivots = W[first, np.arange(W.shape[1])]
    safe = np.where(any_nz, pivots, 1)
    return F.mul(W, F.INV[safe][None, :]), any_nz


def _block_matrix(G, pos, m):
    return G[:, pos * m : (pos + 1) * m]


class _GuessState:
    """Shared plumbing for the shortening rounds of guess_and_squeeze."""

    def __init__(self, E, k, family, rng, max_retries):
        self.E = E
        self.F = E.ambient
        self.m = self.F.m
        self.n = E.n_blocks
        self.k = k
        self.rng = rng
        self.max_retries = max_retries
        self.cand = basis_candidates(self.F, family)
        self.candT = np.ascontiguousarray(self.cand.T)
        self.capacity = self.n - (k - 1)
        self.tried = 0

    def shortening(self, targets):
        """One k-1 block shortening keeping `targets`; returns (kept, gen)."""
        pool = [b for b in range(self.n) if b not in set(targets)]
        for _ in range(self.max_retries):
            extra = self.capacity - len(targets)
            fill = self.rng.permutation(len(pool))[:extra]
            keep_set = set(targets) | {pool[i] for i in fill}
            short_blocks = [b for b in range(self.n) if b not in keep_set]
            Es = block_shorten(self.E, short_blocks)
            if Es.dim == self.m:
                return sorted(keep_set), Es.code.gen
        raise AttackError("guess", "shortened dimension never equals m")

    def block_dirs(self, G, kept, b):
        """Normalized squeeze directions of every candidate at block b."""
        W = linalg.matmul(self.F, _block_matrix(G, kept.index(b), self.m), self.candT)
        self.tried += W.shape[1]
        return _normalize_columns(self.F, W)

    def anchor_dir(self, G, kept, b, basis):
        W = linalg.matmul(
            self.F, _block_matrix(G, kept.index(b), self.m), basis[:, None]
        )
        wn, ok = _normalize_columns(self.F, W)
        return wn[:, 0] if ok[0] else None


def guess_and_squeeze(E, k, family="all", rng=None, max_retries=8):
    """Recover the per-block expansion bases of E up to scalars.

    E must expand some [n, k] code over GF(q^m) with one full basis per
    block.  Repeatedly block-shorten at k-1 blocks so the parent becomes
    1-dimensional; a candidate basis is accepted for a block when its
    squeeze is proportional to the anchor block's squeeze, i.e. when the
    two-block squeezed code has dimension 1.  Since a single shortening
    admits spurious proportional pairs (any pair of candidates hitting a
    common direction), the initial pair is filtered through several
    independent shortenings, which false pairs survive with probability
    about q^(1-m) each while correct pairs always do.
    """
    if E.block_len != E.ambient.m:
        raise ValueError("guess_and_squeeze expects full-size blocks")
    if rng is None:
        rng = np.random.default_rng(0)
    st = _GuessState(E, k, family, rng, max_retries)
    if st.capacity < 2:
        raise AttackError("guess", "k - 1 shortenings leave fewer than 2 blocks")
    n, m = st.n, st.m
    recovered = _bootstrap_pair(st)
    stuck = 0
    while len(recovered) < n:
        unresolved = [b for b in range(n) if b not in recovered]
        anchors = [min(recovered)]
        targets = anchors + unresolved[: st.capacity - 1]
        kept, G = st.shortening(targets)
        progress = False
        for anchor in (b for b in kept if b in recovered):
            ref = st.anchor_dir(G, kept, anchor, recovered[anchor])
            if ref is None:
                continue
            for b in kept:
                if b in recovered:
                    continue
                W, okc = st.block_dirs(G, kept, b)
                match = np.nonzero(okc & (W == ref[:, None]).all(axis=0))[0]
                if match.size:
                    recovered[b] = st.cand[match[0]].copy()
                    progress = True
            break
        if progress:
            stuck = 0
        else:
            stuck += 1
            if stuck > max_retries:
                missing = [b for b in range(n) if b not in recovered]
                raise AttackError("guess", f"blocks {missing[:5]} unresolved")
    bases = np.stack([recovered[b] for b in range(n)])
    return GuessSqueezeResult(bases, family, st.tried)


def _bootstrap_pair(st, max_rounds=7):
    """Find the first two block bases by cross-filtered hash joins."""
    pairs = None
    b0 = b1 = None
    rounds = 0
    failures = 0
    while True:
        if failures > st.max_retries:
            raise AttackError("guess", "no stable dimension-1 pair found")
        kept, G = st.shortening([b for b in (b0, b1) if b is not None])
        if b0 is None:
            live = []
            dirs = {}
            for b in kept:
                dirs[b] = st.block_dirs(G, kept, b)
                if dirs[b][1].any():
                    live.append(b)
                if len(live) == 2:
                    break
            if len(live) < 2:
                failures += 1
                continue
            b0, b1 = live
            W0, ok0 = dirs[b0]
            W1, ok1 = dirs[b1]
        else:
            W0, ok0 = st.block_dirs(G, kept, b0)
            W1, ok1 = st.block_dirs(G, kept, b1)
            if not (ok0.any() and ok1.any()):
                failures += 1  # a parent entry vanished this round
                continue
        key0 = {c: W0[:, c].tobytes() for c in np.nonzero(ok0)[0]}
        key1 = {c: W1[:, c].tobytes() for c in np.nonzero(ok1)[0]}
        if pairs is None:
            table = {}
            for c, kk in key0.items():
                table.setdefault(kk, []).append(c)
            pairs = [
                (c0, c1)
                for c1, kk in key1.items()
                for c0 in table.get(kk, ())
            ]
        else:
            pairs = [
                (c0, c1)
                for c0, c1 in pairs
                if c0 in key0 and c1 in key1 and key0[c0] == key1[c1]
            ]
        rounds += 1
        if not pairs:
            pairs = None
            b0 = b1 = None
            failures += 1
            continue
        if rounds >= 2 and (len(pairs) <= st.m or rounds >= max_rounds):
            c0, c1 = min(pairs)
            return {b0: st.cand[c0].copy(), b1: st.cand[c1].copy()}


# -- support recovery ----------------------------------------------------------


def recover_support(T, k2, family="power", rng=None):
    """Support of the parent RS code of an expanded code T over GF(q).

    T is a LinearCode over GF(q) of length m*n expanding an [n, k2] GRS
    code.  Returns (grs_code, bases): the canonical GRS representation of
    the squeezed code and the recovered per-block bases.
    """
    if not isinstance(T, ExpandedCode):
        raise ValueError("pass an ExpandedCode")
    gs = guess_and_squeeze(T, k2, family=family, rng=rng)
    F = T.ambient
    D = squeeze_matrix(F, T.code.gen, gs.bases)
    Dred = linalg.row_space(F, D)
    if Dred.shape[0] != k2:
        raise RecoveryError(
            f"squeezed code has dimension {Dred.shape[0]}, expected {k2}"
        )
    code = grs.sidelnikov_shestakov(F, Dred, k2)
    return code, gs


# -- basis recovery ------------------------------------------------------------


def recover_bases(E_pub, x, k, rng=None, max_equations=6000):
    """Per-position subspace bases of the public code, given the support.

    Solves G_pub . B . H^T = 0 for the blocks of B over GF(q^m), where H is
    the parity check of RS_k(x).  The kernel is one-dimensional (a global
    scalar); equations are sampled when the full system is large, then the
    solution is checked on everything it claims.
    """
    F = E_pub.ambient
    lam = E_pub.block_len
    n = E_pub.n_blocks
    if rng is None:
        rng = np.random.default_rng(0)
    G = E_pub.code.gen
    H = grs.parity(grs.GrsCode(F, x, np.ones(n, dtype=np.int64), k))
    want = max(lam * n + 60, 200)

    def eq_rows(count):
        # random words of the public code paired with random dual words; the
        # stored generators are echelonized and a raw row pair touches only a
        # few blocks, which lets single-block artefacts slip through a sample
        g = linalg.matmul(F, F.subfield.random_elements(rng, (count, G.shape[0])), G)
        h = linalg.matmul(F, F.random_elements(rng, (count, H.shape[0])), H)
        return F.mul(g, np.repeat(h, lam, axis=1))

    used = want
    M = eq_rows(used)
    while True:
        K = linalg.right_kernel(F, M)
        if K.shape[0] <= 1 or used >= max_equations:
            break
        add = min(used, max_equations - used)
        M = np.vstack([M, eq_rows(add)])
        used += add
    if K.shape[0] != 1:
        raise RecoveryError(f"basis system kernel has dimension {K.shape[0]}")
    b = K[0]
    bases = b.reshape(n, lam)
    for i in range(n):
        if fld.basis_rank(F, bases[i]) != lam:
            raise RecoveryError(f"degenerate basis at position {i}")
    return bases


# -- validation ----------------------------------------------------------------


def validate_key(rk, E_pub, trials=10, rng=None):
    """True when rk regenerates the public code and decrypts fresh ciphertexts."""
    if not rk.valid or rk.x is None:
        return False
    P = rk.params
    if rng is None:
        rng = np.random.default_rng(1)
    try:
        regen = ssrs_regenerate(P, rk.x, rk.bases)
    except (ValueError, RecoveryError):
        return False
    if regen.code != E_pub.code:
        return False
    kp = SsrsKeyPair(P, E_pub.code.gen, rk.x, rk.bases)
    for _ in range(trials):
        msg = P.field.subfield.random_elements(rng, (E_pub.dim,))
        c = ssrs_encrypt(P, E_pub.code.gen, msg, rng)
        try:
            if not np.array_equal(ssrs_decrypt(kp, c), msg):
                return False
        except Exception:
            return False
    return True


# -- full pipelines ------------------------------------------------------------


def stage2_family(params):
    """Candidate family for the twisted-square basis guess.

    For m = 3, lam = 2 the power family covers every product basis up to a
    scalar, so the stage is complete there; other shapes fall back to the
    power family as an experimental heuristic.
    """
    return "power"


def attack_low_rate(E_pub, params, rng=None, validate_trials=10):
    """Algorithm for 2k <= n: twisted square, support recovery, bases."""
    if rng is None:
        rng = np.random.default_rng(0)
    P = params
    fail = lambda stage: RecoveredKey(P, None, None, False, stage)
    if 2 * P.k - 1 > P.n - 2:  # square support recovery needs n - k2 >= 2
        return attack_high_rate(E_pub, params, rng, validate_trials)
    rand_e, rs_e, ok = expected_dims(P.q, P.m, P.lam, P.n, P.k)
    if not ok:
        return fail("not-attackable")
    T = shortened_twisted_square(E_pub)
    if T.dim > rs_e:
        return fail("distinguisher")
    try:
        code2, _ = recover_support(T, 2 * P.k - 1, stage2_family(P), rng)
    except (RecoveryError, AttackError):
        return fail("support")
    try:
        bases = recover_bases(E_pub, code2.x, P.k, rng)
    except RecoveryError:
        return fail("bases")
    rk = RecoveredKey(P, code2.x, bases, True, "ok")
    if not validate_key(rk, E_pub, trials=validate_trials, rng=rng):
        return RecoveredKey(P, code2.x, bases, False, "validate")
    return rk


def attack_high_rate(E_pub, params, rng=None, validate_trials=10, s=None):
    """Algorithm for 2k > n: shorten on block sets, stitch partial supports.

    Every shortening keeps blocks 0, 1, 2; each partial support is moved by
    a fractional linear map to the normalization x_0 = 0, x_1 = 1, x_2 = c2
    so the pieces agree on overlaps and can be merged.  c2 is the smallest
    element outside {0, 1}; if some support value lands on a pole of the
    map, the next c2 is tried.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    P = params
    n = P.n
    fail = lambda stage: RecoveredKey(P, None, None, False, stage)
    if s is None:
        s = choose_shortening(P.q, P.m, P.lam, P.n, P.k)
    if s is None:
        return fail("not-attackable")
    if s == 0:
        return attack_low_rate(E_pub, params, rng, validate_trials)
    kept_size = n - s
    if kept_size < 6:
        return fail("not-attackable")
    k2 = 2 * (P.k - s) - 1
    rand_e, rs_e, ok = expected_dims(P.q, P.m, P.lam, n - s, P.k - s)
    x_full = None
    for c2 in range(2, 8):
        try:
            x_full = _stitch_support(E_pub, P, s, k2, rs_e, c2, rng)
            break
        except _PoleRetry:
            continue
        except (RecoveryError, AttackError):
            return fail("support")
        except _DistinguisherReject:
            return fail("distinguisher")
    if x_full is None:
        return fail("support")
    try:
        bases = recover_bases(E_pub, x_full, P.k, rng)
    except RecoveryError:
        return fail("bases")
    rk = RecoveredKey(P, x_full, bases, True, "ok")
    if not validate_key(rk, E_pub, trials=validate_trials, rng=rng):
        return RecoveredKey(P, x_full, bases, False, "validate")
    return rk


class _PoleRetry(Exception):
    pass


class _DistinguisherReject(Exception):
    pass


def _stitch_support(E_pub, P, s, k2, rs_e, c2, rng, overlap=3):
    """Merge partial supports from many shortenings into one full support.

    Each shortening keeps the anchors plus `overlap` blocks whose values are
    already known; a freshly recovered piece may differ from the stored
    values by a Frobenius twist (the squeeze stage cannot tell a code from
    its conjugates), so every twist is tried and the one agreeing on all
    shared blocks is kept.  Three shared points alone cannot detect a twist
    (a fractional linear map matches any three), hence the extra overlap.
    """
    F = P.field
    n = P.n
    kept_size = n - s
    values = {}
    anchors = [0, 1, 2]
    first = True
    guard = 0
    max_iters = 8 + 4 * ((n - 3) // max(kept_size - 3 - overlap, 1) + 1)
    while len(values) < n:
        guard += 1
        if guard > max_iters:
            raise RecoveryError("support stitching does not converge")
        known_extra = [b for b in sorted(values) if b not in anchors][:overlap]
        missing = [b for b in range(3, n) if b not in values]
        kept = anchors + known_extra + missing[: kept_size - 3 - len(known_extra)]
        if len(kept) < kept_size:
            pool = [b for b in range(3, n) if b not in set(kept)]
            fill = rng.permutation(len(pool))[: kept_size - len(kept)]
            kept += [pool[i] for i in fill]
        kept = sorted(kept)
        short_blocks = [b for b in range(n) if b not in set(kept)]
        Es = block_shorten(E_pub, short_blocks)
        T = shortened_twisted_square(Es)
        if T.dim > rs_e:
            if first:
                raise _DistinguisherReject()
            raise RecoveryError("shortened twisted square too large")
        code2, _ = recover_support(T, k2, stage2_family(P), rng)
        i0, i1, i2 = (kept.index(a) for a in anchors)
        xs = code2.x
        accepted = None
        saw_pole = False
        for _ in range(F.m):
            src = [int(xs[i0]), int(xs[i1]), int(xs[i2])]
            try:
                a, b_, c, d = grs._mobius_through(F, src, [0, 1, c2])
                xn = grs.mobius_apply(F, xs, a, b_, c, d)
            except grs.PoleError:
                saw_pole = True
                xn = None
            if xn is not None and all(
                values.get(blk, int(xn[p])) == int(xn[p])
                for p, blk in enumerate(kept)
            ):
                accepted = xn
                break
            xs = F.frobenius(xs)
        if accepted is None:
            if saw_pole:
                raise _PoleRetry()
            if first:
                raise RecoveryError("anchor normalization is inconsistent")
            continue  # try a fresh shortening
        first = False
        for p, b in enumerate(kept):
            values[b] = int(accepted[p])
    return np.array([values[b] for b in range(n)], dtype=np.int64)
