"""The SSRS and XGRS public-key encryption schemes.

SSRS publishes a generator matrix of the expansion of a subspace subcode of a
Reed-Solomon code and encrypts McEliece-style, adding an error with exactly
t = floor((n-k)/2) nonzero blocks.  XGRS publishes a systematic parity check
matrix of (a block-scrambled puncturing of) the expansion of a GRS code and
encrypts Niederreiter-style, sending the syndrome of the sparse message
vector.  xgrs_to_ssrs maps an XGRS key to the subspaces making its public
code an SSRS public code, which is the basis for attacking both schemes
uniformly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import field as fld
from . import grs, linalg
from .codes import LinearCode
from .expansion import (
    ExpandedCode,
    completed_bases,
    expand_vector,
    expanded_generator,
    normalize_bases,
    squeeze_vector,
    subspace_subcode,
)
from .field import make_field


class DecryptError(Exception):
    pass


@dataclass(frozen=True)
class SchemeParams:
    q: int
    m: int
    lam: int
    n: int
    k: int

    def __post_init__(self):
        if not 1 <= self.lam <= self.m:
            raise ValueError("need 1 <= lam <= m")
        if not 0 < self.k < self.n:
            raise ValueError("need 0 < k < n")
        if self.n > self.q**self.m:
            raise ValueError("support longer than the field")
        if self.k * self.m <= (self.m - self.lam) * self.n:
            raise ValueError("subspace subcode is trivially zero at these parameters")

    @property
    def field(self):
        return make_field(self.q, self.m)

    @property
    def t(self):
        return (self.n - self.k) // 2

    @property
    def sub_dim(self):
        """Typical public code dimension km - n(m - lam)."""
        return self.k * self.m - self.n * (self.m - self.lam)


# -- SSRS ----------------------------------------------------------------------


@dataclass
class SsrsKeyPair:
    params: SchemeParams
    g_pub: np.ndarray  # sub_dim x lam*n over GF(q)
    x: np.ndarray  # secret support
    sub_bases: np.ndarray  # secret (n, lam) subspace bases

    @property
    def public_code(self):
        P = self.params
        return ExpandedCode(
            LinearCode(P.field.subfield, self.g_pub, reduce=False), P.field, P.lam
        )


def ssrs_regenerate(params, x, sub_bases):
    """Public code generated by a given secret (support, bases)."""
    F = params.field
    rs = grs.GrsCode(F, x, np.ones(params.n, dtype=np.int64), params.k)
    return subspace_subcode(LinearCode(F, grs.generator(rs)), sub_bases)


def ssrs_keygen(params, rng):
    """Random support and subspaces; restarts until g_pub has full rank."""
    F = params.field
    for _ in range(64):
        x = rng.permutation(F.order)[: params.n].astype(np.int64)
        sub_bases = np.array(
            [fld.random_subspace(F, params.lam, rng) for _ in range(params.n)]
        )
        S = ssrs_regenerate(params, x, sub_bases)
        if S.dim == params.sub_dim:
            return SsrsKeyPair(params, S.code.gen, x, sub_bases)
    raise RuntimeError("keygen kept producing non-generic public codes")


def sparse_block_error(params, rng):
    """Uniform error with exactly t nonzero lam-blocks."""
    lam, n, q = params.lam, params.n, params.q
    e = np.zeros(n * lam, dtype=np.int64)
    blocks = rng.permutation(n)[: params.t]
    for b in blocks:
        while True:
            blk = rng.integers(0, q, size=lam, dtype=np.int64)
            if blk.any():
                break
        e[b * lam : (b + 1) * lam] = blk
    return e


def ssrs_encrypt(params, g_pub, message, rng):
    """c = message . g_pub + e with exactly t nonzero blocks in e."""
    Fq = params.field.subfield
    message = np.asarray(message, dtype=np.int64)
    if message.shape != (g_pub.shape[0],):
        raise ValueError("message length must equal the public dimension")
    cw = linalg.matmul(Fq, message[None, :], g_pub)[0]
    return Fq.add(cw, sparse_block_error(params, rng))


def ssrs_decrypt(kp, c):
    """Zero-pad blocks to width m, squeeze, decode the parent RS code,
    re-expand over the subspace bases and solve for the message."""
    P = kp.params
    F = P.field
    Fq = F.subfield
    c = np.asarray(c, dtype=np.int64)
    if c.shape != (P.lam * P.n,):
        raise ValueError("bad ciphertext length")
    full = completed_bases(F, normalize_bases(F, kp.sub_bases, P.n))
    padded = np.zeros((P.n, F.m), dtype=np.int64)
    padded[:, : P.lam] = c.reshape(P.n, P.lam)
    received = squeeze_vector(F, padded.reshape(-1), full)
    rs = grs.GrsCode(F, kp.x, np.ones(P.n, dtype=np.int64), P.k)
    try:
        cw, _ = grs.decode(rs, received)
    except grs.RecoveryError as exc:
        raise DecryptError(str(exc)) from exc
    try:
        expanded = expand_vector(F, cw, kp.sub_bases)
    except ValueError as exc:
        raise DecryptError("decoded word leaves the subspaces") from exc
    msg = linalg.solve_right(Fq, kp.g_pub.T, expanded)
    if msg is None:
        raise DecryptError("decoded word outside the public code")
    return msg


# -- XGRS ----------------------------------------------------------------------


@dataclass
class XgrsKeyPair:
    params: SchemeParams
    h_pub: np.ndarray  # m(n-k) x lam*n over GF(q), systematic
    x: np.ndarray
    y: np.ndarray
    gamma: int
    l_sets: list  # per position, sorted indices in [0, m) of removed coords
    q_blocks: np.ndarray  # (n, lam, lam) invertible over GF(q)
    s_inv: np.ndarray  # cached inverse of the systematic row transform

    @property
    def r(self):
        return self.params.m * (self.params.n - self.params.k)

    @property
    def public_code(self):
        """The code parity-checked by h_pub, as a block code."""
        P = self.params
        Fq = P.field.subfield
        gen = linalg.right_kernel(Fq, self.h_pub)
        return ExpandedCode(LinearCode(Fq, gen), P.field, P.lam)


def random_degree_m_element(F, rng):
    """Uniform element whose minimal polynomial has degree exactly m."""
    while True:
        g = int(F.random_elements(rng))
        powers = np.array([int(F.pow(np.int64(g), l)) for l in range(F.m)])
        if fld.basis_rank(F, powers) == F.m:
            return g


def gamma_basis(F, gamma):
    return np.array([int(F.pow(np.int64(gamma), l)) for l in range(F.m)])


def _xgrs_h_matrix(params, x, y, gamma):
    """Expanded parity check of Exp_{B_gamma}(GRS_k(x, y)) over GF(q)."""
    F = params.field
    h_sec = grs.parity(grs.GrsCode(F, x, y, params.k))
    bdual = fld.dual_basis(F, gamma_basis(F, gamma))
    return expanded_generator(F, h_sec, bdual, vertical=bdual)


def xgrs_keygen(params, rng):
    """GRS sample, expansion over the dual gamma basis, per-position
    puncturing and block scrambling, then systematic row reduction."""
    if params.lam < 2:
        raise ValueError("XGRS needs lam >= 2")
    F = params.field
    Fq = F.subfield
    m, lam, n = params.m, params.lam, params.n
    r = m * (n - params.k)
    if r >= lam * n:
        raise ValueError("parity rank must be below the punctured length")
    while True:
        x = rng.permutation(F.order)[:n].astype(np.int64)
        y = F.random_nonzero(rng, (n,))
        gamma = random_degree_m_element(F, rng)
        H = _xgrs_h_matrix(params, x, y, gamma)
        l_sets = [sorted(rng.permutation(m)[: m - lam].tolist()) for _ in range(n)]
        keep = np.ones(m * n, dtype=bool)
        for i, li in enumerate(l_sets):
            keep[[i * m + j for j in li]] = False
        h_l = H[:, keep]
        h3 = h_l.reshape(r, n, lam)
        for _ in range(8):
            q_blocks = np.stack(
                [linalg.random_invertible(Fq, lam, rng) for _ in range(n)]
            )
            # apply the block-diagonal scramble block by block; a dense
            # (lam n) x (lam n) product is quadratically more work
            h_lq = np.zeros_like(h3)
            for a in range(lam):
                h_lq = Fq.add(
                    h_lq, Fq.mul(h3[:, :, a, None], q_blocks[None, :, a, :])
                )
            h_lq = h_lq.reshape(r, lam * n)
            left = np.ascontiguousarray(h_lq[:, :r])
            try:
                s = linalg.inv(Fq, left)
            except np.linalg.LinAlgError:
                continue
            h_pub = np.hstack(
                [linalg.identity(r), linalg.matmul(Fq, s, h_lq[:, r:])]
            )
            return XgrsKeyPair(
                params, h_pub, x, y, gamma, l_sets, q_blocks, left
            )


def sparse_block_vector(params, rng):
    """Uniform plaintext vector with exactly t nonzero lam-blocks."""
    return sparse_block_error(params, rng)


def xgrs_encrypt(params, h_pub, yvec):
    yvec = np.asarray(yvec, dtype=np.int64)
    if yvec.shape != (params.lam * params.n,):
        raise ValueError("bad message vector length")
    Fq = params.field.subfield
    return linalg.matmul(Fq, h_pub, yvec[:, None])[:, 0]


def xgrs_decrypt(kp, c):
    """Undo the systematic transform, squeeze the syndrome, decode the GRS
    code, expand the error back, un-puncture and unscramble the blocks."""
    P = kp.params
    F = P.field
    Fq = F.subfield
    m, lam, n = P.m, P.lam, P.n
    c = np.asarray(c, dtype=np.int64)
    if c.shape != (kp.r,):
        raise ValueError("bad ciphertext length")
    # step 1: back to the syndrome of the expanded parity check
    s_vec = linalg.matmul(Fq, kp.s_inv, c[:, None])[:, 0]
    # step 2: each m-block holds the dual-basis coordinates of one GF(q^m)
    # syndrome entry; squeeze against B_gamma
    bg = gamma_basis(F, kp.gamma)
    sigma = squeeze_vector(F, s_vec, bg)
    # step 3: syndrome decoding of the secret GRS code
    code = grs.GrsCode(F, kp.x, kp.y, P.k)
    h_sec = grs.parity(code)
    try:
        z = grs.syndrome_decode(code, h_sec, sigma)
    except grs.RecoveryError as exc:
        raise DecryptError(str(exc)) from exc
    # step 4: expand the sparse word over B_gamma
    expanded = expand_vector(F, z, bg).reshape(n, m)
    # step 5: un-puncture at the L sets, then undo the block scrambling
    out = np.zeros((n, lam), dtype=np.int64)
    for i, li in enumerate(l_sets := kp.l_sets):
        removed = set(li)
        if any(expanded[i, j] for j in removed):
            raise DecryptError("error vector touches punctured coordinates")
        kept = [j for j in range(m) if j not in removed]
        chi = expanded[i, kept]
        qinv = linalg.inv(Fq, kp.q_blocks[i])
        out[i] = linalg.matmul(Fq, chi[None, :], qinv.T)[0]
    return out.reshape(-1)


def xgrs_to_ssrs(kp):
    """Subspace bases making the XGRS public code an SSRS public code.

    Per position i the basis is y_i^{-1} * (B_gamma restricted off L_i)
    mixed by the block scrambler Q_i; the expanded subspace subcode of
    RS_k(x) over these bases equals the code parity-checked by h_pub.
    """
    P = kp.params
    F = P.field
    Fq = F.subfield
    bg = gamma_basis(F, kp.gamma)
    bases = np.empty((P.n, P.lam), dtype=np.int64)
    for i in range(P.n):
        kept = [j for j in range(P.m) if j not in set(kp.l_sets[i])]
        b0 = bg[kept]
        mixed = np.array(
            [F.sum(F.mul(kp.q_blocks[i][:, j], b0)) for j in range(P.lam)]
        )
        bases[i] = F.mul(F.inv(np.int64(kp.y[i])), mixed)
    return kp.x.copy(), bases


# -- key sizes and constant-weight message encoding ----------------------------


def public_key_bits(params):
    """Size in bits of the non-systematic part of a systematic XGRS key."""
    r = params.m * (params.n - params.k)
    return r * (params.lam * params.n - r) * math.log2(params.q)


def pack_symbols(symbols, q):
    """Pack base-q symbols into the minimal number of bytes."""
    symbols = [int(t) for t in np.asarray(symbols).reshape(-1)]
    vals = symbols or [0]
    p = q
    while len(vals) > 1:
        nxt = [vals[i] + vals[i + 1] * p for i in range(0, len(vals) - 1, 2)]
        if len(vals) % 2:
            nxt.append(vals[-1])
        vals = nxt
        p = p * p
    value = vals[0]
    nbytes = math.ceil(len(symbols) * math.log2(q) / 8)
    return value.to_bytes(max(nbytes, 1), "little")


def packed_public_key(kp):
    """Non-systematic public key part, bit-packed."""
    if isinstance(kp, XgrsKeyPair):
        body = kp.h_pub[:, kp.r :]
    else:
        body = kp.g_pub[:, kp.g_pub.shape[0] :]
    return pack_symbols(body, kp.params.q)


def message_capacity(params):
    """Number of distinct sparse block vectors (weight exactly t)."""
    return math.comb(params.n, params.t) * (params.q**params.lam - 1) ** params.t


def encode_sparse_message(params, number):
    """Constant-weight encoding of an integer as a sparse block vector."""
    n, t, lam, q = params.n, params.t, params.lam, params.q
    if not 0 <= number < message_capacity(params):
        raise ValueError("message integer out of range")
    content_space = (q**lam - 1) ** t
    subset_idx, content_idx = divmod(number, content_space)
    blocks = []
    prev = -1
    for remaining in range(t, 0, -1):
        c = prev + 1
        while math.comb(n - c - 1, remaining - 1) <= subset_idx:
            subset_idx -= math.comb(n - c - 1, remaining - 1)
            c += 1
        blocks.append(c)
        prev = c
    out = np.zeros(n * lam, dtype=np.int64)
    for b in blocks:
        content_idx, v = divmod(content_idx, q**lam - 1)
        v += 1  # value 0 (the all-zero block) is excluded
        for j in range(lam):
            out[b * lam + j] = v % q
            v //= q
    return out


def decode_sparse_message(params, yvec):
    """Inverse of encode_sparse_message."""
    n, t, lam, q = params.n, params.t, params.lam, params.q
    blk = np.asarray(yvec, dtype=np.int64).reshape(n, lam)
    blocks = [i for i in range(n) if blk[i].any()]
    if len(blocks) != t:
        raise ValueError("vector does not have exactly t nonzero blocks")
    subset_idx = 0
    prev = -1
    rem = t
    for b in blocks:
        for c in range(prev + 1, b):
            subset_idx += math.comb(n - c - 1, rem - 1)
        prev = b
        rem -= 1
    content_idx = 0
    for b in reversed(blocks):
        v = 0
        for j in range(lam - 1, -1, -1):
            v = v * q + int(blk[b, j])
        content_idx = content_idx * (q**lam - 1) + (v - 1)
    return subset_idx * (q**lam - 1) ** t + content_idx
