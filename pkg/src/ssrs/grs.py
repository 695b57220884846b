"""Generalized Reed-Solomon codes: construction, decoding, support recovery.

GRS_k(x, y) = { (y_0 f(x_0), ..., y_{n-1} f(x_{n-1})) : deg f < k } with x a
vector of distinct field elements and y a vector of nonzero multipliers.
Decoding uses Gao's algorithm (extended Euclid on the interpolation
polynomial).  sidelnikov_shestakov recovers (x, y) from any generator matrix
of a GRS code, in a canonical normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .codes import LinearCode


class RecoveryError(Exception):
    """The input code does not behave like a GRS code."""


class PoleError(RecoveryError):
    """A support value maps to infinity under the requested fractional map."""


@dataclass
class GrsCode:
    field: object
    x: np.ndarray
    y: np.ndarray
    k: int

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=np.int64)
        self.y = np.asarray(self.y, dtype=np.int64)
        n = self.x.shape[0]
        if len(set(self.x.tolist())) != n:
            raise ValueError("support entries must be distinct")
        if np.any(self.y == 0):
            raise ValueError("multipliers must be nonzero")
        if not 1 <= self.k <= n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={n}")

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def t(self):
        """Unique decoding radius floor((n - k) / 2)."""
        return (self.n - self.k) // 2


def random_grs(F, n, k, rng):
    if n > F.order:
        raise ValueError("support longer than the field")
    x = rng.permutation(F.order)[:n].astype(np.int64)
    y = F.random_nonzero(rng, (n,))
    return GrsCode(F, x, y, k)


def vandermonde(F, x, k):
    """Rows x^0, x^1, ..., x^{k-1}."""
    x = np.asarray(x, dtype=np.int64)
    V = np.empty((k, x.shape[0]), dtype=np.int64)
    V[0] = 1
    for i in range(1, k):
        V[i] = F.mul(V[i - 1], x)
    return V


def generator(code):
    """Canonical k x n generator matrix with rows y * x^i."""
    V = vandermonde(code.field, code.x, code.k)
    return code.field.mul(V, code.y[None, :])


def as_linear_code(code):
    return LinearCode(code.field, generator(code))


def _derivative_at_support(F, x):
    """prod_{j != i} (x_i - x_j) for every i, vectorized."""
    diff = F.sub(x[:, None], x[None, :])
    np.fill_diagonal(diff, 1)
    out = np.ones(x.shape[0], dtype=np.int64)
    for j in range(x.shape[0]):
        out = F.mul(out, diff[:, j])
    return out


def dual_multiplier(F, x, y):
    """y' with Dual(GRS_k(x, y)) = GRS_{n-k}(x, y')."""
    return F.inv(F.mul(y, _derivative_at_support(F, x)))


def parity(code):
    """(n - k) x n parity check matrix (a generator of the dual)."""
    F = code.field
    yp = dual_multiplier(F, code.x, code.y)
    return generator(GrsCode(F, code.x, yp, code.n - code.k))


def encode(code, msg):
    msg = np.asarray(msg, dtype=np.int64)
    if msg.ndim == 1:
        msg = msg[None, :]
        squeeze = True
    else:
        squeeze = False
    if msg.shape[1] != code.k:
        raise ValueError("message length must be k")
    out = linalg.matmul(code.field, msg, generator(code))
    return out[0] if squeeze else out


# -- polynomial helpers (coefficient vectors, constant term first) ------------


def poly_trim(a):
    a = np.asarray(a, dtype=np.int64)
    nz = np.nonzero(a)[0]
    return a[: nz[-1] + 1] if nz.size else a[:1] * 0


def poly_deg(a):
    a = poly_trim(a)
    return -1 if not a.any() else a.shape[0] - 1


def poly_eval(F, a, x):
    """Evaluate at (an array of) points by Horner's rule."""
    x = np.asarray(x, dtype=np.int64)
    out = np.zeros_like(x)
    for c in np.asarray(a, dtype=np.int64)[::-1]:
        out = F.add(F.mul(out, x), np.int64(c))
    return out


def poly_mul(F, a, b):
    a = poly_trim(a)
    b = poly_trim(b)
    out = np.zeros(a.shape[0] + b.shape[0] - 1, dtype=np.int64)
    for i, c in enumerate(a):
        if c:
            out[i : i + b.shape[0]] = F.add(out[i : i + b.shape[0]], F.mul(np.int64(c), b))
    return out


def poly_sub(F, a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    ln = max(a.shape[0], b.shape[0])
    pa = np.zeros(ln, dtype=np.int64)
    pa[: a.shape[0]] = a
    pb = np.zeros(ln, dtype=np.int64)
    pb[: b.shape[0]] = b
    return poly_trim(F.sub(pa, pb))


def poly_divmod(F, a, b):
    a = poly_trim(a).copy()
    b = poly_trim(b)
    db = poly_deg(b)
    if db < 0:
        raise ZeroDivisionError("division by zero polynomial")
    da = poly_deg(a)
    if da < db:
        return np.zeros(1, dtype=np.int64), a
    q = np.zeros(da - db + 1, dtype=np.int64)
    lead_inv = F.inv(b[db])
    for d in range(da, db - 1, -1):
        c = a[d]
        if c:
            f = F.mul(np.int64(c), lead_inv)
            q[d - db] = f
            a[d - db : d + 1] = F.sub(a[d - db : d + 1], F.mul(np.int64(f), b))
    return q, poly_trim(a)


def roots_linear_scan(F, a, candidates):
    vals = poly_eval(F, a, candidates)
    return candidates[vals == 0]


def interpolate(F, x, v):
    """Coefficients of the unique poly of degree < n through (x_i, v_i).

    Newton-free direct formula: sum_i v_i / pi'(x_i) * pi(X)/(X - x_i), with
    the quotients built by a vectorized synthetic-division recurrence.
    """
    x = np.asarray(x, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    n = x.shape[0]
    pi = np.ones(1, dtype=np.int64)
    for xi in x:
        pi = poly_mul(F, pi, np.array([F.neg(np.int64(xi)), 1], dtype=np.int64))
    w = F.div(v, _derivative_at_support(F, x))
    # Q[i, j] = coefficient j of pi(X) / (X - x_i): Q[i, n-1] = 1,
    # Q[i, j] = pi[j + 1] + x_i * Q[i, j + 1]
    Q = np.empty((n, n), dtype=np.int64)
    Q[:, n - 1] = 1
    for j in range(n - 2, -1, -1):
        Q[:, j] = F.add(np.int64(pi[j + 1]), F.mul(x, Q[:, j + 1]))
    out = np.zeros(n, dtype=np.int64)
    for i in range(n):
        if w[i]:
            out = F.add(out, F.mul(np.int64(w[i]), Q[i]))
    return poly_trim(out)


def decode(code, received):
    """Gao decoding: returns (codeword, error) or raises RecoveryError
    if more than t = floor((n-k)/2) positions are corrupted."""
    F = code.field
    received = np.asarray(received, dtype=np.int64)
    if received.shape != (code.n,):
        raise ValueError("received word has wrong length")
    rs_word = F.div(received, code.y)
    g0 = np.ones(1, dtype=np.int64)
    for xi in code.x:
        g0 = poly_mul(F, g0, np.array([F.neg(np.int64(xi)), 1], dtype=np.int64))
    g1 = interpolate(F, code.x, rs_word)
    # extended Euclid, stopping when the remainder degree drops below (n+k)/2
    stop = (code.n + code.k) / 2
    r0, r1 = g0, g1
    v0 = np.zeros(1, dtype=np.int64)
    v1 = np.ones(1, dtype=np.int64)
    while poly_deg(r1) >= stop:
        q, r = poly_divmod(F, r0, r1)
        v_new = poly_sub(F, v0, poly_mul(F, q, v1))
        r0, r1 = r1, r
        v0, v1 = v1, v_new
    fq, frem = poly_divmod(F, r1, v1)
    if poly_deg(frem) >= 0 or poly_deg(fq) >= code.k:
        raise RecoveryError("too many errors")
    cw = F.mul(code.y, poly_eval(F, fq, code.x))
    err = F.sub(received, cw)
    if int(np.count_nonzero(err)) > code.t:
        raise RecoveryError("too many errors")
    return cw, err


def syndrome_decode(code, parity_mat, syndrome):
    """Error vector e of weight <= t with parity_mat e^T = syndrome."""
    F = code.field
    v = linalg.solve_right(F, parity_mat, syndrome)
    if v is None:
        raise RecoveryError("syndrome outside the column space")
    _, err = decode(code, v)
    return err


# -- Sidelnikov-Shestakov support recovery ------------------------------------


def sidelnikov_shestakov(F, G, k):
    """Recover a GRS representation from a generator matrix.

    Returns a GrsCode in the canonical normalization: the supports at the
    first two pivot columns are 0 and 1 and the multiplier at the first pivot
    is 1.  The residual projective degree of freedom is fixed by picking the
    smallest valid cross-ratio parameter, so the output is deterministic.
    Raises RecoveryError when G does not generate a GRS code.
    """
    G = np.asarray(G, dtype=np.int64)
    n = G.shape[1]
    if not 2 <= k <= n - 2:
        raise ValueError("need 2 <= k <= n - 2")
    R, piv = linalg.rref(F, G)
    if len(piv) != k:
        raise RecoveryError("matrix rank differs from k")
    piv = list(piv)
    nonpiv = [c for c in range(n) if c not in set(piv)]
    A = R[:k, nonpiv]
    if np.any(A == 0):
        raise RecoveryError("vanishing systematic entry")
    ratios = F.div(A[0], A[1])
    if len(set(ratios.tolist())) != ratios.shape[0]:
        raise RecoveryError("coincident support ratios")
    bad = set(int(r) for r in ratios)
    x = np.full(n, -1, dtype=np.int64)
    for kappa in range(1, F.order):
        if kappa in bad:
            continue
        # x_j = kappa / (kappa - r_j) for non-pivot columns
        xs = F.div(np.int64(kappa), F.sub(np.int64(kappa), ratios))
        x[:] = -1
        x[piv[0]] = 0
        x[piv[1]] = 1
        x[nonpiv] = xs
        ok = True
        j0, j1 = nonpiv[0], nonpiv[1]
        a0, a1 = x[j0], x[j1]
        for i in range(2, k):
            rho = F.div(
                F.mul(A[i, 0], A[0, 1]), F.mul(A[0, 0], A[i, 1])
            )
            num = F.mul(F.mul(a0, a1), F.sub(np.int64(1), rho))
            den = F.sub(a0, F.mul(rho, a1))
            if den == 0:
                ok = False
                break
            x[piv[i]] = F.div(num, den)
        if not ok:
            continue
        if len(set(x.tolist())) != n:
            continue
        y = _recover_multipliers(F, A, x, piv, nonpiv, k)
        if y is None:
            continue
        cand = GrsCode(F, x, y, k)
        if linalg.code_equal(F, generator(cand), G):
            return cand
    raise RecoveryError("no consistent support found")


def _recover_multipliers(F, A, x, piv, nonpiv, k):
    xp = x[piv]
    n = x.shape[0]
    y = np.zeros(n, dtype=np.int64)
    # scale row 0 so that the multiplier at the first pivot becomes 1
    d0 = np.int64(1)
    for l in range(1, k):
        d0 = F.mul(d0, F.sub(xp[0], xp[l]))
    c = np.zeros(k, dtype=np.int64)
    c[0] = F.inv(d0)
    y[piv[0]] = 1
    # y_j from row 0: A[0, j] = y_j * c_0 * prod_{l >= 1}(x_j - x_l)
    xn = x[nonpiv]
    f0 = np.full(xn.shape[0], c[0], dtype=np.int64)
    for l in range(1, k):
        f0 = F.mul(f0, F.sub(xn, xp[l]))
    if np.any(f0 == 0):
        return None
    y[nonpiv] = F.div(A[0], f0)
    # c_i from column nonpiv[0], then the remaining pivot multipliers
    j0 = nonpiv[0]
    for i in range(1, k):
        prod = np.int64(1)
        for l in range(k):
            if l != i:
                prod = F.mul(prod, F.sub(x[j0], xp[l]))
        if prod == 0 or y[j0] == 0:
            return None
        c[i] = F.div(A[i, 0], F.mul(np.int64(y[j0]), prod))
        dprod = np.int64(1)
        for l in range(k):
            if l != i:
                dprod = F.mul(dprod, F.sub(xp[i], xp[l]))
        den = F.mul(np.int64(c[i]), dprod)
        if den == 0:
            return None
        y[piv[i]] = F.inv(den)
    if np.any(y == 0):
        return None
    return y


def mobius_apply(F, x, a, b, c, d):
    """(a x + b) / (c x + d) elementwise; raises on a pole."""
    x = np.asarray(x, dtype=np.int64)
    den = F.add(F.mul(np.int64(c), x), np.int64(d))
    if np.any(den == 0):
        raise PoleError("support hits a pole of the fractional map")
    num = F.add(F.mul(np.int64(a), x), np.int64(b))
    return F.div(num, den)


def renormalize(code, anchors):
    """Move the code to an equivalent representation with prescribed supports.

    anchors maps exactly three positions to target support values.  The
    fractional linear map theta sending the current supports at those
    positions to the targets is applied to the whole support, and the
    multipliers are adjusted so the code is unchanged.
    """
    F = code.field
    if len(anchors) != 3:
        raise ValueError("exactly three anchors are required")
    pos = list(anchors)
    src = [int(code.x[p]) for p in pos]
    dst = [int(anchors[p]) for p in pos]
    a, b, c, d = _mobius_through(F, src, dst)
    x2 = mobius_apply(F, code.x, a, b, c, d)
    # GRS_k(x, y) = GRS_k(theta(x), y * (c x + d)^(k-1))
    w = F.pow(F.add(F.mul(np.int64(c), code.x), np.int64(d)), code.k - 1)
    return GrsCode(F, x2, F.mul(code.y, w), code.k)


def _mobius_through(F, src, dst):
    """Coefficients of the fractional map with theta(src[i]) = dst[i]."""
    # theta = sigma_dst^-1 after sigma_src where sigma_v(z) is the standard
    # map sending (v0, v1, v2) to (0, 1, infinity as a cross-ratio)
    def std(v):
        v0, v1, v2 = (np.int64(t) for t in v)
        # z -> ((z - v0)(v1 - v2)) / ((z - v2)(v1 - v0)) as matrix coeffs
        a = F.sub(v1, v2)
        b = F.neg(F.mul(v0, a))
        c = F.sub(v1, v0)
        d = F.neg(F.mul(v2, c))
        return np.array([[a, b], [c, d]], dtype=np.int64)

    Ms = std(src)
    Md = std(dst)
    det = F.sub(F.mul(Md[0, 0], Md[1, 1]), F.mul(Md[0, 1], Md[1, 0]))
    if det == 0:
        raise ValueError("anchor values must be distinct")
    Mdi = np.array(
        [[Md[1, 1], F.neg(Md[0, 1])], [F.neg(Md[1, 0]), Md[0, 0]]], dtype=np.int64
    )
    M = linalg.matmul(F, Mdi, Ms)
    return int(M[0, 0]), int(M[0, 1]), int(M[1, 0]), int(M[1, 1])
