"""Exact arithmetic in GF(q) and GF(q^m) on integer-encoded elements.

An element of GF(q^m) with coordinates (c_0, ..., c_{m-1}) over GF(q) in the
power basis of the field modulus is encoded as the integer sum c_i * q^i,
where each c_i is itself the canonical encoding of a GF(q) element (a residue
when q is prime, recursively a polynomial encoding over GF(p) otherwise).
All operations accept numpy integer arrays of any shape and broadcast.

Multiplication and inversion go through discrete-log tables, which keeps the
whole stack exact while staying vectorized; this is practical for the field
sizes used here (q^m up to a few tens of thousands).
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

_TABLE_LIMIT = 1 << 20


def _factor_prime_power(q):
    """Return (p, e) with q = p^e, or raise ValueError."""
    if q < 2:
        raise ValueError(f"q must be >= 2, got {q}")
    n = q
    p = None
    for d in itertools.chain([2], range(3, q + 1, 2)):
        if d * d > n:
            break
        if n % d == 0:
            p = d
            break
    if p is None:
        p = n
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    if n != 1:
        raise ValueError(f"q = {q} is not a prime power")
    return p, e


class _PolyRing:
    """Scalar polynomial helpers over a base field given by add/mul/neg tables."""

    def __init__(self, add, mul, neg, inv, order):
        self.add = add
        self.mul = mul
        self.neg = neg
        self.inv = inv
        self.order = order

    def mul_mod(self, a, b, mod):
        """(a * b) mod the monic polynomial mod; all args digit tuples."""
        deg = len(mod) - 1
        prod = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] = self.add(prod[i + j], self.mul(ai, bj))
        for d in range(len(prod) - 1, deg - 1, -1):
            c = prod[d]
            if c == 0:
                continue
            prod[d] = 0
            for j in range(deg):
                prod[d - deg + j] = self.add(
                    prod[d - deg + j], self.mul(c, self.neg(mod[j]))
                )
        return tuple(prod[:deg]) + (0,) * (deg - len(prod))

    def rem(self, a, b):
        """Remainder of a by monic-leading b (lists of digits, high degree last)."""
        a = list(a)
        db = len(b) - 1
        while len(b) > 1 and b[-1] == 0:
            b = b[:-1]
            db -= 1
        lead_inv = self.inv(b[-1])
        for d in range(len(a) - 1, db - 1, -1):
            c = a[d]
            if c == 0:
                continue
            f = self.mul(c, lead_inv)
            for j in range(db + 1):
                a[d - db + j] = self.add(a[d - db + j], self.neg(self.mul(f, b[j])))
        return a[:db] if db > 0 else []

    def is_irreducible(self, poly):
        """Trial division by all monic polynomials of degree <= deg/2."""
        deg = len(poly) - 1
        if deg == 1:
            return True
        if poly[0] == 0:
            return False
        for d in range(1, deg // 2 + 1):
            for t in range(self.order**d):
                div = []
                tt = t
                for _ in range(d):
                    div.append(tt % self.order)
                    tt //= self.order
                div.append(1)
                r = self.rem(list(poly), div)
                if all(c == 0 for c in r):
                    return False
        return True


def _smallest_irreducible(ring, deg):
    """Lexicographically smallest monic irreducible of given degree.

    Candidates are compared coefficient-wise from the constant term up, each
    coefficient ordered by its integer encoding.
    """
    order = ring.order
    for t in range(order**deg):
        coeffs = [(t // order ** (deg - 1 - i)) % order for i in range(deg)]
        poly = coeffs + [1]
        if ring.is_irreducible(poly):
            return tuple(poly)
    raise RuntimeError("no irreducible polynomial found")


class Field:
    """GF(q^m) with q = p^e; build with make_field() to share table caches.

    Attributes:
        p, e, q, m: characteristic, base extension degree, q = p^e, top degree.
        order: q^m.
        modulus: monic degree-m polynomial over GF(q) (tuple of m+1 encodings),
            the lexicographically smallest irreducible, constant term first.
        generator: encoding of a fixed multiplicative generator.
    """

    def __init__(self, q, m):
        if m < 1:
            raise ValueError(f"m must be >= 1, got {m}")
        self.p, self.e = _factor_prime_power(q)
        self.q = q
        self.m = m
        self.order = q**m
        if self.order > _TABLE_LIMIT:
            raise ValueError(f"field order {self.order} too large for table mode")
        self._prime_base = self.e == 1
        self._build_base_tables()
        ring = _PolyRing(
            self._qadd_s, self._qmul_s, self._qneg_s, self._qinv_s, q
        )
        self.modulus = _smallest_irreducible(ring, m)
        self._ring = ring
        self._build_element_tables()

    # -- base field GF(q) scalar ops on encodings ------------------------------

    def _build_base_tables(self):
        p, e, q = self.p, self.e, self.q
        if e == 1:
            self.qadd = (np.arange(q)[:, None] + np.arange(q)[None, :]) % q
            self.qmul = (np.arange(q)[:, None] * np.arange(q)[None, :]) % q
            self.qneg = (-np.arange(q)) % q
        else:
            pring = _PolyRing(
                lambda a, b: (a + b) % p,
                lambda a, b: (a * b) % p,
                lambda a: (-a) % p,
                lambda a: pow(a, p - 2, p),
                p,
            )
            pmod = _smallest_irreducible(pring, e)
            powv = p ** np.arange(e)

            def dig(x):
                return tuple((x // powv) % p)

            def enc(d):
                return int(np.dot(d, powv))

            self.qadd = np.zeros((q, q), dtype=np.int64)
            self.qmul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                da = dig(a)
                for b in range(q):
                    db = dig(b)
                    self.qadd[a, b] = enc([(x + y) % p for x, y in zip(da, db)])
                    self.qmul[a, b] = enc(pring.mul_mod(da, db, pmod))
            self.qneg = np.array(
                [enc([(-x) % p for x in dig(a)]) for a in range(q)]
            )
        qinv = np.zeros(q, dtype=np.int64)
        for a in range(1, q):
            for b in range(1, q):
                if self.qmul[a, b] == 1:
                    qinv[a] = b
                    break
        self.qinv = qinv

    def _qadd_s(self, a, b):
        return int(self.qadd[a, b])

    def _qmul_s(self, a, b):
        return int(self.qmul[a, b])

    def _qneg_s(self, a):
        return int(self.qneg[a])

    def _qinv_s(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(q)")
        return int(self.qinv[a])

    # -- element tables for GF(q^m) --------------------------------------------

    def _scalar_mul(self, a, b):
        """Scalar product of two encodings via polynomial arithmetic."""
        da = self._digits_scalar(a)
        db = self._digits_scalar(b)
        return self._enc_scalar(self._ring.mul_mod(da, db, self.modulus))

    def _digits_scalar(self, x):
        out = []
        for _ in range(self.m):
            out.append(x % self.q)
            x //= self.q
        return tuple(out)

    def _enc_scalar(self, d):
        x = 0
        for c in reversed(d):
            x = x * self.q + c
        return x

    def _build_element_tables(self):
        q, m, Q = self.q, self.m, self.order
        self.POW = q ** np.arange(m)
        allv = np.arange(Q)
        dig = np.empty((Q, m), dtype=np.int64)
        rest = allv.copy()
        for i in range(m):
            dig[:, i] = rest % q
            rest //= q
        self.DIG = dig
        self.NEG = (self.qneg[dig] @ self.POW).astype(np.int64)

        # find a multiplicative generator, then fill exp/log tables
        gen = None
        for cand in range(2, Q):
            x = cand
            steps = 1
            while x != 1:
                x = self._scalar_mul(x, cand)
                steps += 1
                if steps > Q:
                    raise RuntimeError("multiplicative order overflow")
            if steps == Q - 1:
                gen = cand
                break
        if gen is None:
            if Q == 2:
                gen = 1
            else:
                raise RuntimeError("no multiplicative generator found")
        self.generator = gen
        exp = np.zeros(max(2 * (Q - 1), 1), dtype=np.int64)
        log = np.zeros(Q, dtype=np.int64)
        x = 1
        for i in range(Q - 1):
            exp[i] = x
            exp[i + Q - 1] = x
            log[x] = i
            x = self._scalar_mul(x, gen)
        self.EXP = exp
        self.LOG = log
        inv = np.zeros(Q, dtype=np.int64)
        if Q > 1:
            nz = np.arange(1, Q)
            inv[nz] = exp[(Q - 1 - log[nz]) % (Q - 1)]
        self.INV = inv
        self._fast_prime = self._prime_base and m == 1

    # -- vectorized arithmetic -------------------------------------------------

    def add(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self._fast_prime:
            return (a + b) % self.q
        if self._prime_base:
            return ((self.DIG[a] + self.DIG[b]) % self.q) @ self.POW
        return self.qadd[self.DIG[a], self.DIG[b]] @ self.POW

    def neg(self, a):
        return self.NEG[np.asarray(a)]

    def sub(self, a, b):
        return self.add(a, self.NEG[np.asarray(b)])

    def mul(self, a, b):
        a = np.asarray(a)
        b = np.asarray(b)
        if self._fast_prime:
            return (a * b) % self.q
        out = self.EXP[self.LOG[a] + self.LOG[b]]
        return np.where((a != 0) & (b != 0), out, 0)

    def inv(self, a):
        a = np.asarray(a)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.INV[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, k):
        """Elementwise a**k; 0**0 = 1 by convention, 0**k = 0 for k > 0."""
        a = np.asarray(a)
        k = np.asarray(k)
        if np.any((a == 0) & (k < 0)):
            raise ZeroDivisionError("negative power of zero")
        Q1 = self.order - 1
        if Q1 == 0:
            return np.ones_like(a)
        out = self.EXP[(self.LOG[a] * (k % Q1)) % Q1]
        return np.where(a == 0, np.where(k == 0, 1, 0), out)

    def frobenius(self, a):
        return self.pow(a, self.q)

    def trace(self, a):
        """Trace down to GF(q); results are always GF(q) encodings (< q)."""
        acc = np.asarray(a)
        t = acc
        for _ in range(self.m - 1):
            t = self.frobenius(t)
            acc = self.add(acc, t)
        return acc

    def digits(self, a):
        """Power-basis coordinates over GF(q), shape a.shape + (m,)."""
        return self.DIG[np.asarray(a)]

    def from_digits(self, d):
        """Inverse of digits(); sums d[..., i] * q^i (valid for encodings < q)."""
        return np.asarray(d) @ self.POW

    def sum(self, a, axis=None):
        """Field sum along an axis (reduction with field addition)."""
        a = np.asarray(a)
        if self._fast_prime:
            return a.sum(axis=axis) % self.q
        if axis is None:
            a = a.reshape(-1)
            axis = 0
        a = np.moveaxis(a, axis, 0)
        acc = a[0]
        for i in range(1, a.shape[0]):
            acc = self.add(acc, a[i])
        return acc

    def dot(self, a, b):
        """Field inner product along the last axis."""
        return self.sum(self.mul(a, b), axis=-1)

    # -- sampling --------------------------------------------------------------

    def random_elements(self, rng, shape=()):
        return rng.integers(0, self.order, size=shape, dtype=np.int64)

    def random_nonzero(self, rng, shape=()):
        return rng.integers(1, self.order, size=shape, dtype=np.int64)

    @property
    def subfield(self):
        """GF(q) as a Field (shares no tables but is cached globally)."""
        return make_field(self.q, 1)

    def __repr__(self):
        return f"Field(q={self.q}, m={self.m})"


@functools.lru_cache(maxsize=None)
def make_field(q, m=1):
    return Field(q, m)


# -- basis and subspace utilities ----------------------------------------------


def basis_rank(F, vectors):
    """GF(q)-rank of a family of GF(q^m) elements."""
    from . import linalg

    return linalg.rank(F.subfield, F.digits(np.asarray(vectors)))


def is_basis(F, vectors):
    v = np.asarray(vectors)
    return v.shape[-1] == F.m and basis_rank(F, v) == F.m


def dual_basis(F, basis):
    """The trace-dual basis: Tr(basis[i] * out[j]) = 1 if i == j else 0."""
    from . import linalg

    basis = np.asarray(basis)
    m = F.m
    if basis.shape != (m,):
        raise ValueError("need a full basis of length m")
    root = F.q if m > 1 else 1  # class of X in the power basis
    powers = np.array([int(F.pow(np.int64(root), l)) for l in range(m)])
    M = F.trace(F.mul(basis[:, None], powers[None, :]))
    Minv = linalg.inv(F.subfield, M)
    return F.from_digits(Minv.T)


def complete_basis(F, partial):
    """Extend a GF(q)-independent family to a full basis of GF(q^m).

    Completion is deterministic: power-basis elements 1, x, x^2, ... are
    appended greedily whenever they enlarge the span.
    """
    from . import linalg

    Fq = F.subfield
    partial = np.asarray(partial, dtype=np.int64)
    rows = list(partial)
    cur = linalg.rank(Fq, F.digits(partial)) if len(rows) else 0
    if cur != len(rows):
        raise ValueError("partial family is not independent")
    root = F.q if F.m > 1 else 1
    for l in range(F.m):
        if cur == F.m:
            break
        cand = int(F.pow(np.int64(root), l))
        trial = np.array(rows + [cand], dtype=np.int64)
        r = linalg.rank(Fq, F.digits(trial))
        if r > cur:
            rows.append(cand)
            cur = r
    if cur != F.m:
        raise RuntimeError("basis completion failed")
    return np.array(rows, dtype=np.int64)


def random_subspace(F, lam, rng):
    """Uniform GF(q)-independent lam-tuple spanning a random lam-dim subspace."""
    if not 1 <= lam <= F.m:
        raise ValueError(f"need 1 <= lam <= m, got {lam}")
    while True:
        cand = F.random_elements(rng, (lam,))
        if basis_rank(F, cand) == lam:
            return cand


def subspace_contains(F, basis, values):
    """Membership of values (any shape) in the GF(q)-span of basis."""
    from . import linalg

    Fq = F.subfield
    basis = np.asarray(basis)
    vals = np.asarray(values).reshape(-1)
    bd = F.digits(basis)
    r0 = linalg.rank(Fq, bd)
    for v in vals:
        stacked = np.vstack([bd, F.digits(v)[None, :]])
        if linalg.rank(Fq, stacked) != r0:
            return False
    return True


def square_subspace(F, basis):
    """Basis of the span of all pairwise products of basis elements.

    Products are scanned in the order b0*b0, b0*b1, ..., b0*b_{l-1}, b1*b1,
    b1*b2, ...; the first independent ones are kept.
    """
    from . import linalg

    Fq = F.subfield
    basis = np.asarray(basis)
    lam = basis.shape[0]
    prods = []
    for r in range(lam):
        for s in range(r, lam):
            prods.append(int(F.mul(basis[r], basis[s])))
    kept = []
    cur = 0
    for p in prods:
        trial = np.array(kept + [p], dtype=np.int64)
        r = linalg.rank(Fq, F.digits(trial))
        if r > cur:
            kept.append(p)
            cur = r
    return np.array(kept, dtype=np.int64)
