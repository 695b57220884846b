"""Linear codes over a Field and the classical operations on them.

A code is held as a generator matrix together with its field; the matrix is
reduced on construction so that dim is always the actual dimension.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import linalg


class LinearCode:
    """A linear code given by (the row space of) a generator matrix."""

    def __init__(self, field, gen, reduce=True):
        gen = np.asarray(gen, dtype=np.int64)
        if gen.ndim != 2:
            raise ValueError("generator must be a 2-d matrix")
        self.field = field
        self.gen = linalg.row_space(field, gen) if reduce else gen
        self.n = gen.shape[1]

    @property
    def dim(self):
        return self.gen.shape[0]

    def contains(self, v):
        """Membership test for a single vector."""
        v = np.asarray(v, dtype=np.int64)
        stacked = np.vstack([self.gen, v[None, :]])
        return linalg.rank(self.field, stacked) == self.dim

    def __eq__(self, other):
        return (
            isinstance(other, LinearCode)
            and self.field is other.field
            and self.n == other.n
            and linalg.code_equal(self.field, self.gen, other.gen)
        )

    def __repr__(self):
        return f"LinearCode(n={self.n}, dim={self.dim}, field={self.field})"


def random_code(field, n, k, rng):
    """Uniform [n, k] code: random full-rank generator matrix."""
    if not 0 < k <= n:
        raise ValueError(f"need 0 < k <= n, got k={k}, n={n}")
    return LinearCode(field, linalg.random_full_rank(field, k, n, rng))


def dual(code):
    """The dual code under the standard inner product."""
    return LinearCode(code.field, linalg.right_kernel(code.field, code.gen))


def puncture(code, positions):
    """Delete the given coordinates."""
    keep = _keep_mask(code.n, positions)
    return LinearCode(code.field, code.gen[:, keep])


def shorten(code, positions):
    """Shorten at the given coordinates.

    Computed through the duality Sh(C)_L = Dual(Punct(Dual(C))_L), which
    avoids special-casing codes with no codeword supported off L.
    """
    return dual(puncture(dual(code), positions))


def _keep_mask(n, positions):
    mask = np.ones(n, dtype=bool)
    pos = np.asarray(list(positions), dtype=np.int64)
    if pos.size and (pos.min() < 0 or pos.max() >= n):
        raise ValueError("position out of range")
    mask[pos] = False
    return mask


def star_product(a, b, rng=None):
    """Componentwise (Schur) product code of two codes.

    With rng=None all dim(a)*dim(b) row products are generated; otherwise
    4*(n+1) random codeword products are used, which gives the right span
    with overwhelming probability and is much faster for large dimensions.
    """
    if a.field is not b.field or a.n != b.n:
        raise ValueError("codes must share field and length")
    F = a.field
    if rng is None:
        rows = np.empty((a.dim * b.dim, a.n), dtype=np.int64)
        idx = 0
        for i in range(a.dim):
            rows[idx : idx + b.dim] = F.mul(a.gen[i][None, :], b.gen)
            idx += b.dim
    else:
        t = 4 * (a.n + 1)
        ca = linalg.matmul(F, F.random_elements(rng, (t, a.dim)), a.gen)
        cb = linalg.matmul(F, F.random_elements(rng, (t, b.dim)), b.gen)
        rows = F.mul(ca, cb)
    return LinearCode(F, rows)


def square(code, rng=None):
    """The Schur square of a code."""
    if rng is None:
        k, n = code.dim, code.n
        pairs = list(itertools.combinations_with_replacement(range(k), 2))
        rows = np.empty((len(pairs), n), dtype=np.int64)
        for t, (i, j) in enumerate(pairs):
            rows[t] = code.field.mul(code.gen[i], code.gen[j])
        return LinearCode(code.field, rows)
    return star_product(code, code, rng=rng)
