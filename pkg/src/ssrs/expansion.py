"""Expansion of codes over GF(q^m) into codes over GF(q), and the reverse.

Expansion replaces each GF(q^m) coordinate i by the coordinate vector of the
entry over a per-position basis B_i.  When B_i spans only a lam-dimensional
subspace S_i, expansion is defined for entries inside S_i and produces lam
symbols per position; this is how subspace subcodes are represented.
Squeezing maps blocks of GF(q) symbols back to field elements.

An ExpandedCode couples the GF(q) linear code with the ambient field and the
block length, since the block structure is part of the object.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import field as fld
from . import linalg
from .codes import LinearCode, dual, puncture, shorten


@dataclass
class ExpandedCode:
    """A GF(q)-linear code with coordinates grouped in blocks of block_len."""

    code: LinearCode
    ambient: object  # Field GF(q^m)
    block_len: int

    def __post_init__(self):
        if self.code.n % self.block_len:
            raise ValueError("length is not a multiple of the block size")

    @property
    def n_blocks(self):
        return self.code.n // self.block_len

    @property
    def dim(self):
        return self.code.dim


def normalize_bases(F, bases, n, width=None):
    """Broadcast a shared basis and validate shapes; returns an (n, w) array."""
    bases = np.asarray(bases, dtype=np.int64)
    if bases.ndim == 1:
        bases = np.broadcast_to(bases, (n, bases.shape[0])).copy()
    if bases.shape[0] != n:
        raise ValueError("one basis per position required")
    if width is not None and bases.shape[1] != width:
        raise ValueError(f"bases must have {width} elements each")
    return bases


def _decompose_mats(F, bases):
    """Per-position matrices turning power-basis digits into B_i coordinates.

    Only defined for full bases (width m); returns an (n, m, m) array P with
    digits(x) @ P[i] = coordinates of x over bases[i].
    """
    Fq = F.subfield
    n, m = bases.shape
    if m != F.m:
        raise ValueError("decomposition needs full bases")
    out = np.empty((n, m, m), dtype=np.int64)
    for i in range(n):
        out[i] = linalg.inv(Fq, F.digits(bases[i]))
    return out


def _coords(F, values, bases):
    """Coordinates of values[..., i] over bases[i]; shape (..., n, m)."""
    n = values.shape[-1]
    P = _decompose_mats(F, bases)
    d = F.digits(values)
    if F._prime_base:
        return np.einsum("...ij,ijl->...il", d, P) % F.q
    Fq = F.subfield
    out = np.empty(d.shape, dtype=np.int64)
    for i in range(n):
        out[..., i, :] = linalg.matmul(Fq, d[..., i, :].reshape(-1, F.m), P[i]).reshape(
            d.shape[:-2] + (F.m,)
        )
    return out


def expand_vector(F, v, bases):
    """Expand v over per-position bases.

    With lam-element bases the entries must lie in the spanned subspaces,
    otherwise a ValueError is raised.
    """
    v = np.asarray(v, dtype=np.int64)
    return expand_matrix(F, v[None, :], bases)[0]


def expand_matrix(F, M, bases):
    """Row-wise expansion: (r, n) over GF(q^m) -> (r, lam*n) over GF(q)."""
    M = np.asarray(M, dtype=np.int64)
    r, n = M.shape
    bases = normalize_bases(F, bases, n)
    lam = bases.shape[1]
    if lam == F.m:
        full = bases
    else:
        full = np.empty((n, F.m), dtype=np.int64)
        for i in range(n):
            full[i] = fld.complete_basis(F, bases[i])
    co = _coords(F, M, full)
    if lam < F.m and np.any(co[..., lam:]):
        raise ValueError("entry outside its position subspace")
    return co[..., :lam].reshape(r, n * lam)


def expanded_generator(F, M, bases, vertical=None):
    """Generator of the expansion of the row space of M.

    Every row is multiplied by each element of the vertical basis (defaults
    to the per-position... shared ambient power basis) before expansion, so
    the result spans the full GF(q)-expansion of the GF(q^m)-row space.
    """
    M = np.asarray(M, dtype=np.int64)
    if vertical is None:
        root = F.q if F.m > 1 else 1
        vertical = np.array([int(F.pow(np.int64(root), l)) for l in range(F.m)])
    vertical = np.asarray(vertical, dtype=np.int64)
    scaled = F.mul(M[:, None, :], vertical[None, :, None]).reshape(
        M.shape[0] * vertical.shape[0], M.shape[1]
    )
    return expand_matrix(F, scaled, bases)


def expand_code(C, bases, vertical=None):
    """ExpandedCode Exp_B(C) of a LinearCode over GF(q^m)."""
    F = C.field
    bases = normalize_bases(F, bases, C.n, width=F.m)
    G = expanded_generator(F, C.gen, bases, vertical)
    return ExpandedCode(LinearCode(F.subfield, G), F, F.m)


def squeeze_vector(F, w, bases):
    return squeeze_matrix(F, w[None, :], bases)[0]


def squeeze_matrix(F, W, bases):
    """Blockwise linear combination against the bases: (r, lam*n) -> (r, n)."""
    W = np.asarray(W, dtype=np.int64)
    r = W.shape[0]
    lam = np.asarray(bases).shape[-1]
    if W.shape[1] % lam:
        raise ValueError("row length not a multiple of the basis size")
    n = W.shape[1] // lam
    bases = normalize_bases(F, bases, n)
    blocks = W.reshape(r, n, lam)
    return F.dot(blocks, bases[None, :, :])


def j_set(lam, m, n):
    """Column indices {i*m + j : j in [lam, m)} removed when restricting
    an expanded code to lam-dimensional position subspaces."""
    return [i * m + j for i in range(n) for j in range(lam, m)]


def completed_bases(F, sub_bases):
    """Stack each lam-element basis with its deterministic completion."""
    sub_bases = np.asarray(sub_bases, dtype=np.int64)
    n = sub_bases.shape[0]
    full = np.empty((n, F.m), dtype=np.int64)
    for i in range(n):
        full[i] = fld.complete_basis(F, sub_bases[i])
    return full


def subspace_subcode(C, sub_bases):
    """Exp over the subspace bases of the subcode of C with entries in S_i.

    Computed by expanding C over completed bases and shortening at the
    coordinates carrying the completion directions.
    """
    F = C.field
    sub_bases = normalize_bases(F, sub_bases, C.n)
    lam = sub_bases.shape[1]
    full = completed_bases(F, sub_bases)
    E = expand_code(C, full)
    sh = shorten(E.code, j_set(lam, F.m, C.n))
    return ExpandedCode(sh, F, lam)


def block_columns(block_len, blocks):
    return [b * block_len + j for b in blocks for j in range(block_len)]


def block_shorten(E, blocks):
    """Shorten an ExpandedCode at whole blocks."""
    cols = block_columns(E.block_len, blocks)
    return ExpandedCode(shorten(E.code, cols), E.ambient, E.block_len)


def block_puncture(E, blocks):
    cols = block_columns(E.block_len, blocks)
    return ExpandedCode(puncture(E.code, cols), E.ambient, E.block_len)


def dual_expanded(E):
    return ExpandedCode(dual(E.code), E.ambient, E.block_len)
