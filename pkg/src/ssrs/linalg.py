"""Vectorized dense linear algebra over a Field.

All matrices are 2-d numpy int64 arrays of element encodings.  Every function
takes the field as its first argument.  Elimination is written as a python
loop over pivot columns with whole-matrix numpy updates, which is fast enough
for the matrix sizes appearing in the experiments (a few thousand columns).
"""

from __future__ import annotations

import numpy as np


def _as_matrix(M):
    M = np.asarray(M, dtype=np.int64)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
    return M


def rref(F, M):
    """Reduced row echelon form.

    Returns (R, pivots) where R has the same shape as M (zero rows at the
    bottom) and pivots is the strictly increasing list of pivot columns.
    """
    R = _as_matrix(M).copy()
    rows, cols = R.shape
    pivots = []
    r = 0
    # forward pass: eliminate below each pivot only
    for c in range(cols):
        if r == rows:
            break
        col = R[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        t = r + nz[0]
        if t != r:
            R[[r, t]] = R[[t, r]]
        piv_inv = F.inv(R[r, c])
        R[r] = F.mul(R[r], piv_inv)
        if r + 1 < rows:
            fac = R[r + 1 :, c]
            live = np.nonzero(fac)[0]
            if live.size:
                upd = F.mul(fac[live, None], R[r][None, :])
                R[r + 1 + live] = F.sub(R[r + 1 + live], upd)
        pivots.append(c)
        r += 1
    # backward pass: clear above the pivots
    for i in range(len(pivots) - 1, 0, -1):
        c = pivots[i]
        fac = R[:i, c]
        live = np.nonzero(fac)[0]
        if live.size:
            upd = F.mul(fac[live, None], R[i][None, :])
            R[live] = F.sub(R[live], upd)
    return R, pivots


def rank(F, M):
    M = _as_matrix(M)
    if M.size == 0:
        return 0
    return len(rref(F, M)[1])


def row_space(F, M):
    """Canonical basis (rref nonzero rows) of the row space."""
    R, piv = rref(F, M)
    return R[: len(piv)]


def right_kernel(F, M):
    """Basis of {v : M v^T = 0}, one row per kernel vector."""
    M = _as_matrix(M)
    rows, cols = M.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    R, piv = rref(F, M)
    free = [c for c in range(cols) if c not in set(piv)]
    K = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        K[i, f] = 1
        K[i, piv] = F.neg(R[: len(piv), f])
    return K


def matmul(F, A, B):
    """Field matrix product A @ B."""
    A = _as_matrix(A)
    B = _as_matrix(B)
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} x {B.shape}")
    if getattr(F, "_fast_prime", False):
        # residues stay small, so int64 accumulation cannot overflow here
        return (A @ B) % F.q
    out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
    for i in range(A.shape[1]):
        out = F.add(out, F.mul(A[:, i : i + 1], B[i][None, :]))
    return out


def matvec(F, A, v):
    return matmul(F, A, np.asarray(v)[:, None])[:, 0]


def identity(n):
    return np.eye(n, dtype=np.int64)


def inv(F, A):
    A = _as_matrix(A)
    n = A.shape[0]
    if A.shape[1] != n:
        raise ValueError("matrix must be square")
    R, piv = rref(F, np.hstack([A, identity(n)]))
    if piv != list(range(n)):
        raise np.linalg.LinAlgError("matrix is singular")
    return R[:, n:]


def solve_right(F, A, b):
    """One solution x of A x^T = b, or None if the system is inconsistent."""
    A = _as_matrix(A)
    b = np.asarray(b, dtype=np.int64)
    aug = np.hstack([A, b[:, None]])
    R, piv = rref(F, aug)
    n = A.shape[1]
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    x[piv] = R[: len(piv), n]
    return x


def is_invertible(F, A):
    A = _as_matrix(A)
    return A.shape[0] == A.shape[1] and rank(F, A) == A.shape[0]


def code_equal(F, G1, G2):
    """Whether two generator matrices span the same row space."""
    B1 = row_space(F, G1)
    B2 = row_space(F, G2)
    return B1.shape == B2.shape and bool(np.array_equal(B1, B2))


def random_invertible(F, n, rng):
    while True:
        A = F.random_elements(rng, (n, n))
        if is_invertible(F, A):
            return A


def random_full_rank(F, rows, cols, rng):
    while True:
        A = F.random_elements(rng, (rows, cols))
        if rank(F, A) == min(rows, cols):
            return A


def block_diag(blocks):
    """Block-diagonal matrix from a list of square integer matrices."""
    sizes = [np.asarray(b).shape for b in blocks]
    rtot = sum(s[0] for s in sizes)
    ctot = sum(s[1] for s in sizes)
    out = np.zeros((rtot, ctot), dtype=np.int64)
    r = c = 0
    for b, (h, w) in zip(blocks, sizes):
        out[r : r + h, c : c + w] = b
        r += h
        c += w
    return out
