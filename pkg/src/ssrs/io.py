"""Plain-text file formats for keys, vectors, and reports.

Matrices are stored as a header line "rows cols q m" followed by one line
of canonically encoded integers per row.  Key files start with a header
"scheme q m lambda n k" and continue with named sections.  Reports are
flat key-value lines.  All writes go through a temp file and a rename so
readers never observe a partial file.
"""

import os
import tempfile

import numpy as np

from .scheme import SchemeParams, SsrsKeyPair, XgrsKeyPair


def write_atomic(path, text):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def matrix_lines(M, q, m):
    M = np.atleast_2d(np.asarray(M, dtype=np.int64))
    out = [f"{M.shape[0]} {M.shape[1]} {q} {m}"]
    out.extend(" ".join(str(int(v)) for v in row) for row in M)
    return out


def parse_matrix(lines, pos=0):
    """Returns (matrix, q, m, next_pos)."""
    rows, cols, q, m = (int(t) for t in lines[pos].split())
    M = np.empty((rows, cols), dtype=np.int64)
    for r in range(rows):
        M[r] = [int(t) for t in lines[pos + 1 + r].split()]
    return M, q, m, pos + 1 + rows


def save_vector(path, v):
    write_atomic(path, " ".join(str(int(t)) for t in np.asarray(v).reshape(-1)) + "\n")


def load_vector(path):
    with open(path) as f:
        return np.array([int(t) for t in f.read().split()], dtype=np.int64)


def save_report(path, items):
    write_atomic(path, "".join(f"{k} {v}\n" for k, v in dict(items).items()))


def load_report(path):
    out = {}
    with open(path) as f:
        for line in f:
            if line.strip():
                k, v = line.split(None, 1)
                out[k] = v.strip()
    return out


def _header(scheme, P):
    return f"{scheme} {P.q} {P.m} {P.lam} {P.n} {P.k}"


def _parse_header(line):
    parts = line.split()
    scheme = parts[0]
    q, m, lam, n, k = (int(t) for t in parts[1:6])
    return scheme, SchemeParams(q, m, lam, n, k)


def save_public_key(path, scheme, params, mat):
    """mat is g_pub for ssrs and h_pub for xgrs."""
    lines = [_header(scheme, params)]
    lines += matrix_lines(mat, params.q, params.m)
    write_atomic(path, "\n".join(lines) + "\n")


def load_public_key(path):
    with open(path) as f:
        lines = f.read().splitlines()
    scheme, params = _parse_header(lines[0])
    mat, _, _, _ = parse_matrix(lines, 1)
    return scheme, params, mat


def save_secret_key(path, kp):
    P = kp.params
    if isinstance(kp, SsrsKeyPair):
        lines = [_header("ssrs", P)]
        lines.append("x " + " ".join(str(int(t)) for t in kp.x))
        lines.append("bases")
        lines += matrix_lines(kp.sub_bases, P.q, P.m)
    elif isinstance(kp, XgrsKeyPair):
        lines = [_header("xgrs", P)]
        lines.append("x " + " ".join(str(int(t)) for t in kp.x))
        lines.append("y " + " ".join(str(int(t)) for t in kp.y))
        lines.append(f"gamma {int(kp.gamma)}")
        lines.append("l_sets")
        lines += matrix_lines(np.array(kp.l_sets, dtype=np.int64), P.q, P.m)
        lines.append("q_blocks")
        lines += matrix_lines(kp.q_blocks.reshape(P.n, P.lam * P.lam), P.q, P.m)
        lines.append("s_inv")
        lines += matrix_lines(kp.s_inv, P.q, P.m)
        lines.append("h_pub")
        lines += matrix_lines(kp.h_pub, P.q, P.m)
    else:
        raise TypeError("unknown key pair type")
    write_atomic(path, "\n".join(lines) + "\n")


def load_secret_key(path):
    with open(path) as f:
        lines = f.read().splitlines()
    scheme, P = _parse_header(lines[0])
    if scheme == "ssrs":
        x = np.array([int(t) for t in lines[1].split()[1:]], dtype=np.int64)
        assert lines[2] == "bases"
        bases, _, _, _ = parse_matrix(lines, 3)
        from .scheme import ssrs_regenerate

        g_pub = ssrs_regenerate(P, x, bases).code.gen
        return SsrsKeyPair(P, g_pub, x, bases)
    if scheme == "xgrs":
        x = np.array([int(t) for t in lines[1].split()[1:]], dtype=np.int64)
        y = np.array([int(t) for t in lines[2].split()[1:]], dtype=np.int64)
        gamma = int(lines[3].split()[1])
        pos = 4
        assert lines[pos] == "l_sets"
        l_mat, _, _, pos = parse_matrix(lines, pos + 1)
        assert lines[pos] == "q_blocks"
        q_mat, _, _, pos = parse_matrix(lines, pos + 1)
        assert lines[pos] == "s_inv"
        s_inv, _, _, pos = parse_matrix(lines, pos + 1)
        assert lines[pos] == "h_pub"
        h_pub, _, _, pos = parse_matrix(lines, pos + 1)
        l_sets = [row.tolist() for row in l_mat]
        return XgrsKeyPair(
            P, h_pub, x, y, gamma, l_sets,
            q_mat.reshape(P.n, P.lam, P.lam), s_inv,
        )
    raise ValueError(f"unknown scheme {scheme!r}")
