"""Dense Gaussian elimination over prime fields GF(p).

Matrices are numpy int64 arrays with entries in [0, p).  For p < 2**31 every
product of two reduced entries fits in int64, so row operations never overflow.
"""

from __future__ import annotations

import numpy as np


def as_matrix(A, p: int, shape=None) -> np.ndarray:
    M = np.array(A, dtype=np.int64)
    if shape is not None and M.size == 0:
        M = M.reshape(shape)
    return M % p


def rref(A: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows and
    ``pivots[i]`` is the pivot column of row ``i``.  Pivot columns are the
    lexicographically earliest possible, so the result is canonical for the
    row space of ``A``.
    """
    R = np.array(A, dtype=np.int64) % p
    if R.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            R[rows] = (R[rows] - np.outer(col[rows], R[r])) % p
        pivots.append(c)
        r += 1
    return R[:r].copy(), pivots


def rank(A: np.ndarray, p: int) -> int:
    A = np.asarray(A)
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{x : A x = 0}`` as the rows of the returned matrix.

    One basis vector per free column, with a 1 in that column; the basis is
    therefore canonical.
    """
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if m == 0:
        return np.eye(n, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    N = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, pc in enumerate(pivots):
            N[k, pc] = (-R[i, f]) % p
    return N


def solve(A: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """One solution of ``A x = b`` (free variables set to zero), or None."""
    A = np.asarray(A, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1)
    m, n = A.shape
    if m == 0:
        return np.zeros(n, dtype=np.int64)
    R, pivots = rref(np.hstack([A, b[:, None]]), p)
    if pivots and pivots[-1] == n:
        return None
    x = np.zeros(n, dtype=np.int64)
    for i, pc in enumerate(pivots):
        x[pc] = R[i, n]
    return x


def reduce_vector(R: np.ndarray, pivots: list[int], v: np.ndarray, p: int) -> np.ndarray:
    """Canonical representative of ``v`` modulo the row space of an rref ``R``."""
    v = np.array(v, dtype=np.int64) % p
    for i, pc in enumerate(pivots):
        c = v[pc]
        if c:
            v = (v - c * R[i]) % p
    return v


def reduce_rows(R: np.ndarray, pivots: list[int], V: np.ndarray, p: int) -> np.ndarray:
    """Row-wise :func:`reduce_vector` for a matrix ``V``."""
    V = np.array(V, dtype=np.int64) % p
    if V.size == 0:
        return V
    for i, pc in enumerate(pivots):
        c = V[:, pc].copy()
        rows = np.flatnonzero(c)
        if rows.size:
            V[rows] = (V[rows] - np.outer(c[rows], R[i])) % p
    return V


def extend_basis(R: np.ndarray, pivots: list[int], candidates: np.ndarray, p: int):
    """Greedily pick candidate rows independent of ``R`` and of each other.

    Returns ``(chosen, R', pivots')`` where ``chosen`` are the candidates
    reduced against the span and ``R'`` is the rref of the enlarged span.
    """
    chosen = []
    n = candidates.shape[1] if candidates.ndim == 2 else 0
    R = R.reshape(-1, n) if R.size else np.zeros((0, n), dtype=np.int64)
    for v in candidates:
        w = reduce_vector(R, pivots, v, p)
        if w.any():
            chosen.append(w)
            R, pivots = rref(np.vstack([R, w]), p)
    C = np.array(chosen, dtype=np.int64).reshape(len(chosen), n)
    return C, R, pivots
