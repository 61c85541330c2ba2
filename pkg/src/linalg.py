#!/usr/bin/env python3
"""Exact dense linear algebra over F_p on int64 numpy arrays.

Entries are kept in [0, p). With p well below 2**31 every product of two
entries fits in int64, so row operations are plain vectorised numpy.
"""

from typing import List, Optional, Tuple

import numpy as np


def mod_p(A, p: int) -> np.ndarray:
    return np.asarray(A, dtype=np.int64) % p


def zeros(m: int, n: int) -> np.ndarray:
    return np.zeros((m, n), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    return (A @ B) % p


def matpow(A: np.ndarray, n: int, p: int) -> np.ndarray:
    result = identity(A.shape[0])
    base = A % p
    while n > 0:
        if n & 1:
            result = (result @ base) % p
        base = (base @ base) % p
        n >>= 1
    return result


def is_zero(A: np.ndarray) -> bool:
    return not np.any(A)


def rref(A: np.ndarray, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over F_p. Returns (R, pivot_columns)."""
    R = mod_p(A, p).copy()
    m, n = R.shape
    pivots: List[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = (R[r] * pow(int(R[r, c]), -1, p)) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            R[rows] = (R[rows] - np.outer(col[rows], R[r])) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    # eliminate along the shorter side
    if A.shape[0] > A.shape[1]:
        A = A.T
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Right nullspace of A; the columns of the result form a basis."""
    n = A.shape[1]
    if A.shape[0] == 0:
        return identity(n)
    R, pivots = rref(A, p)
    free = [j for j in range(n) if j not in set(pivots)]
    N = zeros(n, len(free))
    if not free:
        return N
    N[free, np.arange(len(free))] = 1
    if pivots:
        N[pivots, :] = (-R[: len(pivots)][:, free]) % p
    return N


def left_nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Rows y with y A = 0, stacked as a matrix."""
    return nullspace(A.T, p).T


def span_basis(A: np.ndarray, p: int) -> np.ndarray:
    """Canonical basis of the column space: the nonzero rows of rref(A^T), as columns."""
    if A.shape[1] == 0:
        return zeros(A.shape[0], 0)
    R, pivots = rref(A.T, p)
    return R[: len(pivots)].T.copy()


def pivot_coordinates(S: np.ndarray, p: int) -> List[int]:
    """Coordinates pivotal in the reduced basis of span(S)."""
    if S.shape[1] == 0:
        return []
    return rref(S.T, p)[1]


def complement_columns(S: np.ndarray, p: int) -> np.ndarray:
    """Identity columns at the coordinates not pivotal in the reduced basis of span(S)."""
    n = S.shape[0]
    piv = set(pivot_coordinates(S, p))
    free = [i for i in range(n) if i not in piv]
    return identity(n)[:, free]


def solve(A: np.ndarray, B: np.ndarray, p: int) -> Optional[np.ndarray]:
    """One solution X of A X = B (free variables set to zero), or None."""
    m, n = A.shape
    B2 = B.reshape(m, -1)
    R, pivots = rref(np.concatenate([mod_p(A, p), mod_p(B2, p)], axis=1), p)
    if pivots and pivots[-1] >= n:
        return None
    X = zeros(n, B2.shape[1])
    if pivots:
        X[pivots, :] = R[: len(pivots), n:]
    return X if B.ndim == 2 else X.reshape(-1)


def inverse(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("matrix is not square")
    if n == 0:
        return identity(0)
    R, pivots = rref(np.concatenate([mod_p(A, p), identity(n)], axis=1), p)
    if len(pivots) < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix not invertible mod p")
    return R[:, n:].copy()


def is_invertible(A: np.ndarray, p: int) -> bool:
    return A.shape[0] == A.shape[1] and rank(A, p) == A.shape[0]


def is_nilpotent(A: np.ndarray, p: int) -> bool:
    n = A.shape[0]
    if n == 0:
        return True
    return is_zero(matpow(A, n, p))


def vec(F: np.ndarray) -> np.ndarray:
    """Column-major flattening."""
    return F.reshape(-1, order="F")


def unvec(v: np.ndarray, rows: int, cols: int) -> np.ndarray:
    return v.reshape(rows, cols, order="F")


def block_diag(*blocks: np.ndarray) -> np.ndarray:
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = zeros(rows, cols)
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out
