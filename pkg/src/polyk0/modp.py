"""Dense linear algebra over prime fields F_p, vectorized with numpy.

Entries live in [0, p).  p is assumed small (the callers use 2, 3, 5, ...),
so int64 never overflows: every intermediate is < p**2 plus a sum bounded by
the matrix dimension times that.
"""

from __future__ import annotations

import numpy as np

from .intlinalg import IntMatrix


def as_array(m: IntMatrix | list, p: int) -> np.ndarray:
    if isinstance(m, IntMatrix):
        if m.rows == 0 or m.cols == 0:
            return np.zeros((m.rows, m.cols), dtype=np.int64)
        return np.array(m.tolists(), dtype=np.int64) % p
    a = np.array(m, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    return a % p


def to_intmatrix(a: np.ndarray) -> IntMatrix:
    rows, cols = (a.shape if a.ndim == 2 else (len(a), 0))
    # ndarray.tolist() yields plain Python ints in one C pass
    return IntMatrix(rows, cols, tuple(map(tuple, a.tolist())))


def rref(m, p: int):
    """Reduced row echelon form. Returns (array, pivot_columns)."""
    a = as_array(m, p).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c]
        nz = np.nonzero(col)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = (a[r] * inv) % p
        other = np.nonzero(a[:, c])[0]
        other = other[other != r]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m, p: int) -> int:
    return len(rref(m, p)[1])


def kernel_basis(m, p: int) -> IntMatrix:
    """Columns form a basis of {x : m @ x == 0 over F_p}."""
    a = as_array(m, p)
    rows, cols = a.shape
    r, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for i, pc in enumerate(pivots):
            basis[pc, k] = (-r[i, fc]) % p
    return to_intmatrix(basis)


def solve(b, c, p: int) -> IntMatrix:
    """Solve b @ y == c over F_p; b must have full column rank."""
    bb = as_array(b, p)
    cc = as_array(c, p)
    aug = np.concatenate([bb, cc], axis=1)
    r, pivots = rref(aug, p)
    ncols = bb.shape[1]
    if any(pc >= ncols for pc in pivots):
        raise ValueError("no solution over F_p")
    if len(pivots) != ncols:
        raise ValueError("solve over F_p needs full column rank")
    y = np.zeros((ncols, cc.shape[1]), dtype=np.int64)
    for i, pc in enumerate(pivots):
        y[pc] = r[i, ncols:]
    return to_intmatrix(y)


def mat_mul(a, b, p: int) -> IntMatrix:
    return to_intmatrix((as_array(a, p) @ as_array(b, p)) % p)


def is_invertible(m, p: int) -> bool:
    a = as_array(m, p)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]
