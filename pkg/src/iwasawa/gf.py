"""Dense linear algebra over F_p on int64 numpy arrays.

Row spaces are the unit of currency: a subspace is the row space of a
matrix, canonically represented by its reduced row echelon form.
"""

from __future__ import annotations

import numpy as np


def rref(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form with zero rows dropped, and the pivot columns."""
    m = np.array(a, dtype=np.int64) % p
    if m.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), -1, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(col[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a, p: int) -> np.ndarray:
    """Basis (as rows) of {x : a x = 0}."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    r, piv = rref(a, p)
    free = [c for c in range(n) if c not in set(piv)]
    out = np.zeros((len(free), n), dtype=np.int64)
    for k, fc in enumerate(free):
        out[k, fc] = 1
        for i, pc in enumerate(piv):
            out[k, pc] = (-r[i, fc]) % p
    return out


def reduce_against(basis: np.ndarray, pivots: list[int], v, p: int) -> np.ndarray:
    """Remainder of ``v`` (a vector or a stack of rows) modulo an rref basis."""
    v = np.array(v, dtype=np.int64) % p
    flat = v.ndim == 1
    if flat:
        v = v[None, :]
    for row, c in zip(basis, pivots):
        coef = v[:, c].copy()
        if coef.any():
            v = (v - np.outer(coef, row)) % p
    return v[0] if flat else v


def in_span(basis: np.ndarray, pivots: list[int], v, p: int) -> bool:
    return not reduce_against(basis, pivots, v, p).any()


def intersect(a, b, p: int) -> np.ndarray:
    """rref basis of rowspace(a) intersected with rowspace(b)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    n = a.shape[1]
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    # x a = y b  <=>  [x | y] [a; -b] = 0
    ker = nullspace(np.vstack([a, (-b) % p]).T, p)
    if ker.shape[0] == 0:
        return np.zeros((0, n), dtype=np.int64)
    return rref((ker[:, : a.shape[0]] @ a) % p, p)[0]


def sum_spaces(a, b, p: int) -> np.ndarray:
    stack = np.vstack([np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)])
    if stack.shape[0] == 0:
        return stack
    return rref(stack, p)[0]
