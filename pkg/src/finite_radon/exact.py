"""Exact linear algebra over the rationals.

Two independent routes are provided:

* Gauss-Jordan elimination on ``fractions.Fraction`` entries, for rank,
  nullspace and linear solves on a single matrix.
* Fraction-free (Bareiss) elimination on batches of small integer
  matrices held in int64 numpy arrays, for deciding nonsingularity of
  millions of square 0/1 matrices.  Every intermediate value is a minor
  of the input, so with the Hadamard bound in range the arithmetic is
  exact integer arithmetic, not floating point.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


def _to_fractions(rows) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in rows]


def rref(rows):
    """Reduced row echelon form.  Returns (matrix, pivot columns)."""
    m = _to_fractions(rows)
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def nullspace(rows, n_cols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : rows @ x = 0}, one vector per free column."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(n_cols or 0)] for j in range(n_cols or 0)]
    m, pivots = rref(rows)
    n_cols = len(m[0])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * n_cols
        x[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            x[pc] = -m[r][fc]
        basis.append(x)
    return basis


def solve(rows, rhs) -> list[Fraction] | None:
    """One solution of rows @ x = rhs, or None when inconsistent."""
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    n_cols = len(rows[0])
    if n_cols in pivots:
        return None
    x = [Fraction(0)] * n_cols
    for r, pc in enumerate(pivots):
        x[pc] = m[r][n_cols]
    return x


def matvec(rows, x) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in rows]


def batch_determinants(mats: np.ndarray) -> np.ndarray:
    """Exact determinants of a stack of square integer matrices.

    ``mats`` has shape (N, k, k).  Bareiss elimination with row pivoting;
    division by the previous pivot is exact.  Callers must keep inputs
    within int64 range of the Hadamard bound (fine for 0/1 matrices with
    k <= 16 and row weight <= 2).
    """
    a = np.array(mats, dtype=np.int64, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("expected a stack of square matrices")
    n_mats, k, _ = a.shape
    sign = np.ones(n_mats, dtype=np.int64)
    singular = np.zeros(n_mats, dtype=bool)
    prev = np.ones(n_mats, dtype=np.int64)
    rows = np.arange(n_mats)
    for step in range(k):
        col = a[:, step:, step]
        nz = col != 0
        has = nz.any(axis=1)
        singular |= ~has
        piv = step + np.argmax(nz, axis=1)
        swap = piv != step
        if swap.any():
            idx = rows[swap]
            top = a[idx, step, :].copy()
            a[idx, step, :] = a[idx, piv[swap], :]
            a[idx, piv[swap], :] = top
            sign[swap] = -sign[swap]
        # singular matrices get a dummy pivot so the batch stays exact
        p = np.where(has, a[:, step, step], 1)
        a[:, step, step] = p
        if step + 1 < k:
            sub = a[:, step + 1 :, step + 1 :]
            lcol = a[:, step + 1 :, step][:, :, None]
            urow = a[:, step, step + 1 :][:, None, :]
            num = sub * p[:, None, None] - lcol * urow
            a[:, step + 1 :, step + 1 :] = num // prev[:, None, None]
        prev = p
    det = sign * a[:, k - 1, k - 1]
    det[singular] = 0
    return det
