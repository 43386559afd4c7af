"""Fraction-free Gauss-Jordan elimination kernels.

Both kernels run the same pivot sequence and produce identical output.  The
reduction follows Bareiss: after eliminating with pivot ``p`` every row other
than the pivot row becomes ``(p * row - f * pivot_row) / prev`` where ``prev``
is the previous pivot; each division is exact because every intermediate
entry is a minor of the (row-permuted) input.  On exit the pivot rows share
the common pivot value ``den`` and the reduced row echelon form is
``reduced[:rank] / den``.

* ``_ffgj_int64`` is the numba path.  It works in int64 and bails out as soon
  as an entry reaches 2**31, which keeps every product below 2**62.
* ``_ffgj_object`` is the pure-numpy path over object arrays of Python ints
  (arbitrary precision, never overflows).

``ff_gauss_jordan`` dispatches: int64 kernel first when JIT is enabled and the
input fits, object kernel otherwise or on overflow.
"""
from __future__ import annotations

import numpy as np

from ._jit import USE_JIT, njit

ENTRY_LIMIT = 1 << 31


@njit(cache=True, nogil=True)
def _ffgj_int64(a):
    m, n = a.shape
    pivots = np.empty(min(m, n), dtype=np.int64)
    prev = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        best = -1
        best_abs = 0
        for i in range(r, m):
            v = a[i, c]
            if v != 0:
                av = abs(v)
                if best < 0 or av < best_abs:
                    best = i
                    best_abs = av
        if best < 0:
            continue
        if best != r:
            for j in range(n):
                t = a[r, j]
                a[r, j] = a[best, j]
                a[best, j] = t
        p = a[r, c]
        for i in range(m):
            if i == r:
                continue
            f = a[i, c]
            if f == 0 and p == prev:
                continue
            for j in range(n):
                v = (p * a[i, j] - f * a[r, j]) // prev
                if v >= ENTRY_LIMIT or v <= -ENTRY_LIMIT:
                    return r, pivots[:r], prev, True
                a[i, j] = v
        prev = p
        pivots[r] = c
        r += 1
    return r, pivots[:r], prev, False


def _ffgj_object(a):
    m, n = a.shape
    pivots = []
    prev = 1
    r = 0
    for c in range(n):
        if r == m:
            break
        col = a[r:, c]
        nz = np.flatnonzero(col != 0)
        if nz.size == 0:
            continue
        # first occurrence of the smallest magnitude, matching the int64 scan
        mags = [abs(x) for x in col[nz]]
        best = r + int(nz[mags.index(min(mags))])
        if best != r:
            a[[r, best]] = a[[best, r]]
        p = a[r, c]
        f = a[:, c].copy()
        f[r] = 0
        pivot_row = a[r].copy()
        a[:] = (p * a - np.outer(f, pivot_row)) // prev
        a[r] = pivot_row
        prev = p
        pivots.append(c)
        r += 1
    return r, np.array(pivots, dtype=np.int64), prev


def ff_gauss_jordan(rows, *, use_jit: bool | None = None):
    """Reduce an integer matrix.

    ``rows`` is a 2-d array (or nested list) of ints.  Returns
    ``(reduced, rank, pivots, den)`` where ``reduced`` is an object array of
    Python ints.  The input is not modified.
    """
    a = np.array(rows, dtype=object)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d integer matrix, got shape {a.shape}")
    m, n = a.shape
    if m == 0 or n == 0:
        return a.copy(), 0, np.zeros(0, dtype=np.int64), 1
    jit = USE_JIT if use_jit is None else use_jit
    if jit and max(abs(int(x)) for x in a.flat) < ENTRY_LIMIT:
        work = a.astype(np.int64)
        rank, pivots, den, overflow = _ffgj_int64(work)
        if not overflow:
            return work.astype(object), int(rank), pivots.copy(), int(den)
    work = a.copy()
    rank, pivots, den = _ffgj_object(work)
    return work, rank, pivots, int(den)
