"""Pure-Python kernels.

Reference implementation of the hot loops; ``_ckernels.pyx`` mirrors it
operation for operation so both backends return bit-identical results.
"""

from __future__ import annotations

import math

import numpy as np

NORM_MAX, NORM_MIN, NORM_AVE, NORM_GAV = 0, 1, 2, 3


def norm_factor(n: int, m: int, code: int) -> float:
    if code == NORM_MAX:
        return float(max(n, m))
    if code == NORM_MIN:
        return float(min(n, m))
    if code == NORM_AVE:
        return (n + m) / 2.0
    if code == NORM_GAV:
        return math.sqrt(float(n * m))
    raise ValueError(f"bad normalisation code {code}")


def _hungarian(w: list[list[float]], n: int, m: int) -> tuple[float, list[int]]:
    """Maximum-weight assignment of all ``n`` rows into ``m >= n`` columns.

    Shortest-augmenting-path Hungarian method with row/column potentials,
    O(n^2 m).  Returns the total (summed in row order) and the column of
    every row.
    """
    inf = math.inf
    u = [0.0] * (n + 1)
    v = [0.0] * (m + 1)
    p = [0] * (m + 1)
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [inf] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = inf
            j1 = 0
            row = w[i0 - 1]
            ui0 = u[i0]
            for j in range(1, m + 1):
                if not used[j]:
                    cur = -row[j - 1] - ui0 - v[j]
                    if cur < minv[j]:
                        minv[j] = cur
                        way[j] = j0
                    if minv[j] < delta:
                        delta = minv[j]
                        j1 = j
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    col = [0] * n
    for j in range(1, m + 1):
        if p[j]:
            col[p[j] - 1] = j - 1
    total = 0.0
    for i in range(n):
        total += w[i][col[i]]
    return total, col


def max_assignment(w) -> tuple[float, np.ndarray, np.ndarray]:
    """Maximum-weight one-to-one matching of size ``min(n, m)``.

    Returns ``(total, rows, cols)`` with pairs ordered by row.  When there are
    more rows than columns the problem is solved on the transpose.
    """
    w = np.asarray(w, dtype=np.float64)
    n, m = w.shape
    if n == 0 or m == 0:
        return 0.0, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    if n <= m:
        total, col = _hungarian(w.tolist(), n, m)
        return total, np.arange(n, dtype=np.int64), np.asarray(col, dtype=np.int64)
    total, row_of_col = _hungarian(w.T.tolist(), m, n)
    rows = np.asarray(row_of_col, dtype=np.int64)
    order = np.argsort(rows, kind="stable")
    return total, rows[order], np.arange(m, dtype=np.int64)[order]


def assignment_block(S, indptr, indices, rank, norm_code, start, stop, out):
    """Fill ``out[i, j]`` (``start <= i < stop``, ``j >= i``) with normalised
    maximum-assignment scores between resources ``i`` and ``j``.

    ``S`` is the concept-by-concept similarity table, resources are CSR rows
    of ``indices`` into it, and ``rank`` fixes the orientation of each pair so
    the result never depends on argument order.
    """
    n_res = len(indptr) - 1
    for i in range(start, stop):
        a = indices[indptr[i] : indptr[i + 1]]
        for j in range(i, n_res):
            b = indices[indptr[j] : indptr[j + 1]]
            if rank[j] < rank[i]:
                rows, cols = b, a
            else:
                rows, cols = a, b
            nr, nc = len(rows), len(cols)
            sub = S[np.ix_(rows, cols)]
            if nr <= nc:
                total, _ = _hungarian(sub.tolist(), nr, nc)
            else:
                total, _ = _hungarian(sub.T.tolist(), nc, nr)
            out[i, j] = total / norm_factor(nr, nc, norm_code)


def directed_block(S, weights, indptr, indices, start, stop, out):
    """Fill ``out[i, j]`` with the average of both directed best-match scores."""
    n_res = len(indptr) - 1
    for i in range(start, stop):
        a = indices[indptr[i] : indptr[i + 1]]
        wa = weights[a].tolist()
        for j in range(i, n_res):
            b = indices[indptr[j] : indptr[j + 1]]
            wb = weights[b].tolist()
            sub = S[np.ix_(a, b)].tolist()
            ab = _directed_rows(sub, wa)
            ba = _directed_cols(sub, wb)
            out[i, j] = 0.5 * (ab + ba)


def _directed_rows(sub, w):
    num = 0.0
    den = 0.0
    for x, row in enumerate(sub):
        mx = -math.inf
        for s in row:
            if s > mx:
                mx = s
        num += w[x] * mx
        den += w[x]
    return num / den


def _directed_cols(sub, w):
    num = 0.0
    den = 0.0
    for y in range(len(w)):
        mx = -math.inf
        for row in sub:
            if row[y] > mx:
                mx = row[y]
        num += w[y] * mx
        den += w[y]
    return num / den
