# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; same algorithms and operation order as ``_pykernels``."""

import numpy as np

from libc.math cimport INFINITY, sqrt
from libc.stdlib cimport free, malloc

cdef enum:
    NORM_MAX = 0
    NORM_MIN = 1
    NORM_AVE = 2
    NORM_GAV = 3


cdef inline double _norm(Py_ssize_t n, Py_ssize_t m, int code) noexcept nogil:
    if code == NORM_MAX:
        return <double>(n if n > m else m)
    if code == NORM_MIN:
        return <double>(n if n < m else m)
    if code == NORM_AVE:
        return (n + m) / 2.0
    return sqrt(<double>(n * m))


def norm_factor(Py_ssize_t n, Py_ssize_t m, int code):
    return _norm(n, m, code)


cdef struct Workspace:
    double* u
    double* v
    double* minv
    double* w
    Py_ssize_t* p
    Py_ssize_t* way
    Py_ssize_t* col
    char* used
    Py_ssize_t cap


cdef int _ws_init(Workspace* ws, Py_ssize_t cap) noexcept nogil:
    ws.cap = cap
    ws.u = <double*>malloc((cap + 1) * sizeof(double))
    ws.v = <double*>malloc((cap + 1) * sizeof(double))
    ws.minv = <double*>malloc((cap + 1) * sizeof(double))
    ws.w = <double*>malloc((cap * cap + 1) * sizeof(double))
    ws.p = <Py_ssize_t*>malloc((cap + 1) * sizeof(Py_ssize_t))
    ws.way = <Py_ssize_t*>malloc((cap + 1) * sizeof(Py_ssize_t))
    ws.col = <Py_ssize_t*>malloc((cap + 1) * sizeof(Py_ssize_t))
    ws.used = <char*>malloc((cap + 1) * sizeof(char))
    if (ws.u == NULL or ws.v == NULL or ws.minv == NULL or ws.w == NULL or ws.p == NULL
            or ws.way == NULL or ws.col == NULL or ws.used == NULL):
        return -1
    return 0


cdef void _ws_free(Workspace* ws) noexcept nogil:
    free(ws.u); free(ws.v); free(ws.minv); free(ws.w)
    free(ws.p); free(ws.way); free(ws.col); free(ws.used)


cdef double _hungarian(Workspace* ws, Py_ssize_t n, Py_ssize_t m) noexcept nogil:
    # ws.w holds the n x m weight matrix row-major, n <= m; maximises
    cdef Py_ssize_t i, j, j0, j1, i0
    cdef double delta, cur, ui0, total
    cdef double* w = ws.w
    for j in range(m + 1):
        ws.v[j] = 0.0
        ws.p[j] = 0
        ws.way[j] = 0
    for i in range(n + 1):
        ws.u[i] = 0.0
    for i in range(1, n + 1):
        ws.p[0] = i
        j0 = 0
        for j in range(m + 1):
            ws.minv[j] = INFINITY
            ws.used[j] = 0
        while True:
            ws.used[j0] = 1
            i0 = ws.p[j0]
            delta = INFINITY
            j1 = 0
            ui0 = ws.u[i0]
            for j in range(1, m + 1):
                if not ws.used[j]:
                    cur = -w[(i0 - 1) * m + (j - 1)] - ui0 - ws.v[j]
                    if cur < ws.minv[j]:
                        ws.minv[j] = cur
                        ws.way[j] = j0
                    if ws.minv[j] < delta:
                        delta = ws.minv[j]
                        j1 = j
            for j in range(m + 1):
                if ws.used[j]:
                    ws.u[ws.p[j]] += delta
                    ws.v[j] -= delta
                else:
                    ws.minv[j] -= delta
            j0 = j1
            if ws.p[j0] == 0:
                break
        while True:
            j1 = ws.way[j0]
            ws.p[j0] = ws.p[j1]
            j0 = j1
            if j0 == 0:
                break
    for j in range(1, m + 1):
        if ws.p[j]:
            ws.col[ws.p[j] - 1] = j - 1
    total = 0.0
    for i in range(n):
        total += w[i * m + ws.col[i]]
    return total


def max_assignment(w):
    """Maximum-weight one-to-one matching of size ``min(n, m)``.

    Returns ``(total, rows, cols)`` with pairs ordered by row.
    """
    cdef double[:, ::1] W = np.ascontiguousarray(w, dtype=np.float64)
    cdef Py_ssize_t n = W.shape[0], m = W.shape[1], i, j, nr, nc
    cdef Workspace ws
    cdef double total
    if n == 0 or m == 0:
        return 0.0, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    transpose = n > m
    nr = m if transpose else n
    nc = n if transpose else m
    if _ws_init(&ws, nc) != 0:
        _ws_free(&ws)
        raise MemoryError()
    try:
        for i in range(nr):
            for j in range(nc):
                ws.w[i * nc + j] = W[j, i] if transpose else W[i, j]
        total = _hungarian(&ws, nr, nc)
        col = np.array([ws.col[i] for i in range(nr)], dtype=np.int64)
    finally:
        _ws_free(&ws)
    if not transpose:
        return total, np.arange(n, dtype=np.int64), col
    order = np.argsort(col, kind="stable")
    return total, col[order], np.arange(m, dtype=np.int64)[order]


def assignment_block(const double[:, ::1] S, const long long[::1] indptr, const long long[::1] indices,
                     const long long[::1] rank, int norm_code, Py_ssize_t start, Py_ssize_t stop,
                     double[:, ::1] out):
    """Normalised maximum-assignment scores for rows ``start:stop`` (``j >= i``)."""
    cdef Py_ssize_t n_res = indptr.shape[0] - 1
    cdef Py_ssize_t i, j, x, y, nr, nc, r0, c0, t, cap = 0
    cdef Workspace ws
    cdef double total
    for i in range(n_res):
        if indptr[i + 1] - indptr[i] > cap:
            cap = indptr[i + 1] - indptr[i]
    if _ws_init(&ws, cap) != 0:
        _ws_free(&ws)
        raise MemoryError()
    with nogil:
        for i in range(start, stop):
            for j in range(i, n_res):
                if rank[j] < rank[i]:
                    r0 = j; c0 = i
                else:
                    r0 = i; c0 = j
                nr = indptr[r0 + 1] - indptr[r0]
                nc = indptr[c0 + 1] - indptr[c0]
                if nr <= nc:
                    for x in range(nr):
                        for y in range(nc):
                            ws.w[x * nc + y] = S[indices[indptr[r0] + x], indices[indptr[c0] + y]]
                    total = _hungarian(&ws, nr, nc)
                else:
                    for y in range(nc):
                        for x in range(nr):
                            ws.w[y * nr + x] = S[indices[indptr[r0] + x], indices[indptr[c0] + y]]
                    total = _hungarian(&ws, nc, nr)
                out[i, j] = total / _norm(nr, nc, norm_code)
    _ws_free(&ws)


def directed_block(const double[:, ::1] S, const double[::1] weights, const long long[::1] indptr,
                   const long long[::1] indices, Py_ssize_t start, Py_ssize_t stop, double[:, ::1] out):
    """Average of both directed weighted best-match scores for rows ``start:stop``."""
    cdef Py_ssize_t n_res = indptr.shape[0] - 1
    cdef Py_ssize_t i, j, x, y, cx, cy
    cdef double num, den, mx, s, ab, ba
    with nogil:
        for i in range(start, stop):
            for j in range(i, n_res):
                num = 0.0
                den = 0.0
                for x in range(indptr[i], indptr[i + 1]):
                    cx = indices[x]
                    mx = -INFINITY
                    for y in range(indptr[j], indptr[j + 1]):
                        s = S[cx, indices[y]]
                        if s > mx:
                            mx = s
                    num += weights[cx] * mx
                    den += weights[cx]
                ab = num / den
                num = 0.0
                den = 0.0
                for y in range(indptr[j], indptr[j + 1]):
                    cy = indices[y]
                    mx = -INFINITY
                    for x in range(indptr[i], indptr[i + 1]):
                        s = S[indices[x], cy]
                        if s > mx:
                            mx = s
                    num += weights[cy] * mx
                    den += weights[cy]
                ba = num / den
                out[i, j] = 0.5 * (ab + ba)
