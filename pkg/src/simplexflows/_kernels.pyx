# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled cone-membership counters for quasi-Monte Carlo solid angles.

Both routines take ``inv`` such that ``c = inv @ u`` are the coordinates of a
sphere point ``u`` in the ray basis, and a C-contiguous ``(N, n)`` point table.
Every point is also tested antipodally (``-u``), which halves the variance of
the estimate on a symmetric table.
"""
import numpy as np



def cone_counts(const double[:, ::1] inv, const double[:, ::1] pts):
    """Return ``(hits_u, hits_minus_u)`` for the cone ``{u : inv @ u >= 0}``."""
    cdef Py_ssize_t N = pts.shape[0]
    cdef Py_ssize_t n = pts.shape[1]
    cdef Py_ssize_t k, i, j
    cdef long pos = 0, neg = 0
    cdef double c
    cdef bint allpos, allneg
    cdef const double* row
    cdef const double* m
    if inv.shape[0] != n or inv.shape[1] != n:
        raise ValueError("inv must be (n, n) matching the table dimension")
    if N == 0:
        return 0, 0
    m = &inv[0, 0]
    with nogil:
        for k in range(N):
            row = &pts[k, 0]
            allpos = True
            allneg = True
            for i in range(n):
                c = 0.0
                for j in range(n):
                    c = c + m[i * n + j] * row[j]
                if c < 0.0:
                    allpos = False
                elif c > 0.0:
                    allneg = False
                if not allpos and not allneg:
                    break
            if allpos:
                pos += 1
            if allneg:
                neg += 1
    return pos, neg


def simplex_cone_counts(const double[:, ::1] inv, const double[:, ::1] pts):
    """Count table points (and antipodes) in each vertex cone of a simplex.

    ``inv`` is the inverse of the edge matrix ``[v1 - v0, ..., vn - v0]``.
    Returns an int64 array of length ``n + 1``; entry ``i`` is the number of
    hits in the cone at vertex ``i``.
    """
    cdef Py_ssize_t N = pts.shape[0]
    cdef Py_ssize_t n = pts.shape[1]
    cdef Py_ssize_t k, i, j, lneg, lpos, nneg, npos
    cdef double c, s
    cdef const double* row
    cdef const double* m
    counts_arr = np.zeros(n + 1, dtype=np.int64)
    cdef long long[::1] counts = counts_arr
    if inv.shape[0] != n or inv.shape[1] != n:
        raise ValueError("inv must be (n, n) matching the table dimension")
    if N == 0:
        return counts_arr
    m = &inv[0, 0]
    with nogil:
        for k in range(N):
            row = &pts[k, 0]
            s = 0.0
            nneg = 0
            npos = 0
            lneg = -1
            lpos = -1
            for i in range(n):
                c = 0.0
                for j in range(n):
                    c = c + m[i * n + j] * row[j]
                s = s + c
                if c < 0.0:
                    nneg += 1
                    lneg = i
                elif c > 0.0:
                    npos += 1
                    lpos = i
                if nneg > 1 and npos > 1:
                    break
            if nneg == 0:
                counts[0] += 1
            elif nneg == 1 and s <= 0.0:
                counts[lneg + 1] += 1
            if npos == 0:
                counts[0] += 1
            elif npos == 1 and s >= 0.0:
                counts[lpos + 1] += 1
    return counts_arr
