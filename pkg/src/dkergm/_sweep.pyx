# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled sweep over a contiguous range of edge bitmasks."""

import numpy as np
cimport numpy as cnp
from libcpp.string cimport string
from libcpp.unordered_map cimport unordered_map
from cython.operator cimport dereference as deref, preincrement as inc

cnp.import_array()

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil

cdef enum:
    MAXN = 8
    MAXSLOTS = 28


def tally(int n, long long start, long long stop, bint bidegree=False, bint restricted=False):
    """Distinct statistic rows and their multiplicities over masks in [start, stop).

    Rows are degree histograms (``row[k]`` = nodes of degree k) or, with
    ``bidegree``, edge counts per degree-pair class in lexicographic order
    over 1 <= k1 <= k2 <= n-1.  ``restricted`` skips graphs with an
    isolated node.  Returns ``(rows, counts)`` with rows sorted.
    """
    if n < 1 or n > MAXN:
        raise ValueError(f"compiled sweep supports 1 <= n <= {MAXN}")
    if start < 0 or stop < start or stop > (1LL << (n * (n - 1) // 2)):
        raise ValueError("mask range out of bounds")

    cdef int P = n * (n - 1) // 2
    cdef int width = P if bidegree else n
    cdef int pi[MAXSLOTS]
    cdef int pj[MAXSLOTS]
    cdef int pidx[MAXN][MAXN]
    cdef int deg[MAXN]
    cdef int s, i, j, v, k1, k2, idx, iso
    cdef long long r
    cdef unsigned long long mm
    cdef string key
    cdef unordered_map[string, long long] table
    cdef unordered_map[string, long long].iterator it

    s = 0
    for j in range(n):
        for i in range(j):
            pi[s] = i
            pj[s] = j
            s += 1
    idx = 0
    for k1 in range(1, n):
        for k2 in range(k1, n):
            pidx[k1][k2] = idx
            pidx[k2][k1] = idx
            idx += 1

    key.resize(width)
    with nogil:
        for r in range(start, stop):
            for v in range(n):
                deg[v] = 0
            mm = <unsigned long long>r
            while mm:
                s = __builtin_ctzll(mm)
                deg[pi[s]] += 1
                deg[pj[s]] += 1
                mm &= mm - 1
            if restricted:
                iso = 0
                for v in range(n):
                    if deg[v] == 0:
                        iso = 1
                if iso:
                    continue
            for v in range(width):
                key[v] = 0
            if bidegree:
                mm = <unsigned long long>r
                while mm:
                    s = __builtin_ctzll(mm)
                    key[pidx[deg[pi[s]]][deg[pj[s]]]] += 1
                    mm &= mm - 1
            else:
                for v in range(n):
                    key[deg[v]] += 1
            table[key] += 1

    cdef Py_ssize_t m = table.size()
    rows = np.zeros((m, width), dtype=np.uint8)
    counts = np.zeros(m, dtype=np.int64)
    cdef cnp.uint8_t[:, ::1] R = rows
    cdef cnp.int64_t[::1] C = counts
    cdef Py_ssize_t a = 0
    it = table.begin()
    while it != table.end():
        for v in range(width):
            R[a, v] = <cnp.uint8_t>deref(it).first[v]
        C[a] = deref(it).second
        a += 1
        inc(it)
    if m > 1:
        order = np.lexsort(rows.T[::-1])
        rows, counts = rows[order], counts[order]
    return rows, counts
