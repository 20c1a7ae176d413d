# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror ``_fallback``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin
from libc.stdint cimport int64_t, uint64_t

cnp.import_array()


def cut_diagonal(int n, cnp.int64_t[:, ::1] edges):
    """Cut size of every bitstring, vertex ``i`` on bit ``i``.

    Same doubling as the fallback: with vertex ``k`` on side 0 its lower
    neighbours on side 1 are cut, with ``k`` on side 1 the others are.
    """
    cdef int64_t size = (<int64_t>1) << n
    cdef cnp.ndarray[cnp.int32_t, ndim=1] out = np.zeros(size, dtype=np.int32)
    cdef int[:] o = out
    cdef Py_ssize_t e, m = edges.shape[0]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] lmask_arr = np.zeros(max(n, 1), dtype=np.int64)
    cdef int64_t[:] lmask = lmask_arr
    cdef int64_t i, j, z, half, mask
    cdef int cnt, pc
    for e in range(m):
        i = edges[e, 0]
        j = edges[e, 1]
        if i < j:
            lmask[j] |= (<int64_t>1) << i
        else:
            lmask[i] |= (<int64_t>1) << j
    for i in range(n):
        half = (<int64_t>1) << i
        mask = lmask[i]
        cnt = 0
        z = mask
        while z:
            cnt += 1
            z &= z - 1
        for z in range(half):
            pc = _popcount(z & mask)
            o[half + z] = o[z] + cnt - pc
            o[z] += pc
    return out


cdef inline int _popcount(uint64_t x) nogil:
    cdef int c = 0
    while x:
        x &= x - 1
        c += 1
    return c


def apply_phase(double complex[::1] state, int[::1] diag, double complex[::1] table):
    cdef Py_ssize_t k, size = state.shape[0]
    for k in range(size):
        state[k] = state[k] * table[diag[k]]


def apply_mixer(double complex[::1] state, int n, double beta):
    """In place ``exp(-i beta X)`` on every qubit."""
    cdef double c = cos(beta)
    cdef double complex ms = -1j * sin(beta)
    cdef Py_ssize_t size = state.shape[0]
    cdef Py_ssize_t q, stride, base, k, lo, hi
    cdef double complex a, b
    for q in range(n):
        stride = (<Py_ssize_t>1) << q
        base = 0
        while base < size:
            for k in range(base, base + stride):
                lo = k
                hi = k + stride
                a = state[lo]
                b = state[hi]
                state[lo] = c * a + ms * b
                state[hi] = ms * a + c * b
            base += 2 * stride


def edge_zz(double[::1] probs, cnp.int64_t[:, ::1] edges):
    """``<Z_i Z_j>`` for every edge from a probability vector."""
    cdef Py_ssize_t e, m = edges.shape[0]
    cdef int64_t z, size = probs.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(m, dtype=np.float64)
    cdef double[:] o = out
    cdef double pz
    for z in range(size):
        pz = probs[z]
        for e in range(m):
            if ((z >> edges[e, 0]) ^ (z >> edges[e, 1])) & 1:
                o[e] -= pz
            else:
                o[e] += pz
    return out


def maxcut_gray(int n, cnp.int64_t[:, ::1] edges):
    """Exhaustive MaxCut with vertex 0 pinned to side 0.

    Walks the reflected Gray code over vertices ``1..n-1`` so each step
    flips one vertex and updates the cut in O(degree).
    """
    cdef Py_ssize_t m = edges.shape[0], e
    cdef cnp.ndarray[cnp.int64_t, ndim=1] deg = np.zeros(n, dtype=np.int64)
    for e in range(m):
        deg[edges[e, 0]] += 1
        deg[edges[e, 1]] += 1
    cdef cnp.ndarray[cnp.int64_t, ndim=1] start = np.zeros(n + 1, dtype=np.int64)
    cdef int v
    for v in range(n):
        start[v + 1] = start[v] + deg[v]
    cdef cnp.ndarray[cnp.int64_t, ndim=1] nbr = np.zeros(2 * m, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] fill = start[:n].copy()
    cdef int a, b
    for e in range(m):
        a = edges[e, 0]
        b = edges[e, 1]
        nbr[fill[a]] = b
        fill[a] += 1
        nbr[fill[b]] = a
        fill[b] += 1

    cdef uint64_t mask = 0, best_mask = 0, step, total
    cdef int64_t cut = 0, best = 0, k
    cdef int flip, same
    if n <= 1:
        return 0, 0
    total = (<uint64_t>1) << (n - 1)
    for step in range(1, total):
        # index of lowest set bit of step selects the vertex to flip
        flip = 1
        k = step
        while not (k & 1):
            k >>= 1
            flip += 1
        same = 0
        for e in range(start[flip], start[flip + 1]):
            if ((mask >> flip) & 1) == ((mask >> nbr[e]) & 1):
                same += 1
        # flipping turns uncut incident edges into cut ones and vice versa
        cut += 2 * same - deg[flip]
        mask ^= (<uint64_t>1) << flip
        if cut > best:
            best = cut
            best_mask = mask
    return int(best), int(best_mask)
