# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``; same signatures."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, sqrt, fabs
from libc.stdint cimport uint64_t

cnp.import_array()


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil


cdef inline int _parity(uint64_t x) nogil:
    return __builtin_popcountll(x) & 1


def ising_moments(int node_count, edge_masks, couplings, fields, bint include_fields):
    cdef uint64_t[::1] masks = np.ascontiguousarray(edge_masks, dtype=np.uint64)
    cdef double[::1] jv = np.ascontiguousarray(couplings, dtype=np.float64)
    cdef double[::1] hv = np.ascontiguousarray(fields, dtype=np.float64)
    cdef Py_ssize_t m = masks.shape[0]
    cdef Py_ssize_t n = node_count
    cdef Py_ssize_t d = m + (n if include_fields else 0)
    cdef uint64_t nstates = (<uint64_t>1) << n
    cdef uint64_t st
    cdef Py_ssize_t e, i, j
    cdef double energy, shift, w, z
    cdef double[::1] s = np.empty(d, dtype=np.float64)
    cdef double[::1] mean_acc = np.zeros(d, dtype=np.float64)
    cdef double[:, ::1] sec_acc = np.zeros((d, d), dtype=np.float64)

    shift = -1e308
    for st in range(nstates):
        energy = 0.0
        for e in range(m):
            energy += jv[e] * (-1.0 if _parity(st & masks[e]) else 1.0)
        for i in range(n):
            energy += hv[i] * (-1.0 if (st >> i) & 1 else 1.0)
        if energy > shift:
            shift = energy

    z = 0.0
    for st in range(nstates):
        energy = 0.0
        for e in range(m):
            s[e] = -1.0 if _parity(st & masks[e]) else 1.0
            energy += jv[e] * s[e]
        for i in range(n):
            if include_fields:
                s[m + i] = -1.0 if (st >> i) & 1 else 1.0
            energy += hv[i] * (-1.0 if (st >> i) & 1 else 1.0)
        w = exp(energy - shift)
        z += w
        for i in range(d):
            mean_acc[i] += w * s[i]
            for j in range(i, d):
                sec_acc[i, j] += w * s[i] * s[j]

    mean = np.asarray(mean_acc) / z
    second = np.asarray(sec_acc) / z
    iu = np.triu_indices(d, 1)
    second[(iu[1], iu[0])] = second[iu]
    return shift + log(z), mean, second


def jacobi_eigh(a_in, double tol, int max_sweeps):
    cdef double[:, ::1] a = np.array(a_in, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t d = a.shape[0]
    cdef double[:, ::1] v = np.eye(d, dtype=np.float64)
    cdef Py_ssize_t p, q, k
    cdef int sweep
    cdef double total, off, thresh, apq, theta, t, c, s, x, y

    total = 0.0
    for p in range(d):
        for q in range(d):
            total += a[p, q] * a[p, q]
    thresh = tol * sqrt(total)

    for sweep in range(max_sweeps + 1):
        off = 0.0
        for p in range(d):
            for q in range(d):
                if p != q:
                    off += a[p, q] * a[p, q]
        off = sqrt(off)
        if off <= thresh:
            return np.diag(np.asarray(a)).copy(), np.asarray(v), sweep, True
        if sweep == max_sweeps:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if fabs(theta) > 1e150:
                    t = 0.5 / fabs(theta)
                else:
                    t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for k in range(d):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - s * y
                    a[k, q] = s * x + c * y
                for k in range(d):
                    x = a[p, k]
                    y = a[q, k]
                    a[p, k] = c * x - s * y
                    a[q, k] = s * x + c * y
                a[p, q] = 0.0
                a[q, p] = 0.0
                for k in range(d):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = c * x - s * y
                    v[k, q] = s * x + c * y
    return np.diag(np.asarray(a)).copy(), np.asarray(v), max_sweeps, False
