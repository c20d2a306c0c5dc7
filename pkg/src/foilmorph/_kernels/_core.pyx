# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled geometry kernels: similarity, intersection detection, blending.

Semantics mirror ``_pure.py``; the tight loops avoid NumPy dispatch
overhead on the short (F+1)-length vectors that dominate GA runtime.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

IMPLEMENTATION = "cython"


def similarity(cnp.ndarray[cnp.float64_t, ndim=1] a not None,
               cnp.ndarray[cnp.float64_t, ndim=1] b not None):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i
    cdef double acc = 0.0
    cdef double d
    for i in range(n):
        d = a[i] - b[i]
        acc += -d if d < 0.0 else d
    return 2.0 / (n - 1) * acc


def detect_self_intersection(cnp.ndarray[cnp.float64_t, ndim=1] y not None):
    cdef Py_ssize_t F = y.shape[0] - 1
    cdef Py_ssize_t half = F // 2
    cdef Py_ssize_t i
    cdef double t
    cdef long prev = 0, cur = 0
    # b[i] = sign(y[half-1-i] - y[half+1+i]); report True on a zero among
    # b[0..half-2] or a negative adjacent product.
    for i in range(half):
        t = y[half - 1 - i] - y[half + 1 + i]
        cur = 1 if t > 0.0 else (-1 if t < 0.0 else 0)
        if i > 0 and prev * cur < 0:
            return True
        if i < half - 1 and cur == 0:
            return True
        prev = cur
    return False


def blend(cnp.ndarray[cnp.float64_t, ndim=2] baselines not None,
          cnp.ndarray[cnp.float64_t, ndim=1] weights not None):
    cdef Py_ssize_t n = baselines.shape[0]
    cdef Py_ssize_t m = baselines.shape[1]
    cdef Py_ssize_t i, j
    cdef double total = 0.0
    cdef double wi
    for i in range(n):
        total += weights[i]
    out_arr = np.zeros(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = out_arr
    for i in range(n):
        wi = weights[i] / total
        if wi == 0.0:
            continue
        for j in range(m):
            out[j] += wi * baselines[i, j]
    return out_arr
