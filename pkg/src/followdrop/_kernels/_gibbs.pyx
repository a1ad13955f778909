# cython: language_level=3
"""Compiled collapsed Gibbs sampling sweeps.

Mirrors gibbs_py.py operation for operation: same expression grouping,
sequential cumulative sum, and the same right-closed threshold search,
so both backends walk identical chains from identical uniforms.
"""

import numpy as np


def gibbs_train_sweep(int[::1] doc_of, int[::1] word_of, int[::1] z,
                      int[:, ::1] ndk, int[:, ::1] nkw, int[::1] nk,
                      double alpha, double beta, double[::1] u):
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t K = ndk.shape[1]
    cdef Py_ssize_t V = nkw.shape[1]
    cdef double vbeta = V * beta
    cdef double[::1] cum = np.empty(K, dtype=np.float64)
    cdef Py_ssize_t i, k, knew
    cdef int d, w
    cdef double total, val, thr
    with nogil:
        for i in range(n):
            d = doc_of[i]
            w = word_of[i]
            k = z[i]
            ndk[d, k] -= 1
            nkw[k, w] -= 1
            nk[k] -= 1
            total = 0.0
            for k in range(K):
                val = ((<double>nkw[k, w] + beta) * (<double>ndk[d, k] + alpha)) / (<double>nk[k] + vbeta)
                total = total + val
                cum[k] = total
            thr = u[i] * cum[K - 1]
            knew = 0
            while knew < K - 1 and cum[knew] <= thr:
                knew += 1
            z[i] = <int>knew
            ndk[d, knew] += 1
            nkw[knew, w] += 1
            nk[knew] += 1


def gibbs_infer_sweep(int[::1] doc_of, int[::1] word_of, int[::1] z,
                      int[:, ::1] ndk, double[:, ::1] phi,
                      double alpha, double[::1] u):
    cdef Py_ssize_t n = z.shape[0]
    cdef Py_ssize_t K = ndk.shape[1]
    cdef double[::1] cum = np.empty(K, dtype=np.float64)
    cdef Py_ssize_t i, k, knew
    cdef int d, w
    cdef double total, thr
    with nogil:
        for i in range(n):
            d = doc_of[i]
            w = word_of[i]
            k = z[i]
            ndk[d, k] -= 1
            total = 0.0
            for k in range(K):
                total = total + phi[k, w] * (<double>ndk[d, k] + alpha)
                cum[k] = total
            thr = u[i] * cum[K - 1]
            knew = 0
            while knew < K - 1 and cum[knew] <= thr:
                knew += 1
            z[i] = <int>knew
            ndk[d, knew] += 1
