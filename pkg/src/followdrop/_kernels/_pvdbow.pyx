# cython: language_level=3
"""Compiled PV-DBOW negative-sampling updates.

Same schedule as pvdbow_py.py.  Dot products are plain C loops rather
than BLAS calls, so cross-backend agreement is to tolerance only.
"""

import numpy as np

from libc.math cimport log

cdef double MAX_EXP = 6.0


cdef inline double _dot(double[:, ::1] a, Py_ssize_t i,
                        double[:, ::1] b, Py_ssize_t j,
                        Py_ssize_t dim) noexcept nogil:
    cdef double s = 0.0
    cdef Py_ssize_t c
    for c in range(dim):
        s += a[i, c] * b[j, c]
    return s


def pvdbow_epoch(int[::1] doc_of, int[::1] word_of,
                 double[:, ::1] doc_vecs, double[:, ::1] word_vecs,
                 int[::1] negs, int n_neg, double[::1] sig_table,
                 double lr0, double lr_end, long t_done, long t_total):
    cdef Py_ssize_t n = word_of.shape[0]
    cdef Py_ssize_t dim = doc_vecs.shape[1]
    cdef Py_ssize_t table_size = sig_table.shape[0]
    cdef double scale = table_size / (2.0 * MAX_EXP)
    cdef double[::1] err = np.empty(dim, dtype=np.float64)
    cdef Py_ssize_t i, c
    cdef int j, d, w, wpos
    cdef double lr, f, sig, g, label, prob
    cdef double loss = 0.0
    cdef long pairs = 0
    with nogil:
        for i in range(n):
            d = doc_of[i]
            wpos = word_of[i]
            lr = lr0 - (lr0 - lr_end) * ((<double>(t_done + i)) / (<double>t_total))
            for c in range(dim):
                err[c] = 0.0
            for j in range(n_neg + 1):
                if j == 0:
                    w = wpos
                    label = 1.0
                else:
                    w = negs[i * n_neg + (j - 1)]
                    if w == wpos:
                        continue
                    label = 0.0
                f = _dot(doc_vecs, d, word_vecs, w, dim)
                if f >= MAX_EXP:
                    sig = 1.0
                elif f <= -MAX_EXP:
                    sig = 0.0
                else:
                    sig = sig_table[<Py_ssize_t>((f + MAX_EXP) * scale)]
                g = (label - sig) * lr
                prob = sig if label == 1.0 else 1.0 - sig
                loss += -log(prob if prob > 1e-12 else 1e-12)
                pairs += 1
                for c in range(dim):
                    err[c] += g * word_vecs[w, c]
                for c in range(dim):
                    word_vecs[w, c] += g * doc_vecs[d, c]
            for c in range(dim):
                doc_vecs[d, c] += err[c]
    return loss, pairs


def pvdbow_infer_epoch(int[::1] word_ids, double[::1] vec,
                       double[:, ::1] word_vecs,
                       int[::1] negs, int n_neg, double[::1] sig_table,
                       double lr0, double lr_end, long t_done, long t_total):
    cdef Py_ssize_t n = word_ids.shape[0]
    cdef Py_ssize_t dim = vec.shape[0]
    cdef Py_ssize_t table_size = sig_table.shape[0]
    cdef double scale = table_size / (2.0 * MAX_EXP)
    cdef double[::1] err = np.empty(dim, dtype=np.float64)
    cdef Py_ssize_t i, c
    cdef int j, w, wpos
    cdef double lr, f, sig, g, label, prob
    cdef double loss = 0.0
    cdef long pairs = 0
    with nogil:
        for i in range(n):
            wpos = word_ids[i]
            lr = lr0 - (lr0 - lr_end) * ((<double>(t_done + i)) / (<double>t_total))
            for c in range(dim):
                err[c] = 0.0
            for j in range(n_neg + 1):
                if j == 0:
                    w = wpos
                    label = 1.0
                else:
                    w = negs[i * n_neg + (j - 1)]
                    if w == wpos:
                        continue
                    label = 0.0
                f = 0.0
                for c in range(dim):
                    f += vec[c] * word_vecs[w, c]
                if f >= MAX_EXP:
                    sig = 1.0
                elif f <= -MAX_EXP:
                    sig = 0.0
                else:
                    sig = sig_table[<Py_ssize_t>((f + MAX_EXP) * scale)]
                g = (label - sig) * lr
                prob = sig if label == 1.0 else 1.0 - sig
                loss += -log(prob if prob > 1e-12 else 1e-12)
                pairs += 1
                for c in range(dim):
                    err[c] += g * word_vecs[w, c]
            for c in range(dim):
                vec[c] += err[c]
    return loss, pairs
