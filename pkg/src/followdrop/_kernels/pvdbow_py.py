"""NumPy fallback for the PV-DBOW negative-sampling training epoch.

Follows the same update schedule as the compiled kernel.  Dot products
go through BLAS here, so results agree with the compiled path only to
floating-point tolerance, not bit-for-bit.
"""

from __future__ import annotations

import math

import numpy as np

MAX_EXP = 6.0


def pvdbow_epoch(doc_of, word_of, doc_vecs, word_vecs, negs, n_neg,
                 sig_table, lr0, lr_end, t_done, t_total):
    """One epoch over all (doc, word) pairs; mutates both vector tables.

    Returns (summed loss, number of pair updates).
    """
    table_size = len(sig_table)
    scale = table_size / (2.0 * MAX_EXP)
    n = len(word_of)
    loss = 0.0
    pairs = 0
    for i in range(n):
        d = doc_of[i]
        wpos = word_of[i]
        lr = lr0 - (lr0 - lr_end) * ((t_done + i) / t_total)
        dv = doc_vecs[d]
        err = np.zeros_like(dv)
        for j in range(n_neg + 1):
            if j == 0:
                w = wpos
                label = 1.0
            else:
                w = negs[i * n_neg + (j - 1)]
                if w == wpos:
                    continue
                label = 0.0
            wv = word_vecs[w]
            f = float(np.dot(dv, wv))
            if f >= MAX_EXP:
                sig = 1.0
            elif f <= -MAX_EXP:
                sig = 0.0
            else:
                sig = sig_table[int((f + MAX_EXP) * scale)]
            g = (label - sig) * lr
            prob = sig if label == 1.0 else 1.0 - sig
            loss += -math.log(prob if prob > 1e-12 else 1e-12)
            pairs += 1
            err += g * wv
            wv += g * dv
        dv += err
    return loss, pairs


def pvdbow_infer_epoch(word_ids, vec, word_vecs, negs, n_neg, sig_table,
                       lr0, lr_end, t_done, t_total):
    """Like pvdbow_epoch for a single document; word vectors stay frozen."""
    table_size = len(sig_table)
    scale = table_size / (2.0 * MAX_EXP)
    n = len(word_ids)
    loss = 0.0
    pairs = 0
    for i in range(n):
        wpos = word_ids[i]
        lr = lr0 - (lr0 - lr_end) * ((t_done + i) / t_total)
        err = np.zeros_like(vec)
        for j in range(n_neg + 1):
            if j == 0:
                w = wpos
                label = 1.0
            else:
                w = negs[i * n_neg + (j - 1)]
                if w == wpos:
                    continue
                label = 0.0
            wv = word_vecs[w]
            f = float(np.dot(vec, wv))
            if f >= MAX_EXP:
                sig = 1.0
            elif f <= -MAX_EXP:
                sig = 0.0
            else:
                sig = sig_table[int((f + MAX_EXP) * scale)]
            g = (label - sig) * lr
            prob = sig if label == 1.0 else 1.0 - sig
            loss += -math.log(prob if prob > 1e-12 else 1e-12)
            pairs += 1
            err += g * wv
        vec += err
    return loss, pairs
