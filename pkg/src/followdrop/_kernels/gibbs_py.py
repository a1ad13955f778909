"""NumPy fallback for the collapsed Gibbs sampling sweeps.

Arithmetic is kept expression-for-expression identical to the compiled
kernel (same operation order, sequential cumulative sums) so that both
backends produce bit-identical chains given the same uniform draws.
"""

from __future__ import annotations

import numpy as np


def gibbs_train_sweep(doc_of, word_of, z, ndk, nkw, nk, alpha, beta, u):
    """One full sweep over all tokens; mutates z and the count matrices."""
    K = ndk.shape[1]
    V = nkw.shape[1]
    vbeta = V * beta
    for i in range(len(z)):
        d = doc_of[i]
        w = word_of[i]
        k = z[i]
        ndk[d, k] -= 1
        nkw[k, w] -= 1
        nk[k] -= 1
        p = (nkw[:, w] + beta) * (ndk[d, :] + alpha) / (nk + vbeta)
        cum = np.cumsum(p)
        thr = u[i] * cum[-1]
        knew = int(np.searchsorted(cum, thr, side="right"))
        if knew >= K:
            knew = K - 1
        z[i] = knew
        ndk[d, knew] += 1
        nkw[knew, w] += 1
        nk[knew] += 1


def gibbs_infer_sweep(doc_of, word_of, z, ndk, phi, alpha, u):
    """Sweep with the topic-word distribution frozen; mutates z and ndk."""
    K = ndk.shape[1]
    for i in range(len(z)):
        d = doc_of[i]
        w = word_of[i]
        k = z[i]
        ndk[d, k] -= 1
        p = phi[:, w] * (ndk[d, :] + alpha)
        cum = np.cumsum(p)
        thr = u[i] * cum[-1]
        knew = int(np.searchsorted(cum, thr, side="right"))
        if knew >= K:
            knew = K - 1
        z[i] = knew
        ndk[d, knew] += 1
