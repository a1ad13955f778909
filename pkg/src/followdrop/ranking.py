"""Chi-squared feature ranking over quartile-binned columns.

Continuous columns are discretized at their own quartiles before the
statistic is computed, which makes the ranking invariant to any
strictly monotone rescaling of a column.  Constant columns collapse to
a single bin and score 0.
"""

from __future__ import annotations

import numpy as np


def quartile_bins(x) -> np.ndarray:
    """Bin ids from quartile edges; values on an edge go to the upper bin."""
    x = np.asarray(x, dtype=np.float64)
    edges = np.unique(np.percentile(x, [25.0, 50.0, 75.0]))
    return np.searchsorted(edges, x, side="right")


def chi2_statistic(bins, classes) -> float:
    """Chi-squared of the bins-vs-classes contingency table."""
    bins = np.asarray(bins, dtype=np.int64)
    classes = np.asarray(classes, dtype=np.int64)
    if bins.shape != classes.shape:
        raise ValueError("length mismatch")
    n = len(bins)
    if n == 0:
        raise ValueError("no examples")
    bin_ids, bin_inv = np.unique(bins, return_inverse=True)
    cls_ids, cls_inv = np.unique(classes, return_inverse=True)
    table = np.zeros((len(bin_ids), len(cls_ids)), dtype=np.float64)
    np.add.at(table, (bin_inv, cls_inv), 1.0)
    row = table.sum(axis=1)
    col = table.sum(axis=0)
    expected = np.outer(row, col) / n
    mask = expected > 0
    return float(((table[mask] - expected[mask]) ** 2 / expected[mask]).sum())


def chi2_rank(X, y, names) -> list:
    """Columns of X ranked by descending chi-squared against y.

    Returns (name, statistic) pairs; ties keep schema order.  X should
    be the unscaled matrix (binning is rank-based, so affine scaling
    would not change anything anyway).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != len(y):
        raise ValueError("X and y shapes do not line up")
    if X.shape[1] != len(names):
        raise ValueError("names do not match column count")
    if len(np.unique(y)) < 2:
        raise ValueError("need at least 2 classes")
    stats = []
    for j in range(X.shape[1]):
        stats.append((str(names[j]), chi2_statistic(quartile_bins(X[:, j]), y)))
    order = sorted(range(len(stats)), key=lambda j: -stats[j][1])
    return [stats[j] for j in order]
