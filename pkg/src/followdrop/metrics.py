"""Binary classification metrics and stratified fold construction.

Precision, recall and F1 follow the confusion-matrix identities
exactly; an undefined precision (no predicted positives) is reported
as 0.0 with precision_defined set False.  ROC area uses the rank-based
formulation with tied scores counted half.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fp: int
    tn: int
    fn: int


def confusion(y_true, y_pred) -> ConfusionMatrix:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape:
        raise ValueError("length mismatch")
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    tn = int(np.sum((y_true == 0) & (y_pred == 0)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    return ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)


def auc_score(y_true, scores) -> float | None:
    """Rank-based ROC area; ties count half.  None if one class absent."""
    y_true = np.asarray(y_true, dtype=np.int64)
    scores = np.asarray(scores, dtype=np.float64)
    if y_true.shape != scores.shape:
        raise ValueError("length mismatch")
    n_pos = int(np.sum(y_true == 1))
    n_neg = int(np.sum(y_true == 0))
    if n_pos == 0 or n_neg == 0:
        return None
    order = np.argsort(scores, kind="mergesort")
    sorted_scores = scores[order]
    ranks = np.empty(len(scores), dtype=np.float64)
    i = 0
    n = len(scores)
    while i < n:
        j = i
        while j < n and sorted_scores[j] == sorted_scores[i]:
            j += 1
        ranks[order[i:j]] = (i + 1 + j) / 2.0
        i = j
    pos_rank_sum = float(ranks[y_true == 1].sum())
    return (pos_rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def binary_metrics(y_true, y_pred, scores=None) -> dict:
    """Metric dict consistent with the confusion matrix identities."""
    cm = confusion(y_true, y_pred)
    n = cm.tp + cm.fp + cm.tn + cm.fn
    if n == 0:
        raise ValueError("no examples")
    accuracy = (cm.tp + cm.tn) / n
    precision_defined = (cm.tp + cm.fp) > 0
    precision = cm.tp / (cm.tp + cm.fp) if precision_defined else 0.0
    recall = cm.tp / (cm.tp + cm.fn) if (cm.tp + cm.fn) > 0 else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if (precision + recall) > 0 else 0.0)
    roc = auc_score(y_true, scores) if scores is not None else None
    return {
        "accuracy": accuracy,
        "precision": precision,
        "recall": recall,
        "f1": f1,
        "roc_auc": roc,
        "precision_defined": precision_defined,
        "confusion": {"tp": cm.tp, "fp": cm.fp, "tn": cm.tn, "fn": cm.fn},
    }


def stratified_folds(labels, n_folds: int = 10, seed: int = 0) -> list:
    """Disjoint (train, test) index pairs covering every example once.

    Each class is shuffled with the seed and dealt round-robin, so per
    fold the class counts differ from perfect proportion by at most one.
    Raises if any class has fewer examples than folds.
    """
    labels = np.asarray(labels, dtype=np.int64)
    if n_folds < 2:
        raise ValueError("need at least 2 folds")
    rng = np.random.default_rng(seed)
    assignment = np.empty(len(labels), dtype=np.int64)
    for cls in np.unique(labels):
        idx = np.flatnonzero(labels == cls)
        if len(idx) < n_folds:
            raise ValueError(
                f"class {cls} has {len(idx)} examples, fewer than {n_folds} folds")
        perm = rng.permutation(idx)
        assignment[perm] = np.arange(len(perm)) % n_folds
    out = []
    for f in range(n_folds):
        test = np.flatnonzero(assignment == f)
        train = np.flatnonzero(assignment != f)
        out.append((train, test))
    return out
