"""Topic modeling via collapsed Gibbs sampling.

Training estimates document-topic and topic-word distributions from
tokenized documents.  Inference folds new documents in against a frozen
topic-word table.  All randomness comes from a seeded generator in the
driver; the kernels only consume pre-drawn uniforms, so results are
reproducible for a given seed on either backend.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from followdrop import _kernels
from followdrop.serialization import dump_json, load_json

DEFAULT_BETA = 0.01
DEFAULT_ITERATIONS = 500
DEFAULT_INFER_ITERATIONS = 100


@dataclass
class TopicModel:
    n_topics: int
    alpha: float
    beta: float
    seed: int
    vocab: dict          # token -> column index in phi
    phi: np.ndarray      # (K, V) topic-word distribution
    theta: np.ndarray    # (D, K) document-topic mixtures for training docs
    doc_present: np.ndarray  # (D,) True where the doc had in-vocab tokens


def _flatten(docs_ids: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
    doc_of = []
    word_of = []
    for d, ids in enumerate(docs_ids):
        doc_of.extend([d] * len(ids))
        word_of.extend(ids)
    return (np.asarray(doc_of, dtype=np.int32),
            np.asarray(word_of, dtype=np.int32))


def train_lda(documents: list[list[str]], n_topics: int,
              alpha: float | None = None, beta: float = DEFAULT_BETA,
              iterations: int = DEFAULT_ITERATIONS, seed: int = 0) -> TopicModel:
    """Fit a topic model on tokenized documents.

    alpha defaults to 50 / n_topics.  Documents that end up empty keep a
    uniform mixture and are flagged in doc_present.
    """
    if n_topics < 2:
        raise ValueError("n_topics must be at least 2")
    if iterations < 1:
        raise ValueError("iterations must be positive")
    if not documents:
        raise ValueError("no documents")
    if alpha is None:
        alpha = 50.0 / n_topics
    vocab: dict[str, int] = {}
    docs_ids: list[list[int]] = []
    for doc in documents:
        ids = []
        for tok in doc:
            idx = vocab.setdefault(tok, len(vocab))
            ids.append(idx)
        docs_ids.append(ids)
    if not vocab:
        raise ValueError("all documents are empty")

    D = len(documents)
    K = n_topics
    V = len(vocab)
    doc_of, word_of = _flatten(docs_ids)
    n_tokens = len(doc_of)

    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=n_tokens).astype(np.int32)
    ndk = np.zeros((D, K), dtype=np.int32)
    nkw = np.zeros((K, V), dtype=np.int32)
    nk = np.zeros(K, dtype=np.int32)
    np.add.at(ndk, (doc_of, z), 1)
    np.add.at(nkw, (z, word_of), 1)
    np.add.at(nk, z, 1)

    for _ in range(iterations):
        u = rng.random(n_tokens)
        _kernels.gibbs_train_sweep(doc_of, word_of, z, ndk, nkw, nk,
                                   alpha, beta, u)

    nd = ndk.sum(axis=1)
    theta = (ndk + alpha) / (nd[:, None] + K * alpha)
    phi = (nkw + beta) / (nk[:, None] + V * beta)
    present = np.array([len(ids) > 0 for ids in docs_ids], dtype=bool)
    return TopicModel(n_topics=K, alpha=float(alpha), beta=float(beta),
                      seed=int(seed), vocab=vocab, phi=phi, theta=theta,
                      doc_present=present)


def infer_topics(model: TopicModel, documents: list[list[str]],
                 iterations: int = DEFAULT_INFER_ITERATIONS,
                 seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Topic mixtures for new documents against a frozen model.

    Out-of-vocabulary tokens are dropped.  Returns (theta, present);
    rows without any in-vocab token are uniform with present False.
    """
    if iterations < 1:
        raise ValueError("iterations must be positive")
    K = model.n_topics
    alpha = model.alpha
    docs_ids = [[model.vocab[t] for t in doc if t in model.vocab]
                for doc in documents]
    D = len(documents)
    theta = np.full((D, K), 1.0 / K, dtype=np.float64)
    present = np.array([len(ids) > 0 for ids in docs_ids], dtype=bool)
    if D == 0 or not present.any():
        return theta, present

    doc_of, word_of = _flatten(docs_ids)
    n_tokens = len(doc_of)
    rng = np.random.default_rng(seed)
    z = rng.integers(0, K, size=n_tokens).astype(np.int32)
    ndk = np.zeros((D, K), dtype=np.int32)
    np.add.at(ndk, (doc_of, z), 1)
    for _ in range(iterations):
        u = rng.random(n_tokens)
        _kernels.gibbs_infer_sweep(doc_of, word_of, z, ndk, model.phi,
                                   alpha, u)
    nd = ndk.sum(axis=1)
    full = (ndk + alpha) / (nd[:, None] + K * alpha)
    theta[present] = full[present]
    return theta, present


def topic_diversity(theta_row: np.ndarray) -> float:
    """Shannon entropy (nats) of one document's topic mixture."""
    theta_row = np.asarray(theta_row, dtype=np.float64)
    total = float(theta_row.sum())
    if not math.isfinite(total) or abs(total - 1.0) > 1e-6:
        raise ValueError("topic mixture does not sum to 1")
    if (theta_row < 0).any():
        raise ValueError("topic mixture has negative entries")
    ent = 0.0
    for p in theta_row:
        if p > 0.0:
            ent -= float(p) * math.log(float(p))
    return ent


def topic_model_to_dict(model: TopicModel) -> dict:
    tokens = sorted(model.vocab, key=model.vocab.get)
    return {
        "kind": "topic_model",
        "n_topics": model.n_topics,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
        "tokens": tokens,
        "phi": model.phi,
        "theta": model.theta,
        "doc_present": model.doc_present.astype(np.int8),
    }


def topic_model_from_dict(obj: dict) -> TopicModel:
    if obj.get("kind") != "topic_model":
        raise ValueError("not a topic model container")
    vocab = {tok: i for i, tok in enumerate(obj["tokens"])}
    return TopicModel(n_topics=int(obj["n_topics"]), alpha=float(obj["alpha"]),
                      beta=float(obj["beta"]), seed=int(obj["seed"]),
                      vocab=vocab, phi=obj["phi"], theta=obj["theta"],
                      doc_present=np.asarray(obj["doc_present"]).astype(bool))


def save_topic_model(model: TopicModel, path: str | Path) -> None:
    dump_json(topic_model_to_dict(model), path)


def load_topic_model(path: str | Path) -> TopicModel:
    return topic_model_from_dict(load_json(path))
