"""Distributed bag-of-words document embeddings.

Each document gets a dense vector trained to predict its own words
against negative samples drawn from a unigram^0.75 table.  Word order
is ignored.  Inference trains a fresh document vector against frozen
word vectors.  As with topics, all randomness is pre-drawn in Python
from a seeded generator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from followdrop import _kernels
from followdrop.serialization import dump_json, load_json

DEFAULT_DIM = 50
DEFAULT_WINDOW = 5
DEFAULT_EPOCHS = 20
DEFAULT_NEGATIVES = 5
DEFAULT_MIN_COUNT = 2
DEFAULT_LR = 0.025
DEFAULT_LR_END = 0.0001

_MAX_EXP = 6.0
_SIG_TABLE_SIZE = 4096
_NEG_TABLE_SIZE = 1 << 18


def _build_sigmoid_table() -> np.ndarray:
    xs = (np.arange(_SIG_TABLE_SIZE, dtype=np.float64) / _SIG_TABLE_SIZE
          * 2.0 - 1.0) * _MAX_EXP
    return 1.0 / (1.0 + np.exp(-xs))


SIGMOID_TABLE = _build_sigmoid_table()


def _build_negative_table(counts: np.ndarray) -> np.ndarray:
    weights = np.asarray(counts, dtype=np.float64) ** 0.75
    cum = np.cumsum(weights)
    cum /= cum[-1]
    positions = (np.arange(_NEG_TABLE_SIZE, dtype=np.float64) + 0.5) / _NEG_TABLE_SIZE
    table = np.searchsorted(cum, positions, side="left").astype(np.int32)
    return np.minimum(table, len(counts) - 1)


@dataclass
class EmbeddingModel:
    dim: int
    window: int
    epochs: int
    negatives: int
    min_count: int
    seed: int
    vocab: dict                    # token -> row in word_vectors
    counts: np.ndarray             # (V,) training-corpus frequencies
    word_vectors: np.ndarray       # (V, dim)
    doc_vectors: np.ndarray        # (D, dim)
    doc_present: np.ndarray        # (D,) True where the doc had tokens
    epoch_losses: list = field(default_factory=list)


def train_embeddings(documents: list[list[str]], dim: int = DEFAULT_DIM,
                     window: int = DEFAULT_WINDOW, epochs: int = DEFAULT_EPOCHS,
                     negatives: int = DEFAULT_NEGATIVES,
                     min_count: int = DEFAULT_MIN_COUNT, seed: int = 0,
                     lr: float = DEFAULT_LR,
                     lr_end: float = DEFAULT_LR_END) -> EmbeddingModel:
    """Train document vectors on tokenized documents.

    Tokens below min_count are dropped.  Documents left with no tokens
    keep a zero vector and are flagged in doc_present.
    """
    if dim < 2:
        raise ValueError("dim must be at least 2")
    if epochs < 1 or negatives < 1:
        raise ValueError("epochs and negatives must be positive")
    if len(documents) < 2:
        raise ValueError("need at least two documents")

    freq: dict[str, int] = {}
    for doc in documents:
        for tok in doc:
            freq[tok] = freq.get(tok, 0) + 1
    vocab: dict[str, int] = {}
    counts_list: list[int] = []
    for doc in documents:
        for tok in doc:
            if freq[tok] >= min_count and tok not in vocab:
                vocab[tok] = len(vocab)
                counts_list.append(freq[tok])
    if not vocab:
        raise ValueError("vocabulary is empty after min_count filter")
    counts = np.asarray(counts_list, dtype=np.int64)

    docs_ids = [[vocab[t] for t in doc if t in vocab] for doc in documents]
    present = np.array([len(ids) > 0 for ids in docs_ids], dtype=bool)
    doc_of = []
    word_of = []
    for d, ids in enumerate(docs_ids):
        doc_of.extend([d] * len(ids))
        word_of.extend(ids)
    doc_of = np.asarray(doc_of, dtype=np.int32)
    word_of = np.asarray(word_of, dtype=np.int32)
    n_tokens = len(word_of)

    D = len(documents)
    V = len(vocab)
    rng = np.random.default_rng(seed)
    doc_vecs = ((rng.random((D, dim)) - 0.5) / dim).astype(np.float64)
    word_vecs = np.zeros((V, dim), dtype=np.float64)
    neg_table = _build_negative_table(counts)

    t_total = n_tokens * epochs
    losses = []
    for epoch in range(epochs):
        raw = rng.integers(0, _NEG_TABLE_SIZE, size=n_tokens * negatives)
        negs = neg_table[raw]
        loss, pairs = _kernels.pvdbow_epoch(
            doc_of, word_of, doc_vecs, word_vecs, negs, negatives,
            SIGMOID_TABLE, lr, lr_end, epoch * n_tokens, t_total)
        losses.append(loss / pairs if pairs else 0.0)
    doc_vecs[~present] = 0.0

    return EmbeddingModel(dim=dim, window=window, epochs=epochs,
                          negatives=negatives, min_count=min_count,
                          seed=int(seed), vocab=vocab, counts=counts,
                          word_vectors=word_vecs, doc_vectors=doc_vecs,
                          doc_present=present, epoch_losses=losses)


def infer_vector(model: EmbeddingModel, document: list[str],
                 epochs: int | None = None,
                 seed: int = 0) -> tuple[np.ndarray, bool]:
    """Train a vector for one new document with word vectors frozen.

    Returns (vector, present).  A document with no in-vocab tokens gets
    a zero vector and present False.
    """
    if epochs is None:
        epochs = model.epochs
    ids = [model.vocab[t] for t in document if t in model.vocab]
    if not ids:
        return np.zeros(model.dim, dtype=np.float64), False
    word_ids = np.asarray(ids, dtype=np.int32)
    n_tokens = len(word_ids)
    rng = np.random.default_rng(seed)
    vec = ((rng.random(model.dim) - 0.5) / model.dim).astype(np.float64)
    neg_table = _build_negative_table(model.counts)
    t_total = n_tokens * epochs
    for epoch in range(epochs):
        raw = rng.integers(0, _NEG_TABLE_SIZE, size=n_tokens * model.negatives)
        negs = neg_table[raw]
        _kernels.pvdbow_infer_epoch(
            word_ids, vec, model.word_vectors, negs, model.negatives,
            SIGMOID_TABLE, DEFAULT_LR, DEFAULT_LR_END,
            epoch * n_tokens, t_total)
    return vec, True


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    """Cosine of the angle between two vectors; 0 if either is zero."""
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.dot(a, b) / (na * nb))


def embedding_model_to_dict(model: EmbeddingModel) -> dict:
    tokens = sorted(model.vocab, key=model.vocab.get)
    return {
        "kind": "embedding_model",
        "dim": model.dim,
        "window": model.window,
        "epochs": model.epochs,
        "negatives": model.negatives,
        "min_count": model.min_count,
        "seed": model.seed,
        "tokens": tokens,
        "counts": model.counts,
        "word_vectors": model.word_vectors,
        "doc_vectors": model.doc_vectors,
        "doc_present": model.doc_present.astype(np.int8),
        "epoch_losses": [float(x) for x in model.epoch_losses],
    }


def embedding_model_from_dict(obj: dict) -> EmbeddingModel:
    if obj.get("kind") != "embedding_model":
        raise ValueError("not an embedding model container")
    vocab = {tok: i for i, tok in enumerate(obj["tokens"])}
    return EmbeddingModel(dim=int(obj["dim"]), window=int(obj["window"]),
                          epochs=int(obj["epochs"]),
                          negatives=int(obj["negatives"]),
                          min_count=int(obj["min_count"]), seed=int(obj["seed"]),
                          vocab=vocab, counts=np.asarray(obj["counts"]),
                          word_vectors=obj["word_vectors"],
                          doc_vectors=obj["doc_vectors"],
                          doc_present=np.asarray(obj["doc_present"]).astype(bool),
                          epoch_losses=list(obj["epoch_losses"]))


def save_embedding_model(model: EmbeddingModel, path: str | Path) -> None:
    dump_json(embedding_model_to_dict(model), path)


def load_embedding_model(path: str | Path) -> EmbeddingModel:
    return embedding_model_from_dict(load_json(path))
