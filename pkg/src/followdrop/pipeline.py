"""End-to-end orchestration: dataset prep, cross-validation, training,
ranking, and scoring.

Mention and similarity graphs are built once over the whole corpus
(they are population structures); everything label-dependent or
model-dependent (topic model, embeddings, scaler, classifier, neighbor
votes) is refit per fold on the training portion only.
"""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from followdrop import __version__, _kernels
from followdrop.categories import CategoryLexicon, default_category_lexicon
from followdrop.config import PipelineConfig
from followdrop.corpus import (Label, UserRecord, default_stopwords,
                               filter_eligible, filtered_tokens, label_user,
                               tokenize)
from followdrop.embeddings import (EmbeddingModel, infer_vector,
                                   train_embeddings)
from followdrop.features import (FeatureSchema, baseline_features,
                                 build_schema, assemble_features,
                                 extract_static, minmax_scale_apply,
                                 minmax_scale_fit)
from followdrop.graphs import (build_mention_graph, build_similarity_graph,
                               content_word_set, jaccard,
                               mention_centralities, neighbor_majority,
                               similarity_clustering)
from followdrop.lexical import default_badness_lexicon
from followdrop.metrics import binary_metrics, stratified_folds
from followdrop.mlp import MlpModel, predict_proba, train_mlp
from followdrop.ranking import chi2_rank
from followdrop.serialization import dump_json, dumps_canonical, load_json
from followdrop.topics import TopicModel, infer_topics, topic_diversity, train_lda

_MIN_PARALLEL = 256


def prepare_dataset(records, cfg: PipelineConfig,
                    stopwords=None) -> tuple[list, np.ndarray]:
    """Eligible, labeled users and their 0/1 labels (1 = heavy loss).

    Users labeled neither way are dropped, as are users failing the
    follower-count or language screens.  With balance_classes set the
    larger class is downsampled to the smaller with the config seed.
    """
    stopwords = stopwords or default_stopwords()
    users = []
    labels = []
    for rec in records:
        if not filter_eligible(rec, stopwords=stopwords,
                               english_threshold=cfg.english_threshold):
            continue
        lab = label_user(rec.followers_t0, rec.followers_t1)
        if lab is Label.EXCLUDED:
            continue
        users.append(rec)
        labels.append(1 if lab is Label.LOSER else 0)
    labels_arr = np.asarray(labels, dtype=np.int64)
    if cfg.balance_classes and len(labels_arr):
        rng = np.random.default_rng(cfg.seed)
        keep_idx = []
        counts = {c: int((labels_arr == c).sum()) for c in (0, 1)}
        target = min(counts.values())
        for c in (0, 1):
            idx = np.flatnonzero(labels_arr == c)
            chosen = rng.permutation(idx)[:target]
            keep_idx.extend(chosen.tolist())
        keep_idx.sort()
        users = [users[i] for i in keep_idx]
        labels_arr = labels_arr[keep_idx]
    return users, labels_arr


def user_documents(users, stopwords) -> list:
    """Each user's content words (no mentions, urls, or stopwords)."""
    docs = []
    for u in users:
        doc: list = []
        for tweet in u.tweets:
            doc.extend(filtered_tokens(tokenize(tweet.text), stopwords))
        docs.append(doc)
    return docs


def _static_worker(args):
    user, stopwords, badness, categories, gap = args
    return extract_static(user, stopwords, badness, categories, gap)


def extract_static_all(users, cfg: PipelineConfig, stopwords, badness,
                       categories) -> list:
    workers = cfg.workers if cfg.workers > 0 else (os.cpu_count() or 1)
    if workers <= 1 or len(users) < _MIN_PARALLEL:
        return [extract_static(u, stopwords, badness, categories,
                               cfg.gap_threshold) for u in users]
    args = [(u, stopwords, badness, categories, cfg.gap_threshold)
            for u in users]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_static_worker, args, chunksize=32))


def _fold_seed(seed: int, fold: int) -> int:
    return seed * 1000 + fold + 1


def _assemble_rows(schema, users, idx, static, theta, theta_present,
                   topic_row_of, emb_vecs, emb_present, emb_row_of,
                   cents, sim_clust, simgraph, train_label_map):
    rows = np.empty((len(idx), len(schema.columns)), dtype=np.float64)
    for r, i in enumerate(idx):
        uid = users[i].user_id
        trow = topic_row_of[i]
        erow = emb_row_of[i]
        tdiv = topic_diversity(theta[trow]) if theta_present[trow] else 0.0
        rows[r] = assemble_features(
            schema, static[i], tdiv, bool(theta_present[trow]),
            cents.get(uid), sim_clust.get(uid, 0.0),
            neighbor_majority(simgraph, uid, train_label_map),
            emb_vecs[erow], bool(emb_present[erow]))
    return rows


def _metric_mean(fold_metrics: list) -> dict:
    keys = ("accuracy", "precision", "recall", "f1", "roc_auc")
    out = {}
    for k in keys:
        vals = [m[k] for m in fold_metrics if m[k] is not None]
        out[k] = float(np.mean(vals)) if vals else None
    return out


def _fingerprint(*arrays) -> str:
    h = hashlib.sha256()
    for arr in arrays:
        h.update(dumps_canonical(np.asarray(arr)).encode("utf-8"))
    return h.hexdigest()


def cross_validate(users, labels, cfg: PipelineConfig, stopwords=None,
                   badness=None, categories=None, folds_override=None,
                   capture=False):
    """Stratified k-fold evaluation of the full model and the baseline.

    Returns a report dict; with capture=True returns (report, artifacts)
    where artifacts carries per-fold fingerprints of everything fit on
    the training side (for leakage checks).
    """
    stopwords = stopwords or default_stopwords()
    badness = badness or default_badness_lexicon()
    categories = categories or default_category_lexicon()
    labels = np.asarray(labels, dtype=np.int64)
    if len(users) != len(labels):
        raise ValueError("users and labels length mismatch")

    static = extract_static_all(users, cfg, stopwords, badness, categories)
    docs = user_documents(users, stopwords)
    mention_graph = build_mention_graph(users)
    cents = mention_centralities(mention_graph)
    simgraph = build_similarity_graph(users, stopwords,
                                      cfg.similarity_threshold)
    sim_clust = similarity_clustering(simgraph)
    schema = build_schema(categories.categories, cfg.embed_dim)

    folds = folds_override or stratified_folds(labels, cfg.folds, cfg.seed)
    fold_metrics = []
    base_metrics = []
    artifacts = []
    alpha = None if cfg.lda_alpha <= 0 else cfg.lda_alpha

    for f, (tr, te) in enumerate(folds):
        fs = _fold_seed(cfg.seed, f)
        tr = np.asarray(tr, dtype=np.int64)
        te = np.asarray(te, dtype=np.int64)
        train_docs = [docs[i] for i in tr]
        test_docs = [docs[i] for i in te]
        y_tr = labels[tr]
        y_te = labels[te]

        lda = train_lda(train_docs, cfg.n_topics, alpha=alpha,
                        beta=cfg.lda_beta, iterations=cfg.lda_iterations,
                        seed=fs)
        theta_te, tpres_te = infer_topics(lda, test_docs,
                                          iterations=cfg.lda_infer_iterations,
                                          seed=fs)
        emb = train_embeddings(train_docs, dim=cfg.embed_dim,
                               window=cfg.embed_window,
                               epochs=cfg.embed_epochs,
                               negatives=cfg.embed_negatives,
                               min_count=cfg.embed_min_count, seed=fs)
        te_vecs = np.empty((len(te), cfg.embed_dim), dtype=np.float64)
        te_pres = np.empty(len(te), dtype=bool)
        for r, d in enumerate(test_docs):
            te_vecs[r], te_pres[r] = infer_vector(emb, d, seed=fs)

        train_label_map = {users[i].user_id: int(labels[i]) for i in tr}
        row_of_tr = {int(i): r for r, i in enumerate(tr)}
        row_of_te = {int(i): r for r, i in enumerate(te)}
        X_tr = _assemble_rows(schema, users, tr, static, lda.theta,
                              lda.doc_present, row_of_tr, emb.doc_vectors,
                              emb.doc_present, row_of_tr, cents, sim_clust,
                              simgraph, train_label_map)
        X_te = _assemble_rows(schema, users, te, static, theta_te, tpres_te,
                              row_of_te, te_vecs, te_pres, row_of_te, cents,
                              sim_clust, simgraph, train_label_map)

        scaler = minmax_scale_fit(X_tr)
        model = train_mlp(minmax_scale_apply(scaler, X_tr), y_tr,
                          hidden=cfg.mlp_hidden, lr=cfg.mlp_lr,
                          batch_size=cfg.mlp_batch, epochs=cfg.mlp_epochs,
                          seed=fs)
        p_te = predict_proba(model, minmax_scale_apply(scaler, X_te))
        y_hat = (p_te >= cfg.threshold).astype(np.int64)
        fold_metrics.append(binary_metrics(y_te, y_hat, p_te))

        Xb_tr = np.stack([baseline_features(users[i]) for i in tr])
        Xb_te = np.stack([baseline_features(users[i]) for i in te])
        scaler_b = minmax_scale_fit(Xb_tr)
        model_b = train_mlp(minmax_scale_apply(scaler_b, Xb_tr), y_tr,
                            hidden=cfg.mlp_hidden, lr=cfg.mlp_lr,
                            batch_size=cfg.mlp_batch, epochs=cfg.mlp_epochs,
                            seed=fs)
        pb_te = predict_proba(model_b, minmax_scale_apply(scaler_b, Xb_te))
        yb_hat = (pb_te >= cfg.threshold).astype(np.int64)
        base_metrics.append(binary_metrics(y_te, yb_hat, pb_te))

        if capture:
            artifacts.append({
                "lda": _fingerprint(lda.phi, lda.theta),
                "embeddings": _fingerprint(emb.word_vectors,
                                           emb.doc_vectors),
                "scaler": _fingerprint(scaler.col_min, scaler.col_max),
                "mlp": _fingerprint(*model.weights, *model.biases),
                "train_rows": _fingerprint(X_tr),
                "y_train": _fingerprint(y_tr),
            })

    report = {
        "version": __version__,
        "backend": _kernels.backend_info(),
        "config": cfg.to_dict(),
        "n_users": len(users),
        "n_positive": int(labels.sum()),
        "model": {"folds": fold_metrics, "mean": _metric_mean(fold_metrics)},
        "baseline": {"folds": base_metrics,
                     "mean": _metric_mean(base_metrics)},
    }
    if capture:
        return report, artifacts
    return report


def write_report(report: dict, path) -> None:
    text = json.dumps(report, sort_keys=True, indent=2)
    Path(path).write_text(text + "\n", encoding="utf-8", newline="\n")


class TrainedBundle:
    """Everything needed to score unseen users with a trained pipeline."""

    def __init__(self, cfg: PipelineConfig, schema: FeatureSchema,
                 topic_model: TopicModel, embedding_model: EmbeddingModel,
                 mlp_model: MlpModel, token_sets: dict, train_labels: dict,
                 centralities: dict, sim_clust: dict):
        self.cfg = cfg
        self.schema = schema
        self.topic_model = topic_model
        self.embedding_model = embedding_model
        self.mlp_model = mlp_model
        self.token_sets = token_sets
        self.train_labels = train_labels
        self.centralities = centralities
        self.sim_clust = sim_clust


def train_bundle(users, labels, cfg: PipelineConfig, stopwords=None,
                 badness=None, categories=None) -> TrainedBundle:
    """Fit every stage on the full labeled corpus."""
    stopwords = stopwords or default_stopwords()
    badness = badness or default_badness_lexicon()
    categories = categories or default_category_lexicon()
    labels = np.asarray(labels, dtype=np.int64)

    static = extract_static_all(users, cfg, stopwords, badness, categories)
    docs = user_documents(users, stopwords)
    mention_graph = build_mention_graph(users)
    cents = mention_centralities(mention_graph)
    simgraph = build_similarity_graph(users, stopwords,
                                      cfg.similarity_threshold)
    sim_clust = similarity_clustering(simgraph)
    schema = build_schema(categories.categories, cfg.embed_dim)
    alpha = None if cfg.lda_alpha <= 0 else cfg.lda_alpha
    seed = _fold_seed(cfg.seed, -1)

    lda = train_lda(docs, cfg.n_topics, alpha=alpha, beta=cfg.lda_beta,
                    iterations=cfg.lda_iterations, seed=seed)
    emb = train_embeddings(docs, dim=cfg.embed_dim, window=cfg.embed_window,
                           epochs=cfg.embed_epochs,
                           negatives=cfg.embed_negatives,
                           min_count=cfg.embed_min_count, seed=seed)
    train_label_map = {u.user_id: int(labels[i]) for i, u in enumerate(users)}
    all_idx = np.arange(len(users))
    row_of = {int(i): int(i) for i in all_idx}
    X = _assemble_rows(schema, users, all_idx, static, lda.theta,
                       lda.doc_present, row_of, emb.doc_vectors,
                       emb.doc_present, row_of, cents, sim_clust, simgraph,
                       train_label_map)
    scaler = minmax_scale_fit(X)
    model = train_mlp(minmax_scale_apply(scaler, X), labels,
                      hidden=cfg.mlp_hidden, lr=cfg.mlp_lr,
                      batch_size=cfg.mlp_batch, epochs=cfg.mlp_epochs,
                      seed=seed, scaler=scaler)
    return TrainedBundle(cfg=cfg, schema=schema, topic_model=lda,
                         embedding_model=emb, mlp_model=model,
                         token_sets=dict(simgraph.token_sets),
                         train_labels=train_label_map, centralities=cents,
                         sim_clust=sim_clust)


def rank_features(users, labels, cfg: PipelineConfig, stopwords=None,
                  badness=None, categories=None) -> list:
    """Chi-squared ranking of the unscaled full-corpus feature matrix."""
    bundle = train_bundle(users, labels, cfg, stopwords, badness, categories)
    X = _bundle_matrix(bundle, users, stopwords or default_stopwords(),
                       badness or default_badness_lexicon(),
                       categories or default_category_lexicon())
    return chi2_rank(X, labels, bundle.schema.columns)


def _bundle_matrix(bundle: TrainedBundle, users, stopwords, badness,
                   categories) -> np.ndarray:
    cfg = bundle.cfg
    static = extract_static_all(users, cfg, stopwords, badness, categories)
    docs = user_documents(users, stopwords)
    lda = bundle.topic_model
    emb = bundle.embedding_model
    all_idx = np.arange(len(users))
    row_of = {int(i): int(i) for i in all_idx}
    simgraph = build_similarity_graph(users, stopwords,
                                      cfg.similarity_threshold)
    sim_clust = similarity_clustering(simgraph)
    return _assemble_rows(bundle.schema, users, all_idx, static, lda.theta,
                          lda.doc_present, row_of, emb.doc_vectors,
                          emb.doc_present, row_of, bundle.centralities,
                          sim_clust, simgraph, bundle.train_labels)


def score_users(bundle: TrainedBundle, records, stopwords=None,
                badness=None, categories=None) -> list:
    """Risk scores for arbitrary user records against a trained bundle.

    Unseen users are not part of the training graphs: mention features
    are zero with in_mention_graph 0 unless the id was in the training
    corpus; similarity neighbors are the training users whose content
    overlap clears the pruning threshold.
    """
    stopwords = stopwords or default_stopwords()
    badness = badness or default_badness_lexicon()
    categories = categories or default_category_lexicon()
    cfg = bundle.cfg
    schema = bundle.schema
    results = []
    for rec in records:
        static = extract_static(rec, stopwords, badness, categories,
                                cfg.gap_threshold)
        doc: list = []
        for tweet in rec.tweets:
            doc.extend(filtered_tokens(tokenize(tweet.text), stopwords))
        theta, tpres = infer_topics(bundle.topic_model, [doc],
                                    iterations=cfg.lda_infer_iterations,
                                    seed=cfg.seed)
        tdiv = topic_diversity(theta[0]) if tpres[0] else 0.0
        vec, vpres = infer_vector(bundle.embedding_model, doc, seed=cfg.seed)

        tokens = content_word_set(rec, stopwords)
        votes_pos = 0
        votes_neg = 0
        for uid, other in bundle.token_sets.items():
            if uid == rec.user_id:
                continue
            w = jaccard(tokens, other)
            if w >= cfg.similarity_threshold and w > 0.0:
                if bundle.train_labels.get(uid) == 1:
                    votes_pos += 1
                elif bundle.train_labels.get(uid) == 0:
                    votes_neg += 1
        majority = (1.0 if votes_pos > votes_neg
                    else 0.0 if votes_neg > votes_pos else 0.5)

        row = assemble_features(
            schema, static, tdiv, bool(tpres[0]),
            bundle.centralities.get(rec.user_id),
            bundle.sim_clust.get(rec.user_id, 0.0), majority, vec,
            bool(vpres))
        p = float(predict_proba(bundle.mlp_model, row[None, :])[0])
        presence = {col: bool(row[schema.columns.index(col)])
                    for col in schema.columns if col.startswith("present_")}
        results.append({
            "user_id": rec.user_id,
            "risk": p,
            "predicted_label": int(p >= cfg.threshold),
            "presence": presence,
        })
    return results


def save_bundle(bundle: TrainedBundle, path) -> None:
    from followdrop.embeddings import embedding_model_to_dict
    from followdrop.mlp import mlp_to_dict
    from followdrop.topics import topic_model_to_dict

    obj = {
        "kind": "pipeline_bundle",
        "version": __version__,
        "config": bundle.cfg.to_dict(),
        "columns": list(bundle.schema.columns),
        "category_names": list(bundle.schema.category_names),
        "embed_dim": bundle.schema.embed_dim,
        "topic_model": topic_model_to_dict(bundle.topic_model),
        "embedding_model": embedding_model_to_dict(bundle.embedding_model),
        "mlp_model": mlp_to_dict(bundle.mlp_model),
        "token_sets": {uid: sorted(s) for uid, s in
                       bundle.token_sets.items()},
        "train_labels": bundle.train_labels,
        "centralities": {uid: [c.in_degree, c.out_degree, c.betweenness,
                               c.closeness, c.eigenvector, c.clustering]
                         for uid, c in bundle.centralities.items()},
        "sim_clust": bundle.sim_clust,
    }
    dump_json(obj, path)


def load_bundle(path) -> TrainedBundle:
    from followdrop.config import apply_overrides
    from followdrop.embeddings import embedding_model_from_dict
    from followdrop.graphs import NodeCentrality
    from followdrop.mlp import mlp_from_dict
    from followdrop.topics import topic_model_from_dict

    obj = load_json(path)
    if obj.get("kind") != "pipeline_bundle":
        raise ValueError("not a pipeline bundle file")
    cfg = apply_overrides(PipelineConfig(), obj["config"])
    schema = FeatureSchema(columns=tuple(obj["columns"]),
                           category_names=tuple(obj["category_names"]),
                           embed_dim=int(obj["embed_dim"]))
    cents = {uid: NodeCentrality(*vals)
             for uid, vals in obj["centralities"].items()}
    return TrainedBundle(
        cfg=cfg, schema=schema,
        topic_model=topic_model_from_dict(obj["topic_model"]),
        embedding_model=embedding_model_from_dict(obj["embedding_model"]),
        mlp_model=mlp_from_dict(obj["mlp_model"]),
        token_sets={uid: frozenset(v) for uid, v in obj["token_sets"].items()},
        train_labels={uid: int(v) for uid, v in obj["train_labels"].items()},
        centralities=cents,
        sim_clust={uid: float(v) for uid, v in obj["sim_clust"].items()})
