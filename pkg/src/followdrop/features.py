"""Feature schema, per-user assembly, and min-max scaling.

Column order is fixed: lexical block, burst block, topic diversity,
category scores, graph features, presence flags, profile counts, then
embedding dimensions.  Extractors signal "not computable" with None;
assembly imputes 0.0 and records the gap in a presence flag so the
classifier can tell imputed zeros from real ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from followdrop import bursts as bursts_mod
from followdrop import lexical
from followdrop.categories import CategoryLexicon, category_scores
from followdrop.corpus import UserRecord
from followdrop.graphs import NodeCentrality

LEXICAL_COLUMNS = (
    "badness",
    "content_diversity",
    "tweet_rate",
    "mention_coeff",
    "mention_entropy",
    "url_rate",
    "mean_tweet_len",
    "frac_short_tweets",
    "frac_near_max_tweets",
    "n_tweets",
    "has_description",
    "is_verified",
)

BURST_COLUMNS = (
    "mean_inter_burst_gap",
    "mean_burst_period",
    "max_burst_period",
    "min_burst_period",
    "burst_count",
)

GRAPH_COLUMNS = (
    "mention_in_degree",
    "mention_out_degree",
    "mention_betweenness",
    "mention_closeness",
    "mention_eigenvector",
    "mention_clustering",
    "in_mention_graph",
    "sim_clustering",
    "sim_neighbor_majority",
)

PRESENCE_COLUMNS = (
    "present_badness",
    "present_content_diversity",
    "present_tweet_rate",
    "present_mention_entropy",
    "present_bursts",
    "present_topics",
    "present_embedding",
)

PROFILE_COLUMNS = (
    "followers_t0",
    "followees_t0",
    "followee_follower_ratio",
)

BASELINE_COLUMNS = PROFILE_COLUMNS


@dataclass(frozen=True)
class FeatureSchema:
    columns: tuple
    category_names: tuple
    embed_dim: int


def build_schema(category_names: Sequence[str], embed_dim: int) -> FeatureSchema:
    cols = list(LEXICAL_COLUMNS)
    cols.extend(BURST_COLUMNS)
    cols.append("topic_diversity")
    cols.extend(f"cat_{name}" for name in category_names)
    cols.extend(GRAPH_COLUMNS)
    cols.extend(PRESENCE_COLUMNS)
    cols.extend(PROFILE_COLUMNS)
    cols.extend(f"emb_{i:03d}" for i in range(embed_dim))
    return FeatureSchema(columns=tuple(cols),
                         category_names=tuple(category_names),
                         embed_dim=embed_dim)


def extract_static(user: UserRecord, stopwords: frozenset,
                   badness_lexicon: Mapping[str, float],
                   category_lexicon: CategoryLexicon,
                   gap_threshold: float) -> dict:
    """Model-free per-user features; None marks a value with no basis.

    Safe to run in parallel across users: depends only on the record
    and the fixed lexicons.
    """
    tweets = user.tweets
    out: dict = {}
    out["badness"] = lexical.badness_coefficient(tweets, badness_lexicon)
    out["content_diversity"] = lexical.content_diversity(tweets, stopwords)
    out["tweet_rate"] = lexical.tweet_rate(tweets)
    out["mention_coeff"] = lexical.mention_coeff(tweets)
    out["mention_entropy"] = lexical.mention_entropy(tweets)
    out["url_rate"] = lexical.url_rate(tweets)
    length = lexical.tweet_length_features(tweets)
    out["mean_tweet_len"] = None if length is None else length.mean_len
    out["frac_short_tweets"] = None if length is None else length.frac_short
    out["frac_near_max_tweets"] = None if length is None else length.frac_near_max
    out["n_tweets"] = float(len(tweets))
    out["has_description"] = float(user.has_description)
    out["is_verified"] = float(user.is_verified)

    if tweets:
        stamps = [t.timestamp for t in tweets]
        found = bursts_mod.detect_bursts(stamps, gap_threshold)
        feats = bursts_mod.burst_features(found)
    else:
        feats = None
    if feats is None:
        for col in BURST_COLUMNS:
            out[col] = None
    else:
        out["mean_inter_burst_gap"] = feats.mean_inter_burst_gap
        out["mean_burst_period"] = feats.mean_period
        out["max_burst_period"] = feats.max_period
        out["min_burst_period"] = feats.min_period
        out["burst_count"] = float(feats.burst_count)

    cats = category_scores(tweets, category_lexicon)
    for i, name in enumerate(category_lexicon.categories):
        out[f"cat_{name}"] = None if cats is None else cats[i]

    out["followers_t0"] = float(user.followers_t0)
    out["followees_t0"] = float(user.followees_t0)
    if user.followers_t0 > 0:
        out["followee_follower_ratio"] = user.followees_t0 / user.followers_t0
    else:
        out["followee_follower_ratio"] = 0.0
    return out


def assemble_features(schema: FeatureSchema, static: dict,
                      topic_div: float, topic_present: bool,
                      centrality: NodeCentrality | None,
                      sim_clustering: float, sim_majority: float,
                      embedding: np.ndarray, embedding_present: bool) -> np.ndarray:
    """One feature row in schema order, missing values imputed to 0."""
    values: dict = {}

    def put(col: str, raw) -> bool:
        present = raw is not None
        values[col] = float(raw) if present else 0.0
        return present

    present_badness = put("badness", static["badness"])
    present_cdiv = put("content_diversity", static["content_diversity"])
    present_rate = put("tweet_rate", static["tweet_rate"])
    put("mention_coeff", static["mention_coeff"])
    present_ment = put("mention_entropy", static["mention_entropy"])
    put("url_rate", static["url_rate"])
    put("mean_tweet_len", static["mean_tweet_len"])
    put("frac_short_tweets", static["frac_short_tweets"])
    put("frac_near_max_tweets", static["frac_near_max_tweets"])
    put("n_tweets", static["n_tweets"])
    put("has_description", static["has_description"])
    put("is_verified", static["is_verified"])
    present_bursts = True
    for col in BURST_COLUMNS:
        present_bursts = put(col, static[col]) and present_bursts
    values["topic_diversity"] = float(topic_div) if topic_present else 0.0
    for name in schema.category_names:
        put(f"cat_{name}", static[f"cat_{name}"])

    if centrality is None:
        for col in GRAPH_COLUMNS[:7]:
            values[col] = 0.0
    else:
        values["mention_in_degree"] = centrality.in_degree
        values["mention_out_degree"] = centrality.out_degree
        values["mention_betweenness"] = centrality.betweenness
        values["mention_closeness"] = centrality.closeness
        values["mention_eigenvector"] = centrality.eigenvector
        values["mention_clustering"] = centrality.clustering
        values["in_mention_graph"] = 1.0
    values["sim_clustering"] = float(sim_clustering)
    values["sim_neighbor_majority"] = float(sim_majority)

    values["present_badness"] = float(present_badness)
    values["present_content_diversity"] = float(present_cdiv)
    values["present_tweet_rate"] = float(present_rate)
    values["present_mention_entropy"] = float(present_ment)
    values["present_bursts"] = float(present_bursts)
    values["present_topics"] = float(topic_present)
    values["present_embedding"] = float(embedding_present)

    values["followers_t0"] = static["followers_t0"]
    values["followees_t0"] = static["followees_t0"]
    values["followee_follower_ratio"] = static["followee_follower_ratio"]

    emb = np.asarray(embedding, dtype=np.float64)
    if emb.shape != (schema.embed_dim,):
        raise ValueError("embedding dimension does not match schema")
    for i in range(schema.embed_dim):
        values[f"emb_{i:03d}"] = float(emb[i]) if embedding_present else 0.0

    row = np.empty(len(schema.columns), dtype=np.float64)
    for j, col in enumerate(schema.columns):
        row[j] = values[col]
    if not np.isfinite(row).all():
        raise ValueError("non-finite feature value after assembly")
    return row


def baseline_features(user: UserRecord) -> np.ndarray:
    """Count-only view: followers, followees, and their ratio."""
    ratio = user.followees_t0 / user.followers_t0 if user.followers_t0 > 0 else 0.0
    return np.array([float(user.followers_t0), float(user.followees_t0), ratio],
                    dtype=np.float64)


@dataclass
class ScalerParams:
    col_min: np.ndarray
    col_max: np.ndarray


def minmax_scale_fit(X: np.ndarray) -> ScalerParams:
    X = np.asarray(X, dtype=np.float64)
    if X.size == 0:
        raise ValueError("empty training matrix")
    return ScalerParams(col_min=X.min(axis=0), col_max=X.max(axis=0))


def minmax_scale_apply(params: ScalerParams, X: np.ndarray) -> np.ndarray:
    """Map columns to [0,1]; constant columns to 0; out-of-range clipped."""
    X = np.asarray(X, dtype=np.float64)
    span = params.col_max - params.col_min
    safe = np.where(span > 0, span, 1.0)
    scaled = (X - params.col_min) / safe
    scaled = np.where(span > 0, scaled, 0.0)
    return np.clip(scaled, 0.0, 1.0)


def write_feature_csv(path, schema: FeatureSchema, user_ids: Sequence[str],
                      X: np.ndarray, y: Sequence[int]) -> None:
    """Feature matrix dump with a schema header row."""
    import csv

    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["user_id", "label", *schema.columns])
        for i, uid in enumerate(user_ids):
            writer.writerow([uid, int(y[i]), *[repr(float(v)) for v in X[i]]])
