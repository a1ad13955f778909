"""Synthetic labeled corpora with a controllable planted signal.

Heavy-loss users are generated with longer and denser tweet bursts,
higher tweet frequency, mentions concentrated on few targets (low
mention entropy), a narrow single-pool vocabulary (low topic and
content diversity), more urls, and slightly larger follower counts.
Stable users get the opposite.  Per-user jitter overlaps the classes
on every knob except burst timing, so single non-burst features are
informative but not decisive.  effect_strength interpolates both
classes toward a common midpoint, so at 0.0 the classes are drawn from
identical distributions and any downstream accuracy above chance is a
leak.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from followdrop.corpus import Tweet, UserRecord, serialize

_TOPIC_POOL_SIZE = 400
_COMMON_POOL_SIZE = 120
_STOPWORD_POOL = (
    "the", "and", "to", "of", "a", "in", "is", "it", "you", "that",
    "was", "for", "on", "are", "with", "as", "this", "have", "from",
    "they",
)
_BADWORD_POOL = ("idiot", "stupid", "trash", "loser", "awful")


@dataclass(frozen=True)
class SynthConfig:
    n_users: int = 2000
    balance: float = 0.5
    effect_strength: float = 1.0
    seed: int = 0
    base_time: int = 1_500_000_000


def _validate(cfg: SynthConfig) -> None:
    if cfg.n_users < 2:
        raise ValueError("n_users must be at least 2")
    if not 0.0 <= cfg.balance <= 1.0:
        raise ValueError("balance must be in [0, 1]")
    if not 0.0 <= cfg.effect_strength <= 1.0:
        raise ValueError("effect_strength must be in [0, 1]")
    if cfg.base_time < 0:
        raise ValueError("base_time must be >= 0")


_KNOBS = {
    # name: (value for heavy-loss class at e=1, value for stable at e=1)
    "n_tweets_base": (26.0, 14.0),
    "burst_size": (7.0, 1.0),
    "intra_gap": (200.0, 800.0),
    "mention_targets": (2.0, 15.0),
    "url_prob": (0.3, 0.1),
    "pool_purity": (1.0, 0.5),
    "vocab_breadth": (40.0, 240.0),
    "followers_hi": (30000.0, 20000.0),
}

# per-user half-widths; identical for both classes, so effect 0 still
# collapses them.  Wide enough that every knob except the burst timing
# overlaps between classes: burst shape is the one clean signal.
_JITTER = {
    "n_tweets_base": 8.0,
    "burst_size": 0.0,
    "intra_gap": 100.0,
    "mention_targets": 6.0,
    "url_prob": 0.15,
    "pool_purity": 0.3,
    "vocab_breadth": 120.0,
    "followers_hi": 0.0,
}


def _class_params(loser: bool, e: float) -> dict:
    # linear pull toward the shared midpoint, so e = 0 collapses the classes
    sign = 1.0 if loser else -1.0
    out = {}
    for name, (lo_val, st_val) in _KNOBS.items():
        mid = (lo_val + st_val) / 2.0
        half = (lo_val - st_val) / 2.0
        out[name] = mid + sign * e * half
    return out


def _user_params(loser: bool, e: float, rng: np.random.Generator) -> dict:
    params = _class_params(loser, e)
    for name, width in _JITTER.items():
        if width > 0.0:
            params[name] += float(rng.uniform(-width, width))
    return params


def _make_tweets(uid: str, rng: np.random.Generator, params: dict,
                 all_ids: list, base_time: int) -> list:
    n_tweets = int(rng.integers(round(params["n_tweets_base"]) - 3,
                                round(params["n_tweets_base"]) + 4))
    n_tweets = max(n_tweets, 2)

    n_targets = max(1, int(round(params["mention_targets"])))
    targets = [all_ids[i] for i in
               rng.choice(len(all_ids), size=min(n_targets, len(all_ids)),
                          replace=False)]

    # per-user vocabulary: a slice of the primary topic pool plus, when
    # purity < 1, a slice of the other pool
    breadth = max(8, int(round(params["vocab_breadth"])))
    primary = int(rng.integers(0, 2))
    n_primary = max(4, int(round(params["pool_purity"] * breadth)))
    n_other = max(0, breadth - n_primary)
    pools = ("a", "b")
    words = [f"topic{pools[primary]}{i:03d}" for i in
             rng.choice(_TOPIC_POOL_SIZE, size=min(n_primary, _TOPIC_POOL_SIZE),
                        replace=False)]
    if n_other > 0:
        words += [f"topic{pools[1 - primary]}{i:03d}" for i in
                  rng.choice(_TOPIC_POOL_SIZE,
                             size=min(n_other, _TOPIC_POOL_SIZE),
                             replace=False)]
    words += [f"common{i:03d}" for i in
              rng.choice(_COMMON_POOL_SIZE, size=8, replace=False)]

    burst_size = max(1, int(round(params["burst_size"])))
    intra = params["intra_gap"]
    t = base_time + int(rng.integers(0, 1_000_000))
    stamps: list[int] = []
    while len(stamps) < n_tweets:
        size = max(1, int(burst_size + rng.integers(-1, 2)))
        for i in range(size):
            if len(stamps) == n_tweets:
                break
            if i > 0:
                gap = int(np.clip(intra + rng.integers(-80, 81), 10, 999))
                t += gap
            stamps.append(t)
        t += int(rng.integers(2500, 9000))

    tweets = []
    for j, ts in enumerate(stamps):
        n_words = int(rng.integers(5, 10))
        content = [words[i] for i in rng.integers(0, len(words), n_words)]
        n_stop = int(round(0.45 * n_words)) + 1
        stops = [_STOPWORD_POOL[i] for i in
                 rng.integers(0, len(_STOPWORD_POOL), n_stop)]
        parts = content + stops
        if rng.random() < 0.02:
            parts.append(_BADWORD_POOL[int(rng.integers(0, len(_BADWORD_POOL)))])
        order = rng.permutation(len(parts))
        parts = [parts[i] for i in order]
        mentions: list[str] = []
        if rng.random() < 0.6:
            target = targets[int(rng.integers(0, len(targets)))]
            if target != uid:
                parts.insert(0, f"@{target}")
                mentions.append(target)
        urls: list[str] = []
        if rng.random() < params["url_prob"]:
            tag = "".join("abcdefghij"[d] for d in rng.integers(0, 10, 6))
            url = f"http://t.ex/{tag}"
            parts.append(url)
            urls.append(url)
        tweets.append(Tweet(id=f"{uid}-t{j:04d}", author_id=uid,
                            timestamp=int(ts), text=" ".join(parts),
                            mentions=tuple(mentions), urls=tuple(urls)))
    return tweets


def generate(cfg: SynthConfig) -> list:
    """Labeled user records; class proportions match balance within 1."""
    _validate(cfg)
    rng = np.random.default_rng(cfg.seed)
    n_losers = int(round(cfg.n_users * cfg.balance))
    all_ids = [f"u{i:05d}" for i in range(cfg.n_users)]
    e = cfg.effect_strength

    records = []
    for i, uid in enumerate(all_ids):
        loser = i < n_losers
        params = _user_params(loser, e, rng)
        tweets = _make_tweets(uid, rng, params, all_ids, cfg.base_time)
        followers_t0 = int(rng.integers(1000, int(params["followers_hi"])))
        if loser:
            loss = rng.uniform(0.35, 0.8)
            followers_t1 = int(round(followers_t0 * (1.0 - loss)))
        else:
            change = rng.uniform(-0.015, 0.015)
            followers_t1 = int(round(followers_t0 * (1.0 + change)))
        followees_t0 = int(rng.integers(50, 5000))
        records.append(UserRecord(
            user_id=uid,
            followers_t0=followers_t0,
            followers_t1=followers_t1,
            followees_t0=followees_t0,
            has_description=bool(rng.random() < 0.8),
            is_verified=bool(rng.random() < 0.1),
            tweets=tuple(tweets),
        ))
    return records


def generate_to_file(cfg: SynthConfig, path: str | Path) -> list:
    records = generate(cfg)
    serialize(records, path)
    return records
