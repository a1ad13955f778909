"""Per-user scalar features computed from tweet text and counts.

Shannon entropies use natural log throughout. Operations whose input is
degenerate (no tweets, no mentions, ...) return None — the "feature
undefined" marker; assembly later imputes 0.0 and sets a presence flag.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .corpus import Tweet, filtered_tokens, tokenize

__all__ = [
    "BadnessLexicon",
    "load_badness_lexicon",
    "default_badness_lexicon",
    "shannon_entropy",
    "badness_coefficient",
    "content_diversity",
    "tweet_rate",
    "mention_coeff",
    "mention_entropy",
    "url_rate",
    "tweet_length_features",
    "SHORT_LEN",
    "NEAR_MAX_LEN",
]

SHORT_LEN = 30
NEAR_MAX_LEN = 126  # 90% of the classic 140-char limit

BadnessLexicon = Mapping[str, float]


def load_badness_lexicon(path: str | Path) -> dict[str, float]:
    """Read `word<TAB>score` lines, scores in [0, 1]."""
    lexicon: dict[str, float] = {}
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                word, raw = line.split("\t")
                score = float(raw)
            except ValueError as exc:
                raise ValueError(f"bad lexicon line {line_no}: {line!r}") from exc
            if not 0.0 <= score <= 1.0:
                raise ValueError(f"score out of [0,1] on line {line_no}: {score}")
            lexicon[word.lower()] = score
    return lexicon


_DEFAULT_BADNESS: dict[str, float] | None = None


def default_badness_lexicon() -> dict[str, float]:
    global _DEFAULT_BADNESS
    if _DEFAULT_BADNESS is None:
        ref = resources.files("followdrop.data").joinpath("badwords_demo.tsv")
        with resources.as_file(ref) as path:
            _DEFAULT_BADNESS = load_badness_lexicon(path)
    return _DEFAULT_BADNESS


def shannon_entropy(counts: Iterable[float]) -> float:
    """-sum p ln p over the normalized counts, with 0 ln 0 = 0."""
    counts = [c for c in counts if c > 0]
    total = sum(counts)
    if total <= 0:
        return 0.0
    return -sum((c / total) * math.log(c / total) for c in counts)


def badness_coefficient(tweets: Sequence[Tweet], lexicon: BadnessLexicon) -> float | None:
    """Mean over tweets of (sum of token badness scores / token count).

    All tokens count toward the denominator; tweets with zero tokens are
    skipped. None when no tweet has tokens.
    """
    per_tweet = []
    for tweet in tweets:
        tokens = tokenize(tweet.text)
        if not tokens:
            continue
        per_tweet.append(sum(lexicon.get(t, 0.0) for t in tokens) / len(tokens))
    if not per_tweet:
        return None
    return sum(per_tweet) / len(per_tweet)


def content_diversity(tweets: Sequence[Tweet], stopwords: frozenset[str]) -> float | None:
    """Entropy of the content-word multiset across all tweets (nats)."""
    counts = Counter()
    for tweet in tweets:
        counts.update(filtered_tokens(tokenize(tweet.text), stopwords))
    if not counts:
        return None
    return shannon_entropy(counts.values())


def tweet_rate(tweets: Sequence[Tweet]) -> float | None:
    """(last timestamp - first timestamp) / number of tweets; None if < 2 tweets."""
    if len(tweets) < 2:
        return None
    times = [t.timestamp for t in tweets]
    return (max(times) - min(times)) / len(tweets)


def mention_coeff(tweets: Sequence[Tweet]) -> float | None:
    if not tweets:
        return None
    total = sum(len(t.mentions) for t in tweets)
    return total / len(tweets)


def mention_entropy(tweets: Sequence[Tweet]) -> float | None:
    """Entropy of the mentioned-handle distribution (nats); None if no mentions."""
    counts = Counter()
    for tweet in tweets:
        counts.update(tweet.mentions)
    if not counts:
        return None
    return shannon_entropy(counts.values())


def url_rate(tweets: Sequence[Tweet]) -> float | None:
    if not tweets:
        return None
    total = sum(len(t.urls) for t in tweets)
    return total / len(tweets)


@dataclass(frozen=True)
class TweetLengthFeatures:
    mean_len: float
    frac_short: float
    frac_near_max: float


def tweet_length_features(
    tweets: Sequence[Tweet],
    short_len: int = SHORT_LEN,
    near_max_len: int = NEAR_MAX_LEN,
) -> TweetLengthFeatures | None:
    """Mean character length plus the short / near-limit tweet fractions."""
    if not tweets:
        return None
    lengths = [len(t.text) for t in tweets]
    n = len(lengths)
    return TweetLengthFeatures(
        mean_len=sum(lengths) / n,
        frac_short=sum(1 for L in lengths if L < short_len) / n,
        frac_near_max=sum(1 for L in lengths if L >= near_max_len) / n,
    )
