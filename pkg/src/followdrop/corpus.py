"""Corpus ingestion, tokenization, eligibility filtering and labeling.

The corpus lives in a JSON Lines file, one user object per line:

    {"user_id": str, "followers_t0": int, "followers_t1": int,
     "followees_t0": int, "has_description": bool, "is_verified": bool,
     "tweets": [{"id": str, "timestamp": int, "text": str,
                 "mentions": [str, ...]?, "urls": [str, ...]?}, ...]}

``mentions``/``urls`` are optional; when absent they are recovered from
the tweet text. ``followers_t1`` is optional too (defaults to
``followers_t0``) so corpora awaiting their second snapshot can still
be scored. All downstream feature code treats the records produced here
as immutable.
"""

from __future__ import annotations

import enum
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

__all__ = [
    "Tweet",
    "UserRecord",
    "Label",
    "IngestError",
    "CorpusFormatError",
    "tokenize",
    "is_mention_token",
    "is_url_token",
    "word_tokens",
    "filtered_tokens",
    "label_user",
    "filter_eligible",
    "english_stopword_ratio",
    "load_stopwords",
    "default_stopwords",
    "ingest",
    "serialize",
]

_WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)
_MENTION_RE = re.compile(r"@\w+", re.UNICODE)

LOSS_THRESHOLD = 0.30
STABLE_THRESHOLD = 0.02
MIN_FOLLOWERS = 1000
DEFAULT_ENGLISH_THRESHOLD = 0.10

_REQUIRED_USER_KEYS = (
    "user_id",
    "followers_t0",
    "followees_t0",
    "has_description",
    "is_verified",
    "tweets",
)
_REQUIRED_TWEET_KEYS = ("id", "timestamp", "text")


class CorpusFormatError(ValueError):
    """Raised in strict mode when a corpus file has malformed lines."""


class Label(enum.Enum):
    LOSER = "loser"
    STABLE = "stable"
    EXCLUDED = "excluded"


@dataclass(frozen=True)
class Tweet:
    id: str
    author_id: str
    timestamp: int
    text: str
    mentions: tuple[str, ...]
    urls: tuple[str, ...]


@dataclass(frozen=True)
class UserRecord:
    user_id: str
    followers_t0: int
    followers_t1: int
    followees_t0: int
    has_description: bool
    is_verified: bool
    tweets: tuple[Tweet, ...]


@dataclass(frozen=True)
class IngestError:
    line_no: int
    message: str


def tokenize(text: str) -> list[str]:
    """Lowercase and split on whitespace/punctuation.

    Chunks starting with ``http://``/``https://`` survive as single url
    tokens; a leading ``@handle`` survives as a mention token. Everything
    else is split into alphanumeric runs (underscores split words but are
    kept inside handles).
    """
    tokens: list[str] = []
    for chunk in text.lower().split():
        if chunk.startswith(("http://", "https://")):
            tokens.append(chunk)
            continue
        m = _MENTION_RE.match(chunk)
        if m is not None:
            tokens.append(m.group(0))
            chunk = chunk[m.end():]
        tokens.extend(_WORD_RE.findall(chunk))
    return tokens


def is_mention_token(token: str) -> bool:
    return token.startswith("@")


def is_url_token(token: str) -> bool:
    return token.startswith(("http://", "https://"))


def word_tokens(tokens: list[str]) -> list[str]:
    """Plain word tokens: mentions and urls dropped."""
    return [t for t in tokens if not is_mention_token(t) and not is_url_token(t)]


def filtered_tokens(tokens: list[str], stopwords: frozenset[str]) -> list[str]:
    """Content words only: mentions, urls and stopwords removed.

    This is the token stream used for the entropy, topic, similarity and
    embedding computations; burst/length/mention features keep raw tokens.
    """
    return [t for t in word_tokens(tokens) if t not in stopwords]


def label_user(followers_t0: int, followers_t1: int) -> Label:
    """Classify follower-count change between the two snapshots.

    Loss of at least 30% -> LOSER; absolute change of at most 2% ->
    STABLE; anything in between -> EXCLUDED. Both thresholds inclusive.
    """
    if followers_t0 <= 0:
        raise ValueError("followers_t0 must be positive to compute a loss fraction")
    change = (followers_t0 - followers_t1) / followers_t0
    if change >= LOSS_THRESHOLD:
        return Label.LOSER
    if abs(change) <= STABLE_THRESHOLD:
        return Label.STABLE
    return Label.EXCLUDED


def english_stopword_ratio(user: UserRecord, stopwords: frozenset[str]) -> float:
    """Fraction of the user's tokens found in the stopword list (0 if no tokens)."""
    total = 0
    hits = 0
    for tweet in user.tweets:
        for tok in tokenize(tweet.text):
            total += 1
            if tok in stopwords:
                hits += 1
    return hits / total if total else 0.0


def filter_eligible(
    user: UserRecord,
    stopwords: frozenset[str] | None = None,
    english_threshold: float = DEFAULT_ENGLISH_THRESHOLD,
) -> bool:
    """Keep users with >= 1000 followers at t0 whose text looks English.

    English detection is a stopword-ratio heuristic; a user with no
    tweets has ratio 0 and is never eligible.
    """
    if user.followers_t0 < MIN_FOLLOWERS:
        return False
    if stopwords is None:
        stopwords = default_stopwords()
    return english_stopword_ratio(user, stopwords) >= english_threshold


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Read a stopword file: one lowercase word per line."""
    words = set()
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            word = line.strip()
            if word:
                words.add(word)
    return frozenset(words)


_DEFAULT_STOPWORDS: frozenset[str] | None = None


def default_stopwords() -> frozenset[str]:
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        text = resources.files("followdrop.data").joinpath("stopwords_en.txt").read_text("utf-8")
        _DEFAULT_STOPWORDS = frozenset(w for w in (ln.strip() for ln in text.splitlines()) if w)
    return _DEFAULT_STOPWORDS


def _parse_tweet(obj: dict, author_id: str) -> Tweet:
    for key in _REQUIRED_TWEET_KEYS:
        if key not in obj:
            raise KeyError(key)
    text = str(obj["text"])
    timestamp = int(obj["timestamp"])
    if timestamp < 0:
        raise ValueError("timestamp must be >= 0")
    tokens = tokenize(text)
    if "mentions" in obj and obj["mentions"] is not None:
        mentions = tuple(str(h).lower().lstrip("@") for h in obj["mentions"])
    else:
        mentions = tuple(t[1:] for t in tokens if is_mention_token(t))
    if "urls" in obj and obj["urls"] is not None:
        urls = tuple(str(u) for u in obj["urls"])
    else:
        urls = tuple(t for t in tokens if is_url_token(t))
    return Tweet(
        id=str(obj["id"]),
        author_id=author_id,
        timestamp=timestamp,
        text=text,
        mentions=mentions,
        urls=urls,
    )


def _parse_user(obj: dict) -> UserRecord:
    for key in _REQUIRED_USER_KEYS:
        if key not in obj:
            raise KeyError(key)
    user_id = str(obj["user_id"])
    followers_t0 = int(obj["followers_t0"])
    # second snapshot is optional: scoring corpora predate it
    followers_t1 = int(obj.get("followers_t1", followers_t0))
    followees_t0 = int(obj["followees_t0"])
    if followers_t0 < 0 or followers_t1 < 0 or followees_t0 < 0:
        raise ValueError("follower/followee counts must be >= 0")
    tweets = sorted(
        (_parse_tweet(t, user_id) for t in obj["tweets"]),
        key=lambda tw: (tw.timestamp, tw.id),
    )
    return UserRecord(
        user_id=user_id,
        followers_t0=followers_t0,
        followers_t1=followers_t1,
        followees_t0=followees_t0,
        has_description=bool(obj["has_description"]),
        is_verified=bool(obj["is_verified"]),
        tweets=tuple(tweets),
    )


def ingest(path: str | Path, strict: bool = False) -> tuple[list[UserRecord], list[IngestError]]:
    """Parse a JSON Lines corpus file.

    Malformed lines are collected as IngestError entries (1-based line
    numbers); with strict=True the first error raises CorpusFormatError.
    """
    records: list[UserRecord] = []
    errors: list[IngestError] = []
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                if not isinstance(obj, dict):
                    raise ValueError("line is not a JSON object")
                records.append(_parse_user(obj))
            except KeyError as exc:
                err = IngestError(line_no, f"line {line_no}: missing required field {exc.args[0]!r}")
                if strict:
                    raise CorpusFormatError(err.message) from exc
                errors.append(err)
            except (ValueError, TypeError) as exc:
                err = IngestError(line_no, f"line {line_no}: {exc}")
                if strict:
                    raise CorpusFormatError(err.message) from exc
                errors.append(err)
    return records, errors


def serialize(records: list[UserRecord], path: str | Path) -> None:
    """Write records back to the JSON Lines corpus format (UTF-8, LF)."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for user in records:
            obj = {
                "user_id": user.user_id,
                "followers_t0": user.followers_t0,
                "followers_t1": user.followers_t1,
                "followees_t0": user.followees_t0,
                "has_description": user.has_description,
                "is_verified": user.is_verified,
                "tweets": [
                    {
                        "id": t.id,
                        "timestamp": t.timestamp,
                        "text": t.text,
                        "mentions": list(t.mentions),
                        "urls": list(t.urls),
                    }
                    for t in user.tweets
                ],
            }
            handle.write(json.dumps(obj, ensure_ascii=False))
            handle.write("\n")
