"""Psycholinguistic category counting from a pluggable lexicon.

The lexicon file follows the common .dic layout: a `%` line, then
`id<TAB>name` category rows, another `%`, then `word<TAB>id[,id...]`
entries. Entries ending in `*` are prefix patterns. Scores are raw
category hit counts normalized by the number of tweets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Sequence

from .corpus import Tweet, tokenize

__all__ = ["CategoryLexicon", "load_category_lexicon", "default_category_lexicon", "category_scores"]


@dataclass(frozen=True)
class CategoryLexicon:
    categories: tuple[str, ...]
    literals: dict[str, tuple[int, ...]] = field(repr=False)
    prefixes: dict[str, tuple[int, ...]] = field(repr=False)

    def match(self, token: str) -> tuple[int, ...]:
        """Category indices for a token: literal entry first, else the
        longest matching prefix entry."""
        hit = self.literals.get(token)
        if hit is not None:
            return hit
        for end in range(len(token), 0, -1):
            hit = self.prefixes.get(token[:end])
            if hit is not None:
                return hit
        return ()


def load_category_lexicon(path: str | Path) -> CategoryLexicon:
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    # split on the two % sentinel lines
    marks = [i for i, ln in enumerate(lines) if ln.strip() == "%"]
    if len(marks) < 2:
        raise ValueError("category lexicon needs a %%-delimited header section")
    header, body = lines[marks[0] + 1 : marks[1]], lines[marks[1] + 1 :]

    ids: dict[str, int] = {}
    names: list[str] = []
    for line in header:
        line = line.strip()
        if not line:
            continue
        raw_id, name = line.split("\t")
        if name in names:
            raise ValueError(f"duplicate category name {name!r}")
        ids[raw_id] = len(names)
        names.append(name)

    literals: dict[str, tuple[int, ...]] = {}
    prefixes: dict[str, tuple[int, ...]] = {}
    for line in body:
        line = line.strip()
        if not line:
            continue
        word, raw_ids = line.split("\t")
        word = word.lower()
        cats = tuple(ids[r.strip()] for r in raw_ids.split(","))
        if word.endswith("*"):
            prefixes[word[:-1]] = cats
        else:
            literals[word] = cats
    return CategoryLexicon(categories=tuple(names), literals=literals, prefixes=prefixes)


_DEFAULT_LEXICON: CategoryLexicon | None = None


def default_category_lexicon() -> CategoryLexicon:
    global _DEFAULT_LEXICON
    if _DEFAULT_LEXICON is None:
        ref = resources.files("followdrop.data").joinpath("categories_demo.dic")
        with resources.as_file(ref) as path:
            _DEFAULT_LEXICON = load_category_lexicon(path)
    return _DEFAULT_LEXICON


def category_scores(tweets: Sequence[Tweet], lexicon: CategoryLexicon) -> list[float] | None:
    """Per-category token hit counts divided by the number of tweets."""
    if not tweets:
        return None
    counts = [0] * len(lexicon.categories)
    for tweet in tweets:
        for token in tokenize(tweet.text):
            for cat in lexicon.match(token):
                counts[cat] += 1
    n = len(tweets)
    return [c / n for c in counts]
