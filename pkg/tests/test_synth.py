"""Synthetic corpus generator: determinism, labels, planted signal."""

import numpy as np
import pytest

from followdrop.bursts import burst_features, detect_bursts
from followdrop.corpus import Label, filter_eligible, ingest, label_user
from followdrop.synth import SynthConfig, generate, generate_to_file


@pytest.fixture(scope="module")
def small_corpus():
    return generate(SynthConfig(n_users=60, seed=3))


class TestValidation:
    def test_too_few_users(self):
        with pytest.raises(ValueError, match="n_users"):
            generate(SynthConfig(n_users=1))

    def test_balance_range(self):
        with pytest.raises(ValueError, match="balance"):
            generate(SynthConfig(n_users=10, balance=1.5))

    def test_effect_range(self):
        with pytest.raises(ValueError, match="effect"):
            generate(SynthConfig(n_users=10, effect_strength=-0.1))

    def test_base_time_nonnegative(self):
        with pytest.raises(ValueError, match="base_time"):
            generate(SynthConfig(n_users=10, base_time=-5))


class TestDeterminism:
    def test_same_seed_same_records(self):
        a = generate(SynthConfig(n_users=20, seed=9))
        b = generate(SynthConfig(n_users=20, seed=9))
        assert a == b

    def test_different_seed_differs(self):
        a = generate(SynthConfig(n_users=20, seed=9))
        b = generate(SynthConfig(n_users=20, seed=10))
        assert a != b

    def test_byte_identical_files(self, tmp_path):
        cfg = SynthConfig(n_users=25, seed=4)
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        generate_to_file(cfg, p1)
        generate_to_file(cfg, p2)
        assert p1.read_bytes() == p2.read_bytes()


class TestCorpusShape:
    def test_ingest_clean(self, tmp_path, small_corpus):
        p = tmp_path / "c.jsonl"
        generate_to_file(SynthConfig(n_users=60, seed=3), p)
        records, errors = ingest(p)
        assert errors == []
        assert records == small_corpus

    def test_class_proportions(self):
        for n, bal in [(10, 0.5), (11, 0.5), (40, 0.25), (9, 0.3)]:
            records = generate(SynthConfig(n_users=n, balance=bal, seed=1))
            losers = sum(1 for r in records
                         if label_user(r.followers_t0, r.followers_t1) is Label.LOSER)
            assert losers == int(round(n * bal))

    def test_planted_labels_match_classes(self, small_corpus):
        n_losers = 30  # 60 * 0.5
        for i, rec in enumerate(small_corpus):
            want = Label.LOSER if i < n_losers else Label.STABLE
            assert label_user(rec.followers_t0, rec.followers_t1) is want

    def test_all_users_eligible(self, small_corpus):
        assert all(filter_eligible(r) for r in small_corpus)

    def test_tweets_sorted_and_nonempty(self, small_corpus):
        for rec in small_corpus:
            assert len(rec.tweets) >= 2
            times = [t.timestamp for t in rec.tweets]
            assert times == sorted(times)

    def test_ids_unique(self, small_corpus):
        ids = [r.user_id for r in small_corpus]
        assert len(set(ids)) == len(ids)


def _mean_burst_period(rec, threshold=1000.0):
    times = [t.timestamp for t in rec.tweets]
    feats = burst_features(detect_bursts(times, threshold), times)
    return None if feats is None else feats.mean_period


def _stump_accuracy(losers, stable):
    """Best single-threshold rule on mean burst period, either direction."""
    losers = [v for v in losers if v is not None]
    stable = [v for v in stable if v is not None]
    cut = float(np.median(losers + stable))
    n = len(losers) + len(stable)
    above = sum(1 for v in losers if v > cut) + sum(1 for v in stable if v <= cut)
    return max(above, n - above) / n


class TestPlantedSignal:
    def test_burst_stump_separates_at_full_effect(self):
        # a single-feature threshold rule should nearly separate the
        # classes when the effect is fully on
        records = generate(SynthConfig(n_users=200, seed=7, effect_strength=1.0))
        acc = _stump_accuracy([_mean_burst_period(r) for r in records[:100]],
                              [_mean_burst_period(r) for r in records[100:]])
        assert acc >= 0.8

    def test_burst_stump_useless_at_zero_effect(self):
        records = generate(SynthConfig(n_users=200, seed=7, effect_strength=0.0))
        acc = _stump_accuracy([_mean_burst_period(r) for r in records[:100]],
                              [_mean_burst_period(r) for r in records[100:]])
        assert acc <= 0.65

    def test_zero_effect_classes_same_tweet_params(self):
        # with the effect off, only follower counts distinguish the
        # classes; tweet-side behavior must come from one distribution
        records = generate(SynthConfig(n_users=300, seed=2, effect_strength=0.0))
        loser_counts = [len(r.tweets) for r in records[:150]]
        stable_counts = [len(r.tweets) for r in records[150:]]
        assert abs(np.mean(loser_counts) - np.mean(stable_counts)) < 3.0
