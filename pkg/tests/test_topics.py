import math

import numpy as np
import pytest

from followdrop.topics import (
    infer_topics,
    load_topic_model,
    save_topic_model,
    topic_diversity,
    train_lda,
)


def two_theme_docs(n_docs=40, doc_len=30, seed=0):
    rng = np.random.default_rng(seed)
    pool_a = [f"sport{i}" for i in range(15)]
    pool_b = [f"music{i}" for i in range(15)]
    docs = []
    for d in range(n_docs):
        pool = pool_a if d % 2 == 0 else pool_b
        docs.append([pool[int(j)] for j in rng.integers(0, len(pool), doc_len)])
    return docs


class TestTrain:
    def test_shapes_and_normalization(self):
        docs = two_theme_docs()
        model = train_lda(docs, n_topics=3, iterations=60, seed=1)
        assert model.phi.shape == (3, 30)
        assert model.theta.shape == (len(docs), 3)
        np.testing.assert_allclose(model.phi.sum(axis=1), 1.0, atol=1e-9)
        np.testing.assert_allclose(model.theta.sum(axis=1), 1.0, atol=1e-9)
        assert (model.phi >= 0).all() and (model.theta >= 0).all()

    def test_default_alpha_is_50_over_k(self):
        docs = two_theme_docs(n_docs=10)
        model = train_lda(docs, n_topics=5, iterations=5, seed=0)
        assert model.alpha == pytest.approx(10.0)
        assert model.beta == pytest.approx(0.01)

    def test_deterministic(self):
        docs = two_theme_docs()
        a = train_lda(docs, n_topics=3, iterations=40, seed=9)
        b = train_lda(docs, n_topics=3, iterations=40, seed=9)
        np.testing.assert_array_equal(a.phi, b.phi)
        np.testing.assert_array_equal(a.theta, b.theta)

    def test_seed_changes_result(self):
        docs = two_theme_docs()
        a = train_lda(docs, n_topics=3, iterations=40, seed=1)
        b = train_lda(docs, n_topics=3, iterations=40, seed=2)
        assert not np.array_equal(a.theta, b.theta)

    def test_vocab_first_appearance_order(self):
        model = train_lda([["b", "a"], ["a", "c"]], n_topics=2, iterations=5, seed=0)
        assert model.vocab == {"b": 0, "a": 1, "c": 2}

    def test_empty_doc_flagged(self):
        model = train_lda([["a", "b"], []], n_topics=2, iterations=5, seed=0)
        assert model.doc_present.tolist() == [True, False]
        np.testing.assert_allclose(model.theta[1], 0.5)

    def test_rejects_degenerate_input(self):
        with pytest.raises(ValueError):
            train_lda([["a"]], n_topics=1, iterations=5, seed=0)
        with pytest.raises(ValueError):
            train_lda([[], []], n_topics=2, iterations=5, seed=0)


class TestInfer:
    def test_shapes_and_normalization(self):
        docs = two_theme_docs()
        model = train_lda(docs, n_topics=2, iterations=60, seed=3)
        theta, present = infer_topics(model, docs[:6], iterations=30, seed=4)
        assert theta.shape == (6, 2)
        np.testing.assert_allclose(theta.sum(axis=1), 1.0, atol=1e-9)
        assert present.all()

    def test_oov_only_doc_uniform(self):
        docs = two_theme_docs()
        model = train_lda(docs, n_topics=4, iterations=30, seed=3)
        theta, present = infer_topics(model, [["zzz", "qqq"], []], iterations=10, seed=0)
        assert not present.any()
        np.testing.assert_allclose(theta, 0.25)

    def test_deterministic(self):
        docs = two_theme_docs()
        model = train_lda(docs, n_topics=2, iterations=30, seed=3)
        ta, _ = infer_topics(model, docs[:5], iterations=20, seed=8)
        tb, _ = infer_topics(model, docs[:5], iterations=20, seed=8)
        np.testing.assert_array_equal(ta, tb)

    def test_separates_themes(self):
        # docs alternate between two disjoint word pools
        docs = two_theme_docs(n_docs=60, doc_len=80)
        model = train_lda(docs, n_topics=2, alpha=0.5, iterations=400, seed=5)
        theta, _ = infer_topics(model, docs, iterations=60, seed=6)
        even_top = theta[0::2].argmax(axis=1)
        odd_top = theta[1::2].argmax(axis=1)
        # same theme lands on the same topic, themes land on different ones
        assert np.bincount(even_top, minlength=2).max() >= 27
        assert np.bincount(odd_top, minlength=2).max() >= 27
        assert even_top[0] != odd_top[0]


class TestDiversity:
    def test_uniform(self):
        assert topic_diversity(np.full(10, 0.1)) == pytest.approx(math.log(10), abs=1e-12)

    def test_one_hot(self):
        row = np.zeros(8)
        row[3] = 1.0
        assert topic_diversity(row) == 0.0

    def test_mixed(self):
        assert topic_diversity(np.array([0.5, 0.25, 0.25])) == pytest.approx(1.0397, abs=1e-4)

    def test_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            topic_diversity(np.array([0.5, 0.4]))
        with pytest.raises(ValueError):
            topic_diversity(np.array([1.2, -0.2]))


def test_save_load_round_trip(tmp_path):
    docs = two_theme_docs(n_docs=10)
    model = train_lda(docs, n_topics=3, iterations=20, seed=2)
    p = tmp_path / "topics.json"
    save_topic_model(model, p)
    loaded = load_topic_model(p)
    assert loaded.vocab == model.vocab
    assert loaded.n_topics == model.n_topics
    assert loaded.alpha == model.alpha
    np.testing.assert_array_equal(loaded.phi, model.phi)
    np.testing.assert_array_equal(loaded.theta, model.theta)
    np.testing.assert_array_equal(loaded.doc_present, model.doc_present)
    # byte-stable second save
    p2 = tmp_path / "again.json"
    save_topic_model(loaded, p2)
    assert p.read_bytes() == p2.read_bytes()
