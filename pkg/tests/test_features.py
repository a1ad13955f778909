import numpy as np
import pytest

from followdrop.categories import default_category_lexicon
from followdrop.corpus import Tweet, UserRecord
from followdrop.features import (
    BURST_COLUMNS,
    GRAPH_COLUMNS,
    LEXICAL_COLUMNS,
    PRESENCE_COLUMNS,
    PROFILE_COLUMNS,
    assemble_features,
    baseline_features,
    build_schema,
    extract_static,
    minmax_scale_apply,
    minmax_scale_fit,
    write_feature_csv,
)
from followdrop.graphs import NodeCentrality


def make_user(uid="u1", followers=2000, followees=500, texts_and_times=()):
    tweets = tuple(
        Tweet(id=f"{uid}-{i}", author_id=uid, timestamp=ts, text=text,
              mentions=tuple(t[1:] for t in text.lower().split() if t.startswith("@")),
              urls=tuple(t for t in text.split() if t.startswith("http")))
        for i, (text, ts) in enumerate(texts_and_times)
    )
    return UserRecord(user_id=uid, followers_t0=followers, followers_t1=followers,
                      followees_t0=followees, has_description=True,
                      is_verified=False, tweets=tweets)


@pytest.fixture(scope="module")
def lexicon():
    return default_category_lexicon()


@pytest.fixture(scope="module")
def schema(lexicon):
    return build_schema(lexicon.categories, embed_dim=4)


class TestSchema:
    def test_block_order(self, schema, lexicon):
        cols = schema.columns
        n_cat = len(lexicon.categories)
        i = 0
        assert cols[i:i + len(LEXICAL_COLUMNS)] == LEXICAL_COLUMNS
        i += len(LEXICAL_COLUMNS)
        assert cols[i:i + len(BURST_COLUMNS)] == BURST_COLUMNS
        i += len(BURST_COLUMNS)
        assert cols[i] == "topic_diversity"
        i += 1
        assert all(c.startswith("cat_") for c in cols[i:i + n_cat])
        i += n_cat
        assert cols[i:i + len(GRAPH_COLUMNS)] == GRAPH_COLUMNS
        i += len(GRAPH_COLUMNS)
        assert cols[i:i + len(PRESENCE_COLUMNS)] == PRESENCE_COLUMNS
        i += len(PRESENCE_COLUMNS)
        assert cols[i:i + 3] == PROFILE_COLUMNS
        i += 3
        assert cols[i:] == ("emb_000", "emb_001", "emb_002", "emb_003")

    def test_no_duplicates(self, schema):
        assert len(set(schema.columns)) == len(schema.columns)


class TestExtractStatic:
    def test_full_user(self, lexicon):
        user = make_user(texts_and_times=[
            ("the cat sat on the mat", 0),
            ("hello @bob check http://x.co", 500),
            ("never again", 5000),
        ])
        out = extract_static(user, frozenset({"the", "on"}), {"never": 0.8},
                             lexicon, gap_threshold=1000.0)
        assert out["n_tweets"] == 3.0
        assert out["tweet_rate"] == pytest.approx(5000 / 3)
        assert out["mention_coeff"] == pytest.approx(1 / 3)
        assert out["url_rate"] == pytest.approx(1 / 3)
        assert out["burst_count"] == 2.0
        assert out["badness"] is not None and out["badness"] > 0
        assert out["mention_entropy"] == 0.0
        assert out["has_description"] == 1.0
        assert out["is_verified"] == 0.0
        assert out["followers_t0"] == 2000.0
        assert out["followee_follower_ratio"] == pytest.approx(0.25)

    def test_empty_user_gets_nones(self, lexicon):
        out = extract_static(make_user(), frozenset(), {}, lexicon, 1000.0)
        assert out["badness"] is None
        assert out["content_diversity"] is None
        assert out["tweet_rate"] is None
        assert out["mention_entropy"] is None
        for col in BURST_COLUMNS:
            assert out[col] is None
        assert out["n_tweets"] == 0.0


class TestAssemble:
    def centrality(self):
        return NodeCentrality(in_degree=0.5, out_degree=0.25, betweenness=0.1,
                              closeness=0.4, eigenvector=0.3, clustering=0.6)

    def assemble(self, schema, static, **kw):
        args = dict(topic_div=0.7, topic_present=True,
                    centrality=self.centrality(), sim_clustering=0.2,
                    sim_majority=0.5, embedding=np.array([1.0, 2.0, 3.0, 4.0]),
                    embedding_present=True)
        args.update(kw)
        return assemble_features(schema, static, **args)

    def test_known_values_land_in_order(self, schema, lexicon):
        user = make_user(texts_and_times=[("the cat", 0), ("a dog", 400)])
        static = extract_static(user, frozenset(), {}, lexicon, 1000.0)
        row = self.assemble(schema, static)
        col = {c: i for i, c in enumerate(schema.columns)}
        assert row[col["followers_t0"]] == 2000.0
        assert row[col["followee_follower_ratio"]] == pytest.approx(0.25)
        assert row[col["topic_diversity"]] == pytest.approx(0.7)
        assert row[col["mention_in_degree"]] == 0.5
        assert row[col["in_mention_graph"]] == 1.0
        assert row[col["emb_002"]] == 3.0
        assert row[col["present_topics"]] == 1.0

    def test_missing_values_imputed_with_flags(self, schema, lexicon):
        static = extract_static(make_user(), frozenset(), {}, lexicon, 1000.0)
        row = self.assemble(schema, static, topic_div=0.0, topic_present=False,
                            centrality=None,
                            embedding=np.zeros(4), embedding_present=False)
        col = {c: i for i, c in enumerate(schema.columns)}
        for name in ("badness", "content_diversity", "tweet_rate",
                     "mention_entropy", "mean_burst_period", "topic_diversity"):
            assert row[col[name]] == 0.0
        for name in PRESENCE_COLUMNS:
            assert row[col[name]] == 0.0
        assert row[col["in_mention_graph"]] == 0.0
        assert row[col["mention_betweenness"]] == 0.0

    def test_embedding_dim_checked(self, schema, lexicon):
        static = extract_static(make_user(), frozenset(), {}, lexicon, 1000.0)
        with pytest.raises(ValueError):
            self.assemble(schema, static, embedding=np.zeros(3))

    def test_non_finite_rejected(self, schema, lexicon):
        static = extract_static(make_user(), frozenset(), {}, lexicon, 1000.0)
        with pytest.raises(ValueError):
            self.assemble(schema, static, embedding=np.array([np.nan, 0, 0, 0]))


class TestBaseline:
    def test_values(self):
        np.testing.assert_allclose(
            baseline_features(make_user(followers=1000, followees=100)),
            [1000.0, 100.0, 0.1],
        )

    def test_zero_followees(self):
        np.testing.assert_allclose(
            baseline_features(make_user(followers=1000, followees=0)),
            [1000.0, 0.0, 0.0],
        )

    def test_zero_followers_ratio_zero(self):
        np.testing.assert_allclose(
            baseline_features(make_user(followers=0, followees=50)),
            [0.0, 50.0, 0.0],
        )


class TestScaler:
    def test_fit_apply(self):
        X = np.array([[0.0], [5.0], [10.0]])
        params = minmax_scale_fit(X)
        np.testing.assert_allclose(minmax_scale_apply(params, X).ravel(), [0.0, 0.5, 1.0])

    def test_constant_column_zero(self):
        X = np.full((4, 1), 3.0)
        params = minmax_scale_fit(X)
        np.testing.assert_array_equal(minmax_scale_apply(params, X), 0.0)

    def test_out_of_range_clipped(self):
        params = minmax_scale_fit(np.array([[0.0], [10.0]]))
        out = minmax_scale_apply(params, np.array([[12.0], [-3.0]]))
        np.testing.assert_allclose(out.ravel(), [1.0, 0.0])

    def test_train_stats_reused(self):
        train = np.array([[0.0, 100.0], [10.0, 200.0]])
        params = minmax_scale_fit(train)
        test = np.array([[5.0, 150.0]])
        np.testing.assert_allclose(minmax_scale_apply(params, test).ravel(), [0.5, 0.5])


def test_write_feature_csv_round_trip(tmp_path, schema, lexicon):
    user = make_user(texts_and_times=[("the cat sat", 0), ("a dog ran", 400)])
    static = extract_static(user, frozenset(), {}, lexicon, 1000.0)
    row = assemble_features(
        schema, static, topic_div=1 / 3, topic_present=True,
        centrality=None, sim_clustering=0.0, sim_majority=0.5,
        embedding=np.array([0.1, -0.2, 0.3, 1e-17]), embedding_present=True,
    )
    p = tmp_path / "features.csv"
    write_feature_csv(p, schema, ["u1"], row[None, :], np.array([1]))
    lines = p.read_text().splitlines()
    assert lines[0].split(",")[:2] == ["user_id", "label"]
    assert lines[0].split(",")[2:] == list(schema.columns)
    cells = lines[1].split(",")
    assert cells[0] == "u1" and cells[1] == "1"
    # repr floats parse back exactly
    parsed = np.array([float(c) for c in cells[2:]])
    np.testing.assert_array_equal(parsed, row)
