import numpy as np
import pytest

from followdrop.ranking import chi2_rank, chi2_statistic, quartile_bins


class TestQuartileBins:
    def test_four_bins_on_spread_data(self):
        x = np.arange(100, dtype=np.float64)
        bins = quartile_bins(x)
        assert set(np.unique(bins)) == {0, 1, 2, 3}
        counts = np.bincount(bins)
        assert counts.max() - counts.min() <= 2

    def test_constant_column_single_bin(self):
        bins = quartile_bins(np.full(20, 3.7))
        assert len(np.unique(bins)) == 1

    def test_monotone_in_input(self):
        rng = np.random.default_rng(40)
        x = rng.normal(size=200)
        bins = quartile_bins(x)
        order = np.argsort(x, kind="mergesort")
        assert (np.diff(bins[order]) >= 0).all()

    def test_boundary_goes_to_upper_bin(self):
        # value equal to a quartile edge lands in the bin above it
        x = np.array([0.0, 0.0, 1.0, 1.0, 2.0, 2.0, 3.0, 3.0])
        bins = quartile_bins(x)
        edges = np.percentile(x, [25, 50, 75])
        for xv, bv in zip(x, bins):
            assert bv == np.searchsorted(np.unique(edges), xv, side="right")


class TestChi2Statistic:
    def test_perfect_association_equals_n(self):
        bins = np.array([0] * 50 + [1] * 50)
        classes = np.array([0] * 50 + [1] * 50)
        assert chi2_statistic(bins, classes) == pytest.approx(100.0)

    def test_independence_zero(self):
        bins = np.array([0, 0, 1, 1] * 10)
        classes = np.array([0, 1, 0, 1] * 10)
        assert chi2_statistic(bins, classes) == pytest.approx(0.0, abs=1e-12)

    def test_hand_contingency(self):
        # table [[3, 1], [1, 3]]: chi2 = 8*(3*3-1*1)^2/(4*4*4*4) = 2
        bins = np.array([0, 0, 0, 0, 1, 1, 1, 1])
        classes = np.array([0, 0, 0, 1, 0, 1, 1, 1])
        assert chi2_statistic(bins, classes) == pytest.approx(2.0)

    def test_single_bin_zero(self):
        bins = np.zeros(10, dtype=np.int64)
        classes = np.array([0, 1] * 5)
        assert chi2_statistic(bins, classes) == pytest.approx(0.0, abs=1e-12)


class TestChi2Rank:
    def test_label_copy_tops_and_scores_n(self):
        rng = np.random.default_rng(41)
        n = 200
        y = rng.integers(0, 2, n)
        X = np.column_stack([
            rng.normal(size=n),
            y.astype(np.float64),
            rng.normal(size=n),
        ])
        ranked = chi2_rank(X, y, ["noise_a", "label_copy", "noise_b"])
        assert ranked[0][0] == "label_copy"
        assert ranked[0][1] == pytest.approx(float(n))

    def test_descending_order(self):
        rng = np.random.default_rng(42)
        n = 300
        y = rng.integers(0, 2, n)
        X = np.column_stack([
            rng.normal(size=n),
            y + rng.normal(scale=0.5, size=n),
            y + rng.normal(scale=2.0, size=n),
        ])
        ranked = chi2_rank(X, y, ["a", "b", "c"])
        stats = [s for _, s in ranked]
        assert stats == sorted(stats, reverse=True)
        assert ranked[0][0] == "b"

    def test_ties_keep_schema_order(self):
        rng = np.random.default_rng(43)
        n = 100
        y = rng.integers(0, 2, n)
        col = rng.normal(size=n)
        X = np.column_stack([col, col])
        ranked = chi2_rank(X, y, ["first", "second"])
        assert [name for name, _ in ranked] == ["first", "second"]
        assert ranked[0][1] == ranked[1][1]

    def test_monotone_transform_invariant(self):
        rng = np.random.default_rng(44)
        n = 250
        y = rng.integers(0, 2, n)
        X = rng.normal(size=(n, 4)) + y[:, None] * rng.random(4)
        a = chi2_rank(X, y, list("wxyz"))
        b = chi2_rank(np.exp(X), y, list("wxyz"))
        assert [name for name, _ in a] == [name for name, _ in b]
        for (_, sa), (_, sb) in zip(a, b):
            assert sa == pytest.approx(sb, abs=1e-9)

    def test_name_count_validated(self):
        with pytest.raises(ValueError):
            chi2_rank(np.zeros((5, 2)), np.zeros(5, dtype=np.int64), ["only_one"])
