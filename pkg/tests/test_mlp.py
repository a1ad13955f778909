import numpy as np
import pytest

from followdrop.features import ScalerParams, minmax_scale_apply, minmax_scale_fit
from followdrop.mlp import (
    bce_loss,
    forward,
    init_params,
    load_mlp,
    loss_and_gradients,
    predict,
    predict_proba,
    save_mlp,
    train_mlp,
)


def separable_data(n=500, seed=0):
    rng = np.random.default_rng(seed)
    y = (rng.random(n) < 0.5).astype(np.int64)
    X = rng.normal(size=(n, 4))
    X[:, 0] += 6.0 * y
    return X, y


class TestForward:
    def test_output_shape_and_range(self):
        rng = np.random.default_rng(0)
        w, b = init_params([5, 7, 1], seed=1)
        X = rng.normal(size=(11, 5))
        activations, zs = forward(w, b, X)
        assert activations[-1].shape == (11, 1)
        assert ((activations[-1] > 0) & (activations[-1] < 1)).all()
        assert len(zs) == 2

    def test_zero_weights_give_half(self):
        w, b = init_params([3, 1], seed=0)
        w[0][:] = 0.0
        activations, _ = forward(w, b, np.ones((4, 3)))
        np.testing.assert_array_equal(activations[-1], 0.5)

    def test_xavier_bounds(self):
        w, b = init_params([10, 20, 1], seed=3)
        limit = np.sqrt(6.0 / 30.0)
        assert np.abs(w[0]).max() <= limit
        assert all(np.all(bias == 0.0) for bias in b)


class TestGradients:
    def gradcheck(self, sizes, seed, eps=1e-5):
        rng = np.random.default_rng(seed)
        w, b = init_params(sizes, seed=seed)
        # check at a generic point: zero-init biases put dead samples
        # exactly on the relu kink where central differences break down
        for bias in b:
            bias += rng.normal(scale=0.1, size=bias.shape)
        X = rng.normal(size=(8, sizes[0]))
        y = (rng.random(8) < 0.5).astype(np.float64)
        _, gw, gb = loss_and_gradients(w, b, X, y)
        worst = 0.0
        for params, grads in ((w, gw), (b, gb)):
            for arr, grad in zip(params, grads):
                flat = arr.ravel()
                gflat = grad.ravel()
                for idx in range(flat.size):
                    orig = flat[idx]
                    flat[idx] = orig + eps
                    lp, _, _ = loss_and_gradients(w, b, X, y)
                    flat[idx] = orig - eps
                    lm, _, _ = loss_and_gradients(w, b, X, y)
                    flat[idx] = orig
                    num = (lp - lm) / (2 * eps)
                    denom = max(abs(num) + abs(gflat[idx]), 1e-8)
                    worst = max(worst, abs(num - gflat[idx]) / denom)
        return worst

    def test_small_net(self):
        assert self.gradcheck([3, 4, 1], seed=4) < 1e-4

    def test_two_hidden_layers(self):
        assert self.gradcheck([5, 4, 3, 1], seed=5) < 1e-4


class TestTrain:
    def test_learns_separable(self):
        X, y = separable_data()
        model = train_mlp(X, y, hidden=(8,), epochs=50, seed=0)
        acc = (predict(model, X) == y).mean()
        assert acc >= 0.98

    def test_deterministic(self):
        X, y = separable_data(n=80)
        a = train_mlp(X, y, hidden=(6,), epochs=5, seed=3)
        b = train_mlp(X, y, hidden=(6,), epochs=5, seed=3)
        for wa, wb in zip(a.weights, b.weights):
            np.testing.assert_array_equal(wa, wb)

    def test_loss_tracked_and_finite(self):
        X, y = separable_data(n=100)
        model = train_mlp(X, y, hidden=(6,), epochs=8, seed=0)
        assert len(model.losses) == 8
        assert all(np.isfinite(v) for v in model.losses)
        assert model.losses[-1] < model.losses[0]

    def test_single_class_rejected(self):
        X = np.random.default_rng(0).normal(size=(10, 2))
        with pytest.raises(ValueError):
            train_mlp(X, np.ones(10, dtype=np.int64), hidden=(4,), epochs=1)

    def test_label_values_validated(self):
        X = np.random.default_rng(0).normal(size=(10, 2))
        y = np.array([0, 1, 2, 0, 1, 0, 1, 0, 1, 0])
        with pytest.raises(ValueError):
            train_mlp(X, y, hidden=(4,), epochs=1)


class TestPredict:
    def test_threshold_inclusive(self):
        X, y = separable_data(n=60)
        model = train_mlp(X, y, hidden=(4,), epochs=3, seed=1)
        w0 = [np.zeros_like(w) for w in model.weights]
        b0 = [np.zeros_like(b) for b in model.biases]
        zeroed = type(model)(
            layer_sizes=model.layer_sizes, weights=w0, biases=b0,
            activation=model.activation, seed=model.seed,
            scaler=None, losses=[],
        )
        p = predict_proba(zeroed, X)
        np.testing.assert_array_equal(p, 0.5)
        # p == threshold counts as positive
        assert predict(zeroed, X, threshold=0.5).all()
        assert not predict(zeroed, X, threshold=0.500001).any()

    def test_threshold_monotone(self):
        X, y = separable_data(n=120)
        model = train_mlp(X, y, hidden=(6,), epochs=5, seed=2)
        prev = predict(model, X, threshold=0.1)
        for thr in (0.3, 0.5, 0.7, 0.9):
            cur = predict(model, X, threshold=thr)
            assert (cur <= prev).all()
            prev = cur

    def test_width_validated(self):
        X, y = separable_data(n=60)
        model = train_mlp(X, y, hidden=(4,), epochs=2, seed=0)
        with pytest.raises(ValueError):
            predict_proba(model, X[:, :2])

    def test_embedded_scaler_applied(self):
        X, y = separable_data(n=100)
        scaler = minmax_scale_fit(X)
        Xs = minmax_scale_apply(scaler, X)
        model = train_mlp(Xs, y, hidden=(6,), epochs=10, seed=4, scaler=scaler)
        # raw inputs go through the stored scaler automatically
        with_scaler = predict_proba(model, X)
        bare = type(model)(
            layer_sizes=model.layer_sizes, weights=model.weights,
            biases=model.biases, activation=model.activation,
            seed=model.seed, scaler=None, losses=[],
        )
        manual = predict_proba(bare, Xs)
        np.testing.assert_array_equal(with_scaler, manual)


def test_bce_loss_clips():
    p = np.array([0.0, 1.0])
    y = np.array([1.0, 0.0])
    val = bce_loss(p, y)
    assert np.isfinite(val)
    assert val == pytest.approx(-np.log(1e-12), rel=1e-6)


def test_save_load_round_trip(tmp_path):
    X, y = separable_data(n=80)
    scaler = minmax_scale_fit(X)
    model = train_mlp(minmax_scale_apply(scaler, X), y, hidden=(5,),
                      epochs=4, seed=6, scaler=scaler)
    p = tmp_path / "mlp.json"
    save_mlp(model, p)
    loaded = load_mlp(p)
    assert isinstance(loaded.scaler, ScalerParams)
    np.testing.assert_array_equal(predict_proba(loaded, X), predict_proba(model, X))
    p2 = tmp_path / "again.json"
    save_mlp(loaded, p2)
    assert p.read_bytes() == p2.read_bytes()
