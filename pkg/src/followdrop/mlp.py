"""Feed-forward binary classifier trained with mini-batch SGD.

ReLU hidden layers, sigmoid output, binary cross-entropy loss,
Xavier-uniform initialization.  Training is deterministic for a given
seed: batch order comes from one seeded generator and nothing else is
stochastic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from followdrop.features import ScalerParams, minmax_scale_apply
from followdrop.serialization import dump_json, load_json

DEFAULT_HIDDEN = (64, 32)
DEFAULT_LR = 0.01
DEFAULT_BATCH = 32
DEFAULT_EPOCHS = 50

_CLIP = 1e-12


@dataclass
class MlpModel:
    layer_sizes: list
    weights: list                   # per layer, shape (fan_in, fan_out)
    biases: list                    # per layer, shape (fan_out,)
    activation: str
    seed: int
    scaler: ScalerParams | None = None
    losses: list = field(default_factory=list)


def init_params(layer_sizes, seed: int):
    """Xavier-uniform weights, zero biases."""
    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out, dtype=np.float64))
    return weights, biases


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(weights, biases, X: np.ndarray):
    """Returns (activations, pre-activations); last activation is p."""
    a = np.asarray(X, dtype=np.float64)
    activations = [a]
    zs = []
    last = len(weights) - 1
    for l, (W, b) in enumerate(zip(weights, biases)):
        z = a @ W + b
        zs.append(z)
        a = _sigmoid(z) if l == last else np.maximum(z, 0.0)
        activations.append(a)
    return activations, zs


def bce_loss(p: np.ndarray, y: np.ndarray) -> float:
    p = np.clip(p, _CLIP, 1.0 - _CLIP)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def loss_and_gradients(weights, biases, X: np.ndarray, y: np.ndarray):
    """BCE loss and its gradients w.r.t. every weight and bias."""
    y = np.asarray(y, dtype=np.float64).reshape(-1, 1)
    m = len(y)
    activations, zs = forward(weights, biases, X)
    p = activations[-1]
    loss = bce_loss(p, y)
    grad_w = [None] * len(weights)
    grad_b = [None] * len(biases)
    dz = (p - y) / m
    for l in range(len(weights) - 1, -1, -1):
        grad_w[l] = activations[l].T @ dz
        grad_b[l] = dz.sum(axis=0)
        if l > 0:
            da = dz @ weights[l].T
            dz = da * (zs[l - 1] > 0)
    return loss, grad_w, grad_b


def train_mlp(X: np.ndarray, y: np.ndarray, hidden=DEFAULT_HIDDEN,
              lr: float = DEFAULT_LR, batch_size: int = DEFAULT_BATCH,
              epochs: int = DEFAULT_EPOCHS, seed: int = 0,
              scaler: ScalerParams | None = None) -> MlpModel:
    """Train on an already-scaled matrix; both classes must be present.

    A scaler passed in is stored on the model and applied by
    predict_proba, so downstream callers can feed raw feature rows.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X and y shapes do not line up")
    classes = np.unique(y)
    if not np.array_equal(classes, np.array([0, 1])):
        raise ValueError("labels must contain both classes 0 and 1")
    if batch_size < 1 or epochs < 1:
        raise ValueError("batch_size and epochs must be positive")

    layer_sizes = [X.shape[1], *list(hidden), 1]
    weights, biases = init_params(layer_sizes, seed)
    rng = np.random.default_rng(seed + 1)
    m = len(y)
    losses = []
    for _ in range(epochs):
        perm = rng.permutation(m)
        for start in range(0, m, batch_size):
            idx = perm[start:start + batch_size]
            loss, gw, gb = loss_and_gradients(weights, biases, X[idx], y[idx])
            for l in range(len(weights)):
                weights[l] -= lr * gw[l]
                biases[l] -= lr * gb[l]
        acts, _ = forward(weights, biases, X)
        epoch_loss = bce_loss(acts[-1], y.reshape(-1, 1))
        if not np.isfinite(epoch_loss):
            raise RuntimeError("training diverged to a non-finite loss")
        losses.append(epoch_loss)
    return MlpModel(layer_sizes=layer_sizes, weights=weights, biases=biases,
                    activation="relu", seed=int(seed), scaler=scaler,
                    losses=losses)


def predict_proba(model: MlpModel, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != model.layer_sizes[0]:
        raise ValueError("feature matrix does not match model input size")
    if model.scaler is not None:
        X = minmax_scale_apply(model.scaler, X)
    acts, _ = forward(model.weights, model.biases, X)
    return acts[-1].ravel()


def predict(model: MlpModel, X: np.ndarray, threshold: float = 0.5) -> np.ndarray:
    """Label 1 where p >= threshold (inclusive)."""
    return (predict_proba(model, X) >= threshold).astype(np.int64)


def mlp_to_dict(model: MlpModel) -> dict:
    obj = {
        "kind": "mlp_model",
        "layer_sizes": [int(s) for s in model.layer_sizes],
        "weights": list(model.weights),
        "biases": list(model.biases),
        "activation": model.activation,
        "seed": model.seed,
        "losses": [float(x) for x in model.losses],
    }
    if model.scaler is not None:
        obj["scaler_min"] = model.scaler.col_min
        obj["scaler_max"] = model.scaler.col_max
    return obj


def mlp_from_dict(obj: dict) -> MlpModel:
    if obj.get("kind") != "mlp_model":
        raise ValueError("not an mlp model container")
    scaler = None
    if "scaler_min" in obj:
        scaler = ScalerParams(col_min=np.asarray(obj["scaler_min"]),
                              col_max=np.asarray(obj["scaler_max"]))
    return MlpModel(layer_sizes=[int(s) for s in obj["layer_sizes"]],
                    weights=[np.asarray(w) for w in obj["weights"]],
                    biases=[np.asarray(b) for b in obj["biases"]],
                    activation=str(obj["activation"]), seed=int(obj["seed"]),
                    scaler=scaler, losses=list(obj["losses"]))


def save_mlp(model: MlpModel, path: str | Path) -> None:
    dump_json(mlp_to_dict(model), path)


def load_mlp(path: str | Path) -> MlpModel:
    return mlp_from_dict(load_json(path))
