"""Binary multilayer perceptron: rectifier hidden layers, logistic output,
full-batch gradient descent on cross-entropy.

Written against numpy directly so that training is bit-deterministic for a
given seed and the analytic gradients are available for finite-difference
checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dataset import Dataset


@dataclass
class MlpConfig:
    hidden_sizes: tuple[int, ...] = (32,)
    epochs: int = 500
    learning_rate: float = 0.01
    momentum: float = 0.0
    seed: int = 0

    def fit(self, data: Dataset) -> "MlpModel":
        return train_mlp(data, self)


@dataclass
class MlpModel:
    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    scale_offset: np.ndarray  # per-feature offset, fitted on training rows
    scale_divisor: np.ndarray  # per-feature divisor, always > 0
    hidden_activation: str = "relu"
    output_activation: str = "logistic"

    def predict_proba(self, x: np.ndarray) -> float | np.ndarray:
        return predict_proba_mlp(self, x)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _forward(weights, biases, X):
    """Returns (pre-activations per layer, post-activations per layer)."""
    zs = []
    activations = [X]
    a = X
    last = len(weights) - 1
    for i, (W, b) in enumerate(zip(weights, biases)):
        z = a @ W + b
        zs.append(z)
        a = _sigmoid(z) if i == last else np.maximum(z, 0.0)
        activations.append(a)
    return zs, activations


def loss_and_gradients(weights, biases, X, y):
    """Mean cross-entropy and its analytic gradients.

    X must already be scaled. Uses the softplus form of the loss so large
    logits do not overflow.
    """
    y = np.asarray(y, dtype=float).reshape(-1)
    n = X.shape[0]
    zs, activations = _forward(weights, biases, X)
    logits = zs[-1].reshape(-1)
    # mean(softplus(z) - y*z) == mean cross-entropy of sigmoid(z)
    loss = float(np.mean(np.logaddexp(0.0, logits) - y * logits))

    grad_w = [np.zeros_like(W) for W in weights]
    grad_b = [np.zeros_like(b) for b in biases]
    delta = ((_sigmoid(logits) - y) / n).reshape(-1, 1)
    for i in range(len(weights) - 1, -1, -1):
        grad_w[i] = activations[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ weights[i].T) * (zs[i - 1] > 0)
    return loss, grad_w, grad_b


def fit_feature_scaling(X: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Min-max scaling to [0, 1], fitted on training rows only."""
    offset = X.min(axis=0) if len(X) else np.zeros(X.shape[1])
    span = X.max(axis=0) - offset if len(X) else np.ones(X.shape[1])
    divisor = np.maximum(span, 1e-12)
    return offset, divisor


def train_mlp(data: Dataset, config: MlpConfig | None = None) -> MlpModel:
    """Fit the MLP with seeded init and full-batch gradient descent."""
    config = config or MlpConfig()
    data.require_both_classes()

    offset, divisor = fit_feature_scaling(data.X)
    X = (data.X - offset) / divisor
    y = data.y.astype(float)

    layer_sizes = (data.X.shape[1],) + tuple(config.hidden_sizes) + (1,)
    rng = np.random.default_rng(config.seed)
    weights = []
    biases = []
    for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
        scale = np.sqrt(2.0 / fan_in)
        weights.append(rng.normal(0.0, scale, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))

    vel_w = [np.zeros_like(W) for W in weights]
    vel_b = [np.zeros_like(b) for b in biases]
    lr, mu = config.learning_rate, config.momentum
    for _ in range(config.epochs):
        _loss, grad_w, grad_b = loss_and_gradients(weights, biases, X, y)
        for i in range(len(weights)):
            vel_w[i] = mu * vel_w[i] - lr * grad_w[i]
            vel_b[i] = mu * vel_b[i] - lr * grad_b[i]
            weights[i] += vel_w[i]
            biases[i] += vel_b[i]

    return MlpModel(
        layer_sizes=layer_sizes,
        weights=weights,
        biases=biases,
        scale_offset=offset,
        scale_divisor=divisor,
    )


def predict_proba_mlp(model: MlpModel, x: np.ndarray) -> float | np.ndarray:
    """Probability of the positive class; accepts a single vector or a batch."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = x.reshape(1, -1) if single else x
    X = (X - model.scale_offset) / model.scale_divisor
    _zs, activations = _forward(model.weights, model.biases, X)
    p = activations[-1].reshape(-1)
    return float(p[0]) if single else p
