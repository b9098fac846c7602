"""Binary random forest: bootstrap resamples, greedy Gini splits over a
random feature subset per node, leaf probabilities averaged across trees.

Tree i derives its RNG from bootstrap_seed + i, so forests retrain
bit-identically and trees could be grown in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..features import N_FEATURES
from .dataset import Dataset


@dataclass
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 12
    min_samples_leaf: int = 2
    features_per_split: int | None = None  # default ceil(sqrt(n_features))
    bootstrap_seed: int = 0

    def fit(self, data: Dataset) -> "RandomForestModel":
        return train_random_forest(data, self)


@dataclass
class TreeNode:
    """Internal node (feature/threshold set) or leaf (positive_fraction set)."""

    feature: int = -1
    threshold: float = 0.0
    left: Optional["TreeNode"] = None
    right: Optional["TreeNode"] = None
    positive_fraction: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return self.left is None


@dataclass
class RandomForestModel:
    trees: list[TreeNode]
    n_trees: int
    max_depth: int
    min_samples_leaf: int
    bootstrap_seed: int

    def predict_proba(self, x: np.ndarray) -> float | np.ndarray:
        return predict_proba_rf(self, x)


def _gini(pos: float, n: float) -> float:
    p = pos / n
    return 1.0 - p * p - (1.0 - p) * (1.0 - p)


def _best_split(X, y, rows, features, min_leaf):
    """Best (weighted Gini, feature, threshold) over candidate splits, or
    None when no split improves on the parent node."""
    n = rows.size
    total_pos = int(y[rows].sum())
    parent = _gini(total_pos, n)
    best = None  # (weighted_gini, feature, threshold)
    for f in features:
        values = X[rows, f]
        order = np.argsort(values, kind="stable")
        sv = values[order]
        sy = y[rows][order]
        cut = np.flatnonzero(sv[1:] != sv[:-1])  # split after sorted position i
        if cut.size == 0:
            continue
        n_left = cut + 1
        n_right = n - n_left
        valid = (n_left >= min_leaf) & (n_right >= min_leaf)
        if not valid.any():
            continue
        pos_left = np.cumsum(sy)[cut]
        pos_right = total_pos - pos_left
        gini_left = 1.0 - (pos_left / n_left) ** 2 - ((n_left - pos_left) / n_left) ** 2
        gini_right = (
            1.0 - (pos_right / n_right) ** 2 - ((n_right - pos_right) / n_right) ** 2
        )
        weighted = (n_left * gini_left + n_right * gini_right) / n
        weighted[~valid] = np.inf
        k = int(np.argmin(weighted))  # first index wins ties
        if weighted[k] < parent - 1e-12 and (best is None or weighted[k] < best[0]):
            threshold = float((sv[cut[k]] + sv[cut[k] + 1]) / 2.0)
            best = (float(weighted[k]), int(f), threshold)
    return best


def _grow(X, y, rows, depth, config, n_features, k_features, rng) -> TreeNode:
    n = rows.size
    pos = int(y[rows].sum())
    node = TreeNode(positive_fraction=pos / n)
    if (
        depth >= config.max_depth
        or pos == 0
        or pos == n
        or n < 2 * config.min_samples_leaf
    ):
        return node
    features = rng.choice(n_features, size=k_features, replace=False)
    best = _best_split(X, y, rows, features, config.min_samples_leaf)
    if best is None:
        return node
    _score, feature, threshold = best
    mask = X[rows, feature] <= threshold
    node.feature = feature
    node.threshold = threshold
    node.left = _grow(X, y, rows[mask], depth + 1, config, n_features, k_features, rng)
    node.right = _grow(X, y, rows[~mask], depth + 1, config, n_features, k_features, rng)
    return node


def train_random_forest(
    data: Dataset, config: ForestConfig | None = None
) -> RandomForestModel:
    config = config or ForestConfig()
    data.require_both_classes()
    n = len(data)
    n_features = data.X.shape[1]
    k_features = config.features_per_split or math.ceil(math.sqrt(n_features))
    k_features = min(k_features, n_features)

    trees = []
    for i in range(config.n_trees):
        rng = np.random.default_rng(config.bootstrap_seed + i)
        sample = rng.integers(0, n, size=n)
        trees.append(
            _grow(
                data.X,
                data.y,
                np.asarray(sample),
                0,
                config,
                n_features,
                k_features,
                rng,
            )
        )
    return RandomForestModel(
        trees=trees,
        n_trees=config.n_trees,
        max_depth=config.max_depth,
        min_samples_leaf=config.min_samples_leaf,
        bootstrap_seed=config.bootstrap_seed,
    )


def _tree_fractions(node: TreeNode, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0])
    for i, x in enumerate(X):
        cur = node
        while not cur.is_leaf:
            cur = cur.left if x[cur.feature] <= cur.threshold else cur.right
        out[i] = cur.positive_fraction
    return out


def predict_proba_rf(model: RandomForestModel, x: np.ndarray) -> float | np.ndarray:
    """Mean leaf positive-fraction across trees; single vector or batch."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    X = x.reshape(1, -1) if single else x
    acc = np.zeros(X.shape[0])
    for tree in model.trees:
        acc += _tree_fractions(tree, X)
    p = acc / len(model.trees)
    return float(p[0]) if single else p
