import numpy as np
import pytest

from obfdetect.errors import DegenerateDataset
from obfdetect.models import (
    Dataset,
    ForestConfig,
    RandomForestModel,
    TreeNode,
    predict_proba_rf,
    train_random_forest,
)
from obfdetect.models.bundle import _forest_to_dict


def single_feature_dataset(rng, feature=1, n_per_class=12):
    X = rng.uniform(0, 100, size=(2 * n_per_class, 37))
    X[:n_per_class, feature] = rng.uniform(0, 45, n_per_class)
    X[n_per_class:, feature] = rng.uniform(55, 100, n_per_class)
    y = np.array([0] * n_per_class + [1] * n_per_class)
    return Dataset(X, y)


def leaf_forest(fractions):
    trees = [TreeNode(positive_fraction=f) for f in fractions]
    return RandomForestModel(
        trees=trees, n_trees=len(trees), max_depth=1, min_samples_leaf=1, bootstrap_seed=0
    )


def test_single_stump_finds_the_separating_feature(rng):
    # Only feature 1 separates: give the other columns constant values.
    n = 10
    X = np.full((2 * n, 37), 7.0)
    X[:n, 1] = rng.uniform(0, 45, n)
    X[n:, 1] = rng.uniform(55, 100, n)
    y = np.array([0] * n + [1] * n)
    config = ForestConfig(n_trees=1, max_depth=1, min_samples_leaf=1, features_per_split=37)
    model = train_random_forest(Dataset(X, y), config)
    root = model.trees[0]
    assert root.feature == 1
    assert X[:n, 1].max() < root.threshold <= X[n:, 1].min()


def test_separable_training_accuracy(rng):
    data = single_feature_dataset(rng)
    model = train_random_forest(data, ForestConfig(n_trees=30, bootstrap_seed=3))
    p = predict_proba_rf(model, data.X)
    assert (((p >= 0.5).astype(int)) == data.y).all()


def test_held_out_accuracy_at_least_090(rng):
    train = single_feature_dataset(rng, n_per_class=20)
    test = single_feature_dataset(rng, n_per_class=15)
    model = train_random_forest(train, ForestConfig(n_trees=50, bootstrap_seed=1))
    p = predict_proba_rf(model, test.X)
    accuracy = (((p >= 0.5).astype(int)) == test.y).mean()
    assert accuracy >= 0.9


def test_seeded_training_is_identical(rng):
    data = single_feature_dataset(rng)
    config = ForestConfig(n_trees=10, bootstrap_seed=77)
    a = train_random_forest(data, config)
    b = train_random_forest(data, config)
    assert _forest_to_dict(a) == _forest_to_dict(b)


def test_mean_of_leaf_fractions():
    assert predict_proba_rf(leaf_forest([1.0, 0.0]), np.zeros(37)) == 0.5
    assert predict_proba_rf(leaf_forest([1.0, 1.0, 1.0]), np.zeros(37)) == 1.0


def test_single_class_is_degenerate(rng):
    X = rng.uniform(0, 100, size=(5, 37))
    with pytest.raises(DegenerateDataset):
        train_random_forest(Dataset(X, np.zeros(5, dtype=int)), ForestConfig(n_trees=2))


def test_adding_unanimous_trees_weakly_increases(rng):
    data = single_feature_dataset(rng)
    model = train_random_forest(data, ForestConfig(n_trees=8, bootstrap_seed=2))
    bigger = RandomForestModel(
        trees=model.trees + [TreeNode(positive_fraction=1.0)] * 4,
        n_trees=model.n_trees + 4,
        max_depth=model.max_depth,
        min_samples_leaf=model.min_samples_leaf,
        bootstrap_seed=model.bootstrap_seed,
    )
    X = rng.uniform(0, 100, size=(100, 37))
    assert (predict_proba_rf(bigger, X) >= predict_proba_rf(model, X) - 1e-12).all()


def test_probabilities_always_in_unit_interval(rng):
    data = single_feature_dataset(rng)
    model = train_random_forest(data, ForestConfig(n_trees=20, bootstrap_seed=5))
    X = rng.uniform(0, 100, size=(500, 37))
    p = predict_proba_rf(model, X)
    assert ((p >= 0) & (p <= 1)).all()


def test_memorizes_ten_random_rows(rng):
    X = rng.uniform(0, 100, size=(10, 37))
    y = np.array([0, 1, 1, 0, 1, 0, 0, 1, 1, 0])
    config = ForestConfig(n_trees=100, max_depth=20, min_samples_leaf=1, bootstrap_seed=7)
    model = train_random_forest(Dataset(X, y), config)
    p = predict_proba_rf(model, X)
    assert (((p >= 0.5).astype(int)) == y).all()


def test_depth_and_leaf_limits_respected(rng):
    data = single_feature_dataset(rng)
    config = ForestConfig(n_trees=5, max_depth=3, min_samples_leaf=4, bootstrap_seed=9)
    model = train_random_forest(data, config)

    def check(node, depth):
        assert depth <= 3
        if node.is_leaf:
            assert 0.0 <= node.positive_fraction <= 1.0
            return
        assert 0 <= node.feature < 37
        check(node.left, depth + 1)
        check(node.right, depth + 1)

    for tree in model.trees:
        check(tree, 0)
