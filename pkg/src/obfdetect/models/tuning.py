"""Hyperparameter selection by k-fold cross-validated accuracy."""

from __future__ import annotations

import numpy as np

from .dataset import Dataset, stratified_folds


def _fold_accuracy(config, train: Dataset, val: Dataset) -> float:
    model = config.fit(train)
    p = np.atleast_1d(model.predict_proba(val.X))
    predicted = (p >= 0.5).astype(int)
    return float((predicted == val.y).mean())


def grid_search(data: Dataset, grid: list, folds: int):
    """Return the grid point with the best mean k-fold accuracy.

    Grid points are any configs exposing .fit(dataset); ties are broken by
    grid order (first wins). Folds are stratified and derived from
    data.split_seed, so results are reproducible.
    """
    if not grid:
        raise ValueError("grid must not be empty")
    if folds < 2:
        raise ValueError("folds must be at least 2")
    data.require_both_classes()

    fold_indices = stratified_folds(data, folds)
    all_rows = np.arange(len(data))
    best_config = None
    best_score = -1.0
    for config in grid:
        scores = []
        for held_out in fold_indices:
            if held_out.size == 0:
                continue
            train_rows = np.setdiff1d(all_rows, held_out)
            train = Dataset(data.X[train_rows], data.y[train_rows], data.split_seed)
            val = Dataset(data.X[held_out], data.y[held_out], data.split_seed)
            scores.append(_fold_accuracy(config, train, val))
        mean_score = float(np.mean(scores))
        if mean_score > best_score:
            best_score = mean_score
            best_config = config
    return best_config
