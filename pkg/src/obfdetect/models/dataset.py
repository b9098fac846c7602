"""Labeled feature datasets for binary classifier training."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateDataset
from ..features import N_FEATURES


@dataclass
class Dataset:
    """Feature matrix plus binary labels.

    split_seed drives every data split derived from this dataset (CV folds),
    so identical datasets always fold identically.
    """

    X: np.ndarray  # (n, 37) float64
    y: np.ndarray  # (n,) values in {0, 1}
    split_seed: int = 0

    def __post_init__(self) -> None:
        self.X = np.asarray(self.X, dtype=float)
        self.y = np.asarray(self.y, dtype=int)
        if self.X.ndim != 2 or self.X.shape[1] != N_FEATURES:
            raise ValueError(f"feature matrix must be (n, {N_FEATURES}), got {self.X.shape}")
        if self.y.shape != (self.X.shape[0],):
            raise ValueError("label vector length does not match feature matrix")
        if not np.isin(self.y, (0, 1)).all():
            raise ValueError("labels must be 0 or 1")

    def __len__(self) -> int:
        return self.X.shape[0]

    @classmethod
    def from_rows(cls, rows, split_seed: int = 0) -> "Dataset":
        """Build from an iterable of (feature vector, label) pairs."""
        pairs = list(rows)
        if not pairs:
            return cls(np.empty((0, N_FEATURES)), np.empty(0, dtype=int), split_seed)
        X = np.vstack([np.asarray(fv, dtype=float) for fv, _ in pairs])
        y = np.array([int(label) for _, label in pairs])
        return cls(X, y, split_seed)

    def require_both_classes(self) -> None:
        classes = np.unique(self.y)
        if classes.size < 2:
            present = classes.tolist()
            raise DegenerateDataset(
                f"training data contains a single class (labels present: {present})"
            )


def stratified_folds(data: Dataset, folds: int) -> list[np.ndarray]:
    """Deterministic stratified fold assignment (round-robin per class after
    a seeded shuffle). Returns per-fold index arrays."""
    rng = np.random.default_rng(data.split_seed)
    assignments: list[list[int]] = [[] for _ in range(folds)]
    for label in (0, 1):
        idx = np.flatnonzero(data.y == label)
        rng.shuffle(idx)
        for i, row in enumerate(idx):
            assignments[i % folds].append(int(row))
    return [np.array(sorted(a), dtype=int) for a in assignments]
