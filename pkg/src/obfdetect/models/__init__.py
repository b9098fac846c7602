"""Classifier training, prediction, tuning and bundle serialization."""

from .dataset import Dataset, stratified_folds
from .mlp import MlpConfig, MlpModel, loss_and_gradients, predict_proba_mlp, train_mlp
from .forest import (
    ForestConfig,
    RandomForestModel,
    TreeNode,
    predict_proba_rf,
    train_random_forest,
)
from .tuning import grid_search
from .bundle import FORMAT_VERSION, ModelBundle, load_bundle, save_bundle
from .bank import LabeledVector, read_labeled_jsonl, train_bank

__all__ = [
    "Dataset",
    "stratified_folds",
    "MlpConfig",
    "MlpModel",
    "train_mlp",
    "predict_proba_mlp",
    "loss_and_gradients",
    "ForestConfig",
    "RandomForestModel",
    "TreeNode",
    "train_random_forest",
    "predict_proba_rf",
    "grid_search",
    "FORMAT_VERSION",
    "ModelBundle",
    "save_bundle",
    "load_bundle",
    "LabeledVector",
    "read_labeled_jsonl",
    "train_bank",
]
