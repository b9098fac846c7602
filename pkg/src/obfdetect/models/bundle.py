"""Versioned JSON serialization of the seven-model classifier bank.

The file is self-describing (explicit array shapes, named models) and floats
survive the JSON round trip exactly, so a reloaded bundle predicts
bit-identically. Loading refuses files whose format version or feature
contract differs from this build.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..errors import ContractMismatch, CorruptBundle, VersionMismatch
from ..features import feature_contract_hash
from ..labels import TECHNIQUE_ORDER, TOOL_ORDER
from .forest import RandomForestModel, TreeNode
from .mlp import MlpModel

FORMAT_VERSION = 1


@dataclass
class ModelBundle:
    """Obfuscation detector plus the tool and technique classifier banks."""

    obfuscation_detector: MlpModel
    tool_classifiers: dict[str, RandomForestModel]  # keys: TOOL_ORDER
    technique_classifiers: dict[str, RandomForestModel]  # keys: TECHNIQUE_ORDER
    format_version: int = FORMAT_VERSION
    feature_contract_hash: str = field(default_factory=feature_contract_hash)

    def __post_init__(self) -> None:
        missing = [t for t in TOOL_ORDER if t not in self.tool_classifiers]
        missing += [t for t in TECHNIQUE_ORDER if t not in self.technique_classifiers]
        if missing:
            raise ValueError(f"bundle is missing classifiers: {missing}")


def _mlp_to_dict(model: MlpModel) -> dict:
    return {
        "kind": "mlp",
        "layer_sizes": list(model.layer_sizes),
        "weights": [w.tolist() for w in model.weights],
        "biases": [b.tolist() for b in model.biases],
        "scale_offset": model.scale_offset.tolist(),
        "scale_divisor": model.scale_divisor.tolist(),
        "hidden_activation": model.hidden_activation,
        "output_activation": model.output_activation,
    }


def _mlp_from_dict(d: dict) -> MlpModel:
    layer_sizes = tuple(int(n) for n in d["layer_sizes"])
    weights = [np.array(w, dtype=float) for w in d["weights"]]
    biases = [np.array(b, dtype=float) for b in d["biases"]]
    for i, (fan_in, fan_out) in enumerate(zip(layer_sizes[:-1], layer_sizes[1:])):
        if weights[i].shape != (fan_in, fan_out) or biases[i].shape != (fan_out,):
            raise CorruptBundle(f"mlp layer {i} has inconsistent shapes")
    return MlpModel(
        layer_sizes=layer_sizes,
        weights=weights,
        biases=biases,
        scale_offset=np.array(d["scale_offset"], dtype=float),
        scale_divisor=np.array(d["scale_divisor"], dtype=float),
        hidden_activation=d["hidden_activation"],
        output_activation=d["output_activation"],
    )


def _tree_to_list(root: TreeNode) -> list[dict]:
    """Flatten a tree to a node list (root at index 0, children by index)."""
    nodes: list[dict] = []

    def visit(node: TreeNode) -> int:
        idx = len(nodes)
        if node.is_leaf:
            nodes.append({"p": node.positive_fraction})
        else:
            nodes.append({"f": node.feature, "t": node.threshold})
            nodes[idx]["l"] = visit(node.left)
            nodes[idx]["r"] = visit(node.right)
        return idx

    visit(root)
    return nodes


def _tree_from_list(nodes: list[dict]) -> TreeNode:
    def build(idx: int) -> TreeNode:
        d = nodes[idx]
        if "p" in d:
            return TreeNode(positive_fraction=float(d["p"]))
        return TreeNode(
            feature=int(d["f"]),
            threshold=float(d["t"]),
            left=build(int(d["l"])),
            right=build(int(d["r"])),
        )

    if not nodes:
        raise CorruptBundle("empty tree node list")
    return build(0)


def _forest_to_dict(model: RandomForestModel) -> dict:
    return {
        "kind": "random_forest",
        "n_trees": model.n_trees,
        "max_depth": model.max_depth,
        "min_samples_leaf": model.min_samples_leaf,
        "bootstrap_seed": model.bootstrap_seed,
        "trees": [_tree_to_list(t) for t in model.trees],
    }


def _forest_from_dict(d: dict) -> RandomForestModel:
    trees = [_tree_from_list(t) for t in d["trees"]]
    if len(trees) != int(d["n_trees"]):
        raise CorruptBundle("tree count does not match n_trees")
    return RandomForestModel(
        trees=trees,
        n_trees=int(d["n_trees"]),
        max_depth=int(d["max_depth"]),
        min_samples_leaf=int(d["min_samples_leaf"]),
        bootstrap_seed=int(d["bootstrap_seed"]),
    )


def bundle_to_dict(bundle: ModelBundle) -> dict:
    return {
        "format_version": bundle.format_version,
        "feature_contract_hash": bundle.feature_contract_hash,
        "models": {
            "obfuscation": _mlp_to_dict(bundle.obfuscation_detector),
            "tool": {t: _forest_to_dict(bundle.tool_classifiers[t]) for t in TOOL_ORDER},
            "technique": {
                t: _forest_to_dict(bundle.technique_classifiers[t])
                for t in TECHNIQUE_ORDER
            },
        },
    }


def save_bundle(bundle: ModelBundle, path: str | Path) -> None:
    path = Path(path)
    path.write_text(json.dumps(bundle_to_dict(bundle), indent=1), encoding="utf-8")


def load_bundle(path: str | Path) -> ModelBundle:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise CorruptBundle(f"{path}: not a valid bundle file: {exc}")
    if not isinstance(doc, dict):
        raise CorruptBundle(f"{path}: bundle root must be an object")

    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise VersionMismatch(
            f"{path}: bundle format {version!r}, this build reads {FORMAT_VERSION}"
        )
    contract = doc.get("feature_contract_hash")
    expected = feature_contract_hash()
    if contract != expected:
        raise ContractMismatch(
            f"{path}: bundle was trained under feature contract {contract!r}, "
            f"extractor implements {expected!r}"
        )

    try:
        models = doc["models"]
        detector = _mlp_from_dict(models["obfuscation"])
        tools = {t: _forest_from_dict(models["tool"][t]) for t in TOOL_ORDER}
        techniques = {
            t: _forest_from_dict(models["technique"][t]) for t in TECHNIQUE_ORDER
        }
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise CorruptBundle(f"{path}: malformed bundle structure: {exc!r}")

    return ModelBundle(
        obfuscation_detector=detector,
        tool_classifiers=tools,
        technique_classifiers=techniques,
        format_version=int(version),
        feature_contract_hash=str(contract),
    )
