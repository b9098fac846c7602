"""Train the full classifier bank from labeled feature rows.

One binary MLP decides obfuscated vs not on all rows; three one-vs-other
random forests identify the tool and three more the techniques, both trained
on the obfuscated rows only (non-obfuscated apps carry no tool or technique).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import DegenerateDataset
from ..features import N_FEATURES
from ..labels import TECHNIQUE_ORDER, TOOL_ORDER, TechniqueSet
from .bundle import ModelBundle
from .dataset import Dataset
from .forest import ForestConfig, train_random_forest
from .mlp import MlpConfig, train_mlp


@dataclass
class LabeledVector:
    features: np.ndarray
    obfuscated: bool
    tool: str | None = None
    techniques: TechniqueSet | None = None


def read_labeled_jsonl(path: str | Path) -> list[LabeledVector]:
    """Read {"features": [...], "label": {...}} rows."""
    rows: list[LabeledVector] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
                features = np.asarray(doc["features"], dtype=float)
                label = doc["label"]
                obfuscated = bool(label["obfuscated"])
                tool = label.get("tool")
                techniques = label.get("techniques")
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad labeled feature row: {exc!r}")
            if features.shape != (N_FEATURES,):
                raise ValueError(
                    f"{path}:{lineno}: expected {N_FEATURES} features, got {features.shape}"
                )
            rows.append(
                LabeledVector(
                    features=features,
                    obfuscated=obfuscated,
                    tool=str(tool) if tool is not None else None,
                    techniques=TechniqueSet.from_dict(techniques)
                    if techniques is not None
                    else None,
                )
            )
    return rows


def train_bank(
    rows: list[LabeledVector],
    mlp_config: MlpConfig | None = None,
    forest_config: ForestConfig | None = None,
    split_seed: int = 0,
) -> ModelBundle:
    if not rows:
        raise DegenerateDataset("no labeled rows to train on")

    detector_data = Dataset.from_rows(
        ((r.features, int(r.obfuscated)) for r in rows), split_seed
    )
    detector = train_mlp(detector_data, mlp_config)

    obfuscated = [r for r in rows if r.obfuscated]
    tool_rows = [r for r in obfuscated if r.tool is not None]
    technique_rows = [r for r in obfuscated if r.techniques is not None]

    tool_classifiers = {}
    for tool in TOOL_ORDER:
        data = Dataset.from_rows(
            ((r.features, int(r.tool == tool)) for r in tool_rows), split_seed
        )
        tool_classifiers[tool] = train_random_forest(data, forest_config)

    technique_classifiers = {}
    flags = {
        "IR": lambda t: t.ir,
        "CF": lambda t: t.cf,
        "SE": lambda t: t.se,
    }
    for name in TECHNIQUE_ORDER:
        data = Dataset.from_rows(
            ((r.features, int(flags[name](r.techniques))) for r in technique_rows),
            split_seed,
        )
        technique_classifiers[name] = train_random_forest(data, forest_config)

    return ModelBundle(
        obfuscation_detector=detector,
        tool_classifiers=tool_classifiers,
        technique_classifiers=technique_classifiers,
    )
