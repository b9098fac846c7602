"""Shared fixtures: tiny crafted DEX/APK files and a small trained bundle."""

from __future__ import annotations

import io
import zipfile

import numpy as np
import pytest

from obfdetect.labels import TechniqueSet
from obfdetect.models import ForestConfig, MlpConfig, train_bank
from obfdetect.models.bank import LabeledVector
from obfdetect.synth import ClassSpec, MethodSpec, build_dex, generate_dex, tool_style_profile
from obfdetect.dexcore import extract_symbols, parse_dex
from obfdetect.features import compute_features


def make_apk(path, payloads, extra_entries=()):
    """Write a ZIP with classes*.dex payloads plus optional extra entries."""
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        for i, payload in enumerate(payloads):
            name = "classes.dex" if i == 0 else f"classes{i + 1}.dex"
            zf.writestr(zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0)), payload)
        for name, payload in extra_entries:
            zf.writestr(zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0)), payload)


@pytest.fixture(scope="session")
def tiny_dex() -> bytes:
    """One class with a constructor, a regular method and a field."""
    return build_dex(
        [
            ClassSpec(
                "La/B;",
                methods=(
                    MethodSpec("<init>", ("const", "return")),
                    MethodSpec("run", ("nop", "goto", "invoke", "if", "move", "add", "return")),
                ),
                fields=("x",),
            )
        ],
        other_strings=("hello", "world"),
    )


@pytest.fixture(scope="session")
def second_dex() -> bytes:
    return build_dex(
        [ClassSpec("Lcom/app/Main;", methods=(MethodSpec("start", ("invoke", "return")),))],
        other_strings=("payload",),
    )


def _labeled_rows(cells, seed):
    rows = []
    index = 0
    for style, techniques, tool, count in cells:
        for _ in range(count):
            profile = tool_style_profile(style, techniques=techniques, seed=seed + index * 7919)
            _payload, declared = generate_dex(profile)
            rows.append(
                LabeledVector(
                    features=compute_features(declared),
                    obfuscated=profile.label.obfuscated,
                    tool=tool,
                    techniques=profile.label.techniques if profile.label.obfuscated else None,
                )
            )
            index += 1
    return rows


@pytest.fixture(scope="session")
def mini_bundle():
    """A small but fully functional bundle trained on generated vectors."""
    cells = [
        ("none", TechniqueSet(), None, 16),
        ("proguard-like", TechniqueSet(ir=True), "ProGuard", 10),
        ("allatori-like", TechniqueSet(True, True, True), "Allatori", 10),
        ("dasho-like", TechniqueSet(True, True, True), "DashO", 10),
        ("other-like", TechniqueSet(ir=True, cf=True), "Other", 6),
        ("other-like", TechniqueSet(cf=True, se=True), "Other", 6),
    ]
    rows = _labeled_rows(cells, seed=1234)
    return train_bank(
        rows,
        MlpConfig(epochs=400, seed=5),
        ForestConfig(n_trees=40, max_depth=10, bootstrap_seed=5),
        split_seed=5,
    )


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)


def checked_extract(payload: bytes):
    return extract_symbols(parse_dex(payload))
