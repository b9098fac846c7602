import json

import numpy as np
import pytest

from obfdetect.errors import ContractMismatch, CorruptBundle, VersionMismatch
from obfdetect.labels import TECHNIQUE_ORDER, TOOL_ORDER
from obfdetect.models import load_bundle, predict_proba_mlp, predict_proba_rf, save_bundle


def _all_predictions(bundle, X):
    out = [np.atleast_1d(predict_proba_mlp(bundle.obfuscation_detector, X))]
    for tool in TOOL_ORDER:
        out.append(np.atleast_1d(predict_proba_rf(bundle.tool_classifiers[tool], X)))
    for tech in TECHNIQUE_ORDER:
        out.append(np.atleast_1d(predict_proba_rf(bundle.technique_classifiers[tech], X)))
    return np.vstack(out)


def test_round_trip_predictions_bit_identical(tmp_path, mini_bundle, rng):
    path = tmp_path / "bundle.json"
    save_bundle(mini_bundle, path)
    loaded = load_bundle(path)
    X = rng.uniform(0, 100, size=(100, 37))
    before = _all_predictions(mini_bundle, X)
    after = _all_predictions(loaded, X)
    assert np.array_equal(before, after)


def test_save_is_deterministic(tmp_path, mini_bundle):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    save_bundle(mini_bundle, a)
    save_bundle(mini_bundle, b)
    assert a.read_bytes() == b.read_bytes()


def test_version_mismatch(tmp_path, mini_bundle):
    path = tmp_path / "bundle.json"
    save_bundle(mini_bundle, path)
    doc = json.loads(path.read_text())
    doc["format_version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(VersionMismatch):
        load_bundle(path)


def test_contract_mismatch(tmp_path, mini_bundle):
    path = tmp_path / "bundle.json"
    save_bundle(mini_bundle, path)
    doc = json.loads(path.read_text())
    doc["feature_contract_hash"] = "0" * 64
    path.write_text(json.dumps(doc))
    with pytest.raises(ContractMismatch):
        load_bundle(path)


def test_truncated_file_is_corrupt(tmp_path, mini_bundle):
    path = tmp_path / "bundle.json"
    save_bundle(mini_bundle, path)
    path.write_bytes(path.read_bytes()[: path.stat().st_size // 2])
    with pytest.raises(CorruptBundle):
        load_bundle(path)


def test_missing_model_is_corrupt(tmp_path, mini_bundle):
    path = tmp_path / "bundle.json"
    save_bundle(mini_bundle, path)
    doc = json.loads(path.read_text())
    del doc["models"]["tool"]["DashO"]
    path.write_text(json.dumps(doc))
    with pytest.raises(CorruptBundle):
        load_bundle(path)


def test_non_json_is_corrupt(tmp_path):
    path = tmp_path / "bundle.json"
    path.write_bytes(b"\x00\x01 not json")
    with pytest.raises(CorruptBundle):
        load_bundle(path)
