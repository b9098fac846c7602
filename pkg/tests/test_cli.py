import json

import pytest

from obfdetect.cli import run
from obfdetect.models import load_bundle, save_bundle


@pytest.fixture(scope="module")
def workspace(tmp_path_factory, request):
    """Quickstart pipeline: synth -> features -> train -> scan -> report."""
    root = tmp_path_factory.mktemp("cli")
    config = {
        "cells": [
            {"name": "none", "tool_style": "none", "count": 10},
            {"name": "pg", "tool_style": "proguard-like", "techniques": ["IR"], "count": 6},
            {"name": "alla", "tool_style": "allatori-like", "techniques": ["IR", "CF", "SE"], "count": 6},
            {"name": "dasho", "tool_style": "dasho-like", "techniques": ["IR", "CF", "SE"], "count": 6},
            {"name": "other", "tool_style": "other-like", "techniques": ["CF", "SE"], "count": 6},
        ]
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config))

    assert run(["synth", "--config", str(config_path), "--out", str(root / "corpus"), "--seed", "5"]) == 0
    assert run([
        "features",
        "--apks", str(root / "corpus/apks"),
        "--labels", str(root / "corpus/labels.jsonl"),
        "--out", str(root / "features.jsonl"),
    ]) == 0
    assert run([
        "train", "--data", str(root / "features.jsonl"),
        "--out", str(root / "bundle.json"), "--seed", "3",
        "--mlp-epochs", "300", "--rf-trees", "30",
    ]) == 0
    assert run([
        "scan",
        "--apks", str(root / "corpus/apks"),
        "--manifest", str(root / "corpus/metadata.jsonl"),
        "--bundle", str(root / "bundle.json"),
        "--out", str(root / "scan"),
        "--workers", "2",
    ]) == 0
    assert run([
        "report",
        "--records", str(root / "scan/records.jsonl"),
        "--out", str(root / "report"),
        "--top-k", "5,20",
        "--top-devs", "5",
    ]) == 0
    return root


def test_quickstart_outputs_exist(workspace):
    assert (workspace / "bundle.json").exists()
    assert (workspace / "scan/records.jsonl").exists()
    for stem in ("report_by_year", "report_by_genre", "report_developers", "report_topk"):
        assert (workspace / "report" / f"{stem}.csv").exists()
        assert (workspace / "report" / f"{stem}.json").exists()
        assert (workspace / "report" / f"{stem}.png").exists()


def test_predict_emits_analysis_record(workspace, capsys):
    rc = run([
        "predict",
        "--apk", str(workspace / "corpus/apks/alla-0003.apk"),
        "--bundle", str(workspace / "bundle.json"),
    ])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["apk_id"] == "alla-0003"
    assert doc["obfuscated"] is True
    assert set(doc["tool_probs"]) == {"ProGuard", "Allatori", "DashO"}


def test_features_single_mode(workspace, capsys):
    rc = run(["features", "--apk", str(workspace / "corpus/apks/none-0001.apk")])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc["features"]) == 37
    assert doc["counts"]["class_names"] > 0


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    for command in ("features", "train", "predict", "scan", "report", "synth"):
        assert run([command, "--help"]) == 0
        assert capsys.readouterr().out  # help text printed


def test_unknown_flag_is_usage_error(capsys):
    assert run(["predict", "--nope"]) == 1
    assert "error" in capsys.readouterr().err


def test_missing_subcommand_is_usage_error():
    assert run([]) == 1


def test_missing_input_is_data_error(workspace, tmp_path, capsys):
    rc = run(["scan", "--apks", str(tmp_path), "--manifest", str(tmp_path / "none.jsonl"),
              "--bundle", str(workspace / "bundle.json"), "--out", str(tmp_path / "out")])
    assert rc == 2
    assert capsys.readouterr().err.strip()


def test_predict_with_corrupt_bundle_is_data_error(workspace, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    rc = run(["predict", "--apk", str(workspace / "corpus/apks/none-0001.apk"),
              "--bundle", str(bad)])
    assert rc == 2


def test_scan_is_resumable_via_cli(workspace, tmp_path):
    out = tmp_path / "rescan"
    args = [
        "scan",
        "--apks", str(workspace / "corpus/apks"),
        "--manifest", str(workspace / "corpus/metadata.jsonl"),
        "--bundle", str(workspace / "bundle.json"),
        "--out", str(out),
    ]
    assert run(args) == 0
    first = (out / "records.jsonl").read_text()
    assert run(args) == 0  # rerun: nothing to do, log unchanged
    assert (out / "records.jsonl").read_text() == first


def test_identical_invocations_identical_outputs(workspace, tmp_path):
    for name in ("r1", "r2"):
        assert run([
            "report",
            "--records", str(workspace / "scan/records.jsonl"),
            "--out", str(tmp_path / name),
            "--top-k", "5",
            "--top-devs", "3",
            "--no-figures",
        ]) == 0
    for path in sorted((tmp_path / "r1").iterdir()):
        assert path.read_bytes() == (tmp_path / "r2" / path.name).read_bytes()
