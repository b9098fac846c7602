"""Command-line entry point.

Subcommands: features, train, predict, scan, report, synth. Exit codes:
0 success, 1 usage error, 2 input/data error, 3 internal error. Diagnostics
go to stderr; data goes to stdout or the --out target.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path

from . import errors
from .corpus import (
    build_report,
    emit_report,
    read_records,
    render_figures,
    scan_corpus,
)
from .detector import analyze_path
from .dexcore import open_container, symbols_from_payloads
from .features import compute_features, symbol_counts
from .models import (
    ForestConfig,
    MlpConfig,
    grid_search,
    load_bundle,
    read_labeled_jsonl,
    save_bundle,
    train_bank,
)
from .models.dataset import Dataset
from .synth import DEFAULT_CELLS, build_labeled_corpus, cells_from_config

# Grid explored by `train --grid` (per model family, 3-fold CV on accuracy).
MLP_GRID = [
    {"hidden_sizes": (16,), "learning_rate": 0.01},
    {"hidden_sizes": (32,), "learning_rate": 0.01},
    {"hidden_sizes": (32,), "learning_rate": 0.1},
    {"hidden_sizes": (64,), "learning_rate": 0.1},
]
RF_GRID = [
    {"n_trees": 50, "max_depth": 8},
    {"n_trees": 100, "max_depth": 8},
    {"n_trees": 50, "max_depth": 12},
    {"n_trees": 100, "max_depth": 12},
]


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage errors, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="obfdetect",
        description="Detect code obfuscation in Android APKs: per-app verdicts "
        "(obfuscated? which tool? which techniques?), corpus-scale scanning and "
        "reports, and synthetic labeled corpora for training.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser(
        "features",
        help="extract the 37-feature vector from APKs",
        description="Single mode (--apk) prints one JSON object "
        "{apk, features, counts} to stdout. Batch mode (--apks + --labels + "
        "--out) joins extracted vectors with a labels manifest into a labeled "
        "feature JSONL for training.",
    )
    p.add_argument("--apk", help="single APK (or bare DEX) to extract")
    p.add_argument("--apks", help="directory of <app_id>.apk files (batch mode)")
    p.add_argument("--labels", help="labels manifest JSONL (batch mode)")
    p.add_argument("--out", help="output labeled feature JSONL (batch mode)")

    p = sub.add_parser(
        "train",
        help="train the classifier bank and write a model bundle",
        description="Consumes a labeled feature file (JSONL rows "
        '{"features": [37 numbers], "label": {"obfuscated": bool, "tool": str|null, '
        '"techniques": {"ir","cf","se"}|null}}) and writes a versioned JSON bundle '
        "holding the obfuscation detector (MLP) plus three tool and three "
        "technique random forests.",
    )
    p.add_argument("--data", required=True, help="labeled feature JSONL")
    p.add_argument("--out", required=True, help="bundle output path")
    p.add_argument("--seed", type=int, default=0, help="training seed (default 0)")
    p.add_argument("--mlp-hidden", type=int, default=32, help="MLP hidden units (default 32)")
    p.add_argument("--mlp-epochs", type=int, default=500, help="MLP epochs (default 500)")
    p.add_argument("--mlp-lr", type=float, default=0.01, help="MLP learning rate (default 0.01)")
    p.add_argument("--rf-trees", type=int, default=100, help="forest size (default 100)")
    p.add_argument("--rf-depth", type=int, default=12, help="max tree depth (default 12)")
    p.add_argument(
        "--rf-min-leaf", type=int, default=2, help="min samples per leaf (default 2)"
    )
    p.add_argument(
        "--grid",
        action="store_true",
        help="pick hyperparameters by 3-fold grid search on the obfuscation "
        "labels. MLP grid: (hidden, lr) in (16,0.01) (32,0.01) (32,0.1) "
        "(64,0.1); RF grid: (trees, depth) in (50,8) (100,8) (50,12) (100,12).",
    )

    p = sub.add_parser(
        "predict",
        help="analyze one APK with a trained bundle",
        description="Prints the analysis record (obfuscated?, tool, techniques, "
        "probabilities) as one JSON object on stdout.",
    )
    p.add_argument("--apk", required=True, help="APK (or bare DEX) to analyze")
    p.add_argument("--bundle", required=True, help="model bundle path")

    p = sub.add_parser(
        "scan",
        help="scan a corpus of APKs into a record log",
        description="Analyzes every app named in the metadata manifest; writes "
        "an append-only JSONL record log that a rerun resumes from.",
    )
    p.add_argument("--apks", required=True, help="directory of <app_id>.apk files")
    p.add_argument("--manifest", required=True, help="app metadata manifest JSONL")
    p.add_argument("--bundle", required=True, help="model bundle path")
    p.add_argument("--out", required=True, help="output directory for records.jsonl")
    p.add_argument("--workers", type=int, default=1, help="parallel workers (default 1)")

    p = sub.add_parser(
        "report",
        help="aggregate a record log into reports and figures",
        description="Writes report_by_year / report_by_genre / "
        "report_developers / report_topk as CSV and JSON plus rendered PNG "
        "figures into --out.",
    )
    p.add_argument("--records", required=True, help="record log JSONL from scan")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument(
        "--top-k",
        default="1000,10000",
        help="comma-separated ascending k values for top-k rows (default 1000,10000)",
    )
    p.add_argument(
        "--top-devs", type=int, default=100, help="developers to bucket (default 100)"
    )
    p.add_argument(
        "--formats",
        default="json,csv",
        help="comma-separated subset of json,csv (default both)",
    )
    p.add_argument(
        "--no-figures", action="store_true", help="skip PNG figure rendering"
    )

    p = sub.add_parser(
        "synth",
        help="generate a labeled synthetic APK corpus",
        description="Writes apks/, labels.jsonl and metadata.jsonl under --out. "
        'The config JSON maps corpus cells to generation profiles: {"cells": '
        '[{"name": str, "tool_style": "none|proguard-like|allatori-like|'
        'dasho-like|other-like", "techniques": ["IR","CF","SE"], "count": int, '
        '"overrides": {profile fields}}]}. Without --config a balanced default '
        "corpus is generated.",
    )
    p.add_argument("--config", help="corpus config JSON (default: built-in cells)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--seed", type=int, default=0, help="corpus seed (default 0)")

    return parser


def _cmd_features(args) -> int:
    single = args.apk is not None
    batch = args.apks is not None or args.labels is not None or args.out is not None
    if single == batch:
        print(
            "features: use either --apk, or all of --apks/--labels/--out",
            file=sys.stderr,
        )
        return 1
    if single:
        container = open_container(args.apk)
        symbols = symbols_from_payloads(container.dex_payloads)
        doc = {
            "apk": str(args.apk),
            "features": compute_features(symbols).tolist(),
            "counts": symbol_counts(symbols),
        }
        print(json.dumps(doc))
        return 0

    if not (args.apks and args.labels and args.out):
        print("features: batch mode needs --apks, --labels and --out", file=sys.stderr)
        return 1
    apk_dir = Path(args.apks)
    n = 0
    with open(args.labels, "r", encoding="utf-8") as lf, open(
        args.out, "w", encoding="utf-8"
    ) as out:
        for lineno, line in enumerate(lf, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                label = json.loads(line)
                app_id = label.pop("app_id")
            except (json.JSONDecodeError, KeyError) as exc:
                print(f"{args.labels}:{lineno}: bad label row: {exc}", file=sys.stderr)
                return 2
            container = open_container(apk_dir / f"{app_id}.apk")
            symbols = symbols_from_payloads(container.dex_payloads)
            out.write(
                json.dumps(
                    {"features": compute_features(symbols).tolist(), "label": label}
                )
                + "\n"
            )
            n += 1
    print(f"wrote {n} labeled feature rows to {args.out}", file=sys.stderr)
    return 0


def _cmd_train(args) -> int:
    rows = read_labeled_jsonl(args.data)
    mlp_config = MlpConfig(
        hidden_sizes=(args.mlp_hidden,),
        epochs=args.mlp_epochs,
        learning_rate=args.mlp_lr,
        seed=args.seed,
    )
    forest_config = ForestConfig(
        n_trees=args.rf_trees,
        max_depth=args.rf_depth,
        min_samples_leaf=args.rf_min_leaf,
        bootstrap_seed=args.seed,
    )
    if args.grid:
        detector_data = Dataset.from_rows(
            ((r.features, int(r.obfuscated)) for r in rows), split_seed=args.seed
        )
        mlp_grid = [
            MlpConfig(epochs=args.mlp_epochs, seed=args.seed, **point)
            for point in MLP_GRID
        ]
        mlp_config = grid_search(detector_data, mlp_grid, folds=3)
        print(f"grid: MLP {mlp_config}", file=sys.stderr)
        rf_grid = [
            ForestConfig(
                min_samples_leaf=args.rf_min_leaf, bootstrap_seed=args.seed, **point
            )
            for point in RF_GRID
        ]
        forest_config = grid_search(detector_data, rf_grid, folds=3)
        print(f"grid: RF {forest_config}", file=sys.stderr)

    bundle = train_bank(rows, mlp_config, forest_config, split_seed=args.seed)
    save_bundle(bundle, args.out)
    print(f"trained bank on {len(rows)} rows -> {args.out}", file=sys.stderr)
    return 0


def _cmd_predict(args) -> int:
    bundle = load_bundle(args.bundle)
    record = analyze_path(bundle, args.apk)
    print(json.dumps(record.to_dict()))
    return 0


def _cmd_scan(args) -> int:
    bundle = load_bundle(args.bundle)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    log_path = out_dir / "records.jsonl"
    records = scan_corpus(
        args.apks, args.manifest, bundle, log_path, workers=max(args.workers, 1)
    )
    errored = sum(1 for r in records if r.analysis.error is not None)
    obfuscated = sum(1 for r in records if r.analysis.obfuscated)
    print(
        f"scanned {len(records)} apps ({obfuscated} obfuscated, {errored} errors) "
        f"-> {log_path}",
        file=sys.stderr,
    )
    return 0


def _cmd_report(args) -> int:
    records = read_records(args.records)
    if not records:
        print(f"{args.records}: no records to report on", file=sys.stderr)
        return 2
    try:
        ks = sorted({int(k) for k in args.top_k.split(",") if k.strip()})
    except ValueError:
        print(f"--top-k: expected comma-separated integers, got {args.top_k!r}", file=sys.stderr)
        return 1
    formats = tuple(f.strip() for f in args.formats.split(",") if f.strip())
    report = build_report(records, ks=ks, top_devs=args.top_devs)
    written = emit_report(report, args.out, formats=formats)
    if not args.no_figures:
        written += render_figures(report, args.out)
    for path in written:
        print(f"wrote {path}", file=sys.stderr)
    return 0


def _cmd_synth(args) -> int:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            cells = cells_from_config(json.load(fh))
    else:
        cells = list(DEFAULT_CELLS)
    paths = build_labeled_corpus(cells, args.out, seed=args.seed)
    total = sum(c.count for c in cells)
    print(
        f"generated {total} apps under {paths.apk_dir} "
        f"(labels: {paths.labels_path}, metadata: {paths.metadata_path})",
        file=sys.stderr,
    )
    return 0


_COMMANDS = {
    "features": _cmd_features,
    "train": _cmd_train,
    "predict": _cmd_predict,
    "scan": _cmd_scan,
    "report": _cmd_report,
    "synth": _cmd_synth,
}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse --help exits 0; usage errors exit 1
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (errors.Error, OSError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"{parser.prog} {args.command}: internal error: {exc}", file=sys.stderr)
        traceback.print_exc()
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
