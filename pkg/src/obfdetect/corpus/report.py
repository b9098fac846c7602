"""Report emission: CSV (2 decimal places, stable column order) and JSON
(full float precision) files per report dimension."""

from __future__ import annotations

import csv
import json
from pathlib import Path

from ..labels import TECHNIQUE_ORDER, TOOL_COLUMNS
from .aggregate import CorpusReport, GroupStats

FORMATS = ("json", "csv")

_GROUP_COLUMNS = (
    ["total", "errors", "obfuscated", "obfuscated_pct"]
    + [f"{t.lower()}_pct" for t in TOOL_COLUMNS]
    + [f"{t.lower()}_pct" for t in TECHNIQUE_ORDER]
    + ["multi_technique_pct"]
)

TOPK_COLUMNS = (
    ["top_k", "total_apps", "obfuscation_pct"]
    + [f"{t.lower()}_pct" for t in TOOL_COLUMNS]
    + [f"{t.lower()}_pct" for t in TECHNIQUE_ORDER]
)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def _group_row(stats: GroupStats) -> list:
    return (
        [stats.total, stats.errors, stats.obfuscated, stats.obfuscated_pct]
        + [stats.tool_pcts.get(t, 0.0) for t in TOOL_COLUMNS]
        + [stats.technique_pcts.get(t, 0.0) for t in TECHNIQUE_ORDER]
        + [stats.multi_technique_pct]
    )


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _write_json(path: Path, doc) -> None:
    path.write_text(json.dumps(doc, indent=1) + "\n", encoding="utf-8")


def emit_report(
    report: CorpusReport, out_dir: str | Path, formats=FORMATS
) -> list[Path]:
    """Write report_by_year / report_by_genre / report_developers /
    report_topk in the requested formats; returns the written paths.

    Emission is deterministic: identical reports produce byte-identical
    files.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    unknown = set(formats) - set(FORMATS)
    if unknown:
        raise ValueError(f"unknown report formats: {sorted(unknown)}")
    written: list[Path] = []

    if "csv" in formats:
        path = out_dir / "report_by_year.csv"
        _write_csv(
            path,
            ["year"] + _GROUP_COLUMNS,
            [[year] + _group_row(stats) for year, stats in sorted(report.by_year.items())],
        )
        written.append(path)

        path = out_dir / "report_by_genre.csv"
        _write_csv(
            path,
            ["genre"] + _GROUP_COLUMNS,
            [
                [genre] + _group_row(stats)
                for genre, stats in sorted(report.by_genre.items())
            ],
        )
        written.append(path)

        path = out_dir / "report_developers.csv"
        _write_csv(
            path,
            ["developer", "apps", "analyzed", "obfuscated", "obfuscated_fraction_pct", "bucket"],
            [
                [r.developer, r.apps, r.analyzed, r.obfuscated, r.obfuscated_fraction_pct, r.bucket]
                for r in report.developers.rows
            ],
        )
        written.append(path)

        path = out_dir / "report_topk.csv"
        _write_csv(
            path,
            list(TOPK_COLUMNS),
            [
                [row.label, row.total, row.obfuscated_pct]
                + [row.tool_pcts[t] for t in TOOL_COLUMNS]
                + [row.technique_pcts[t] for t in TECHNIQUE_ORDER]
                for row in report.topk_rows
            ],
        )
        written.append(path)

    if "json" in formats:
        path = out_dir / "report_by_year.json"
        _write_json(
            path,
            {str(year): stats.to_dict() for year, stats in sorted(report.by_year.items())},
        )
        written.append(path)

        path = out_dir / "report_by_genre.json"
        _write_json(
            path,
            {genre: stats.to_dict() for genre, stats in sorted(report.by_genre.items())},
        )
        written.append(path)

        path = out_dir / "report_developers.json"
        _write_json(
            path,
            {
                "buckets": report.developers.buckets,
                "developers": [
                    {
                        "developer": r.developer,
                        "apps": r.apps,
                        "analyzed": r.analyzed,
                        "obfuscated": r.obfuscated,
                        "obfuscated_fraction_pct": r.obfuscated_fraction_pct,
                        "bucket": r.bucket,
                    }
                    for r in report.developers.rows
                ],
                "single_app": report.developers.single_app.to_dict(),
            },
        )
        written.append(path)

        path = out_dir / "report_topk.json"
        _write_json(path, [row.to_dict() for row in report.topk_rows])
        written.append(path)

    return written
