"""Figure rendering for corpus reports.

Writes one PNG per report dimension next to the CSV/JSON output. Uses the
Agg backend so the report path works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from ..labels import TECHNIQUE_ORDER, TOOL_COLUMNS
from .aggregate import BUCKET_ORDER, CorpusReport

_TOOL_COLORS = {
    "ProGuard": "#1f77b4",
    "Allatori": "#ff7f0e",
    "DashO": "#2ca02c",
    "Other": "#7f7f7f",
}
_TECH_COLORS = {"IR": "#d62728", "CF": "#9467bd", "SE": "#8c564b"}


def _plot_by_year(report: CorpusReport, path: Path) -> None:
    years = sorted(report.by_year)
    fig, axes = plt.subplots(3, 1, figsize=(8, 9), sharex=True)
    obf = [report.by_year[y].obfuscated_pct for y in years]
    axes[0].plot(years, obf, marker="o", color="#333333")
    axes[0].set_ylabel("obfuscated %")
    axes[0].set_ylim(0, 100)
    axes[0].set_title("Obfuscated apps by year")

    for tool in TOOL_COLUMNS:
        axes[1].plot(
            years,
            [report.by_year[y].tool_pcts.get(tool, 0.0) for y in years],
            marker="o",
            label=tool,
            color=_TOOL_COLORS[tool],
        )
    axes[1].set_ylabel("% of obfuscated apps")
    axes[1].set_title("Tool usage by year")
    axes[1].legend(fontsize=8)

    for tech in TECHNIQUE_ORDER:
        axes[2].plot(
            years,
            [report.by_year[y].technique_pcts.get(tech, 0.0) for y in years],
            marker="o",
            label=tech,
            color=_TECH_COLORS[tech],
        )
    axes[2].set_ylabel("% of obfuscated apps")
    axes[2].set_title("Technique usage by year")
    axes[2].set_xlabel("year")
    axes[2].set_xticks(years)
    axes[2].legend(fontsize=8)

    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_by_genre(report: CorpusReport, path: Path) -> None:
    genres = sorted(
        report.by_genre, key=lambda g: report.by_genre[g].obfuscated_pct, reverse=True
    )
    obf = [report.by_genre[g].obfuscated_pct for g in genres]
    multi = [report.by_genre[g].multi_technique_pct for g in genres]
    height = max(3.0, 0.3 * len(genres) + 1.5)
    fig, ax = plt.subplots(figsize=(9, height))
    pos = range(len(genres))
    ax.barh(pos, obf, color="#1f77b4", label="obfuscated %")
    ax.barh(pos, multi, height=0.4, color="#d62728", label="multi-technique % (of obfuscated)")
    ax.set_yticks(list(pos))
    ax.set_yticklabels(genres, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlim(0, 100)
    ax.set_xlabel("%")
    ax.set_title("Obfuscation by genre")
    ax.legend(fontsize=8, loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_developers(report: CorpusReport, path: Path) -> None:
    counts = [report.developers.buckets.get(b, 0) for b in BUCKET_ORDER]
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(range(len(BUCKET_ORDER)), counts, color="#2ca02c")
    ax.set_xticks(range(len(BUCKET_ORDER)))
    ax.set_xticklabels(BUCKET_ORDER)
    ax.set_xlabel("share of developer's apps obfuscated")
    ax.set_ylabel("developers")
    ax.set_title(f"Top-{sum(counts)} developers by obfuscation share")
    for i, c in enumerate(counts):
        ax.text(i, c, str(c), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _plot_topk(report: CorpusReport, path: Path) -> None:
    labels = [row.label for row in report.topk_rows]
    pos = range(len(labels))
    fig, ax = plt.subplots(figsize=(8, 4.5))
    ax.plot(pos, [r.obfuscated_pct for r in report.topk_rows], marker="o",
            color="#333333", label="obfuscated %")
    for tech in TECHNIQUE_ORDER:
        ax.plot(
            pos,
            [r.technique_pcts[tech] for r in report.topk_rows],
            marker="s",
            linestyle="--",
            label=f"{tech} % (of obfuscated)",
            color=_TECH_COLORS[tech],
        )
    ax.set_xticks(list(pos))
    ax.set_xticklabels(labels)
    ax.set_xlabel("top-k apps by popularity")
    ax.set_ylim(0, 105)
    ax.set_ylabel("%")
    ax.set_title("Obfuscation among top-ranked apps")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_figures(report: CorpusReport, out_dir: str | Path) -> list[Path]:
    """Render the four report figures; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    jobs = (
        ("report_by_year.png", _plot_by_year),
        ("report_by_genre.png", _plot_by_genre),
        ("report_developers.png", _plot_developers),
        ("report_topk.png", _plot_topk),
    )
    written = []
    for name, fn in jobs:
        path = out_dir / name
        fn(report, path)
        written.append(path)
    return written
