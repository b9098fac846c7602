"""Aggregate per-APK records along the report dimensions: year, genre,
developer, and top-k by popularity.

Error-tagged records are excluded from every percentage denominator but
surface as a separate count, keeping obfuscated + clean + errored = total in
every group. Tool percentages are taken over obfuscated apps and sum to 100;
technique percentages overlap (an app counts toward every technique it uses)
so they do not.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from ..errors import KTooLarge
from ..labels import TECHNIQUE_ORDER, TOOL_COLUMNS
from .scan import CorpusRecord

BUCKET_ORDER = (">80%", "60-80%", "40-60%", "<40%", "none")


@dataclass
class GroupStats:
    """Counts and percentages for one year/genre/top-k group."""

    total: int = 0
    errors: int = 0
    obfuscated: int = 0
    obfuscated_pct: float = 0.0
    tool_pcts: dict[str, float] = field(default_factory=dict)
    technique_pcts: dict[str, float] = field(default_factory=dict)
    multi_technique_pct: float = 0.0

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "errors": self.errors,
            "obfuscated": self.obfuscated,
            "obfuscated_pct": self.obfuscated_pct,
            "tool_pcts": self.tool_pcts,
            "technique_pcts": self.technique_pcts,
            "multi_technique_pct": self.multi_technique_pct,
        }


def _group_stats(records: list[CorpusRecord]) -> GroupStats:
    stats = GroupStats(total=len(records))
    analyzed = [r for r in records if r.analysis.error is None]
    stats.errors = stats.total - len(analyzed)
    obfuscated = [r for r in analyzed if r.analysis.obfuscated]
    stats.obfuscated = len(obfuscated)
    if analyzed:
        stats.obfuscated_pct = len(obfuscated) / len(analyzed) * 100.0

    tool_counts = {t: 0 for t in TOOL_COLUMNS}
    technique_counts = {t: 0 for t in TECHNIQUE_ORDER}
    multi = 0
    for r in obfuscated:
        if r.analysis.tool in tool_counts:
            tool_counts[r.analysis.tool] += 1
        ts = r.analysis.techniques
        if ts is not None:
            for name in ts.names():
                technique_counts[name] += 1
            if ts.count() >= 2:
                multi += 1
    if obfuscated:
        n = len(obfuscated)
        stats.tool_pcts = {t: c / n * 100.0 for t, c in tool_counts.items()}
        stats.technique_pcts = {t: c / n * 100.0 for t, c in technique_counts.items()}
        stats.multi_technique_pct = multi / n * 100.0
    return stats


def aggregate_by_year(records: list[CorpusRecord]) -> dict[int, GroupStats]:
    """Per-year stats keyed by the manifest's last_update_year. Years with no
    apps are absent, not zero-filled."""
    groups: dict[int, list[CorpusRecord]] = defaultdict(list)
    for r in records:
        groups[r.metadata.last_update_year].append(r)
    return {year: _group_stats(groups[year]) for year in sorted(groups)}


def aggregate_by_genre(records: list[CorpusRecord]) -> dict[str, GroupStats]:
    groups: dict[str, list[CorpusRecord]] = defaultdict(list)
    for r in records:
        groups[r.metadata.genre].append(r)
    return {genre: _group_stats(groups[genre]) for genre in sorted(groups)}


@dataclass
class DeveloperRow:
    developer: str
    apps: int
    analyzed: int
    obfuscated: int
    obfuscated_fraction_pct: float
    bucket: str


@dataclass
class SingleAppSummary:
    """Developers with exactly one app: obfuscation split plus tool counts."""

    developers: int = 0
    non_obfuscated: int = 0
    obfuscated: int = 0
    tool_counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "developers": self.developers,
            "non_obfuscated": self.non_obfuscated,
            "obfuscated": self.obfuscated,
            "tool_counts": self.tool_counts,
        }


@dataclass
class DeveloperReport:
    buckets: dict[str, int]
    rows: list[DeveloperRow]
    single_app: SingleAppSummary


def _bucket_for(obfuscated: int, analyzed: int) -> str:
    if obfuscated == 0 or analyzed == 0:
        return "none"
    pct = obfuscated / analyzed * 100.0
    if pct >= 80.0:
        return ">80%"
    if pct >= 60.0:
        return "60-80%"
    if pct >= 40.0:
        return "40-60%"
    return "<40%"


def developer_buckets(records: list[CorpusRecord], top_n: int) -> DeveloperReport:
    """Bucket the top_n developers (by app count, ties broken by name) by the
    fraction of their apps that are obfuscated; also summarize single-app
    developers."""
    if top_n < 1:
        raise ValueError("top_n must be at least 1")
    by_dev: dict[str, list[CorpusRecord]] = defaultdict(list)
    for r in records:
        by_dev[r.metadata.developer].append(r)

    ranked = sorted(by_dev.items(), key=lambda item: (-len(item[1]), item[0]))
    buckets = {b: 0 for b in BUCKET_ORDER}
    rows: list[DeveloperRow] = []
    for developer, dev_records in ranked[:top_n]:
        analyzed = [r for r in dev_records if r.analysis.error is None]
        obfuscated = sum(1 for r in analyzed if r.analysis.obfuscated)
        bucket = _bucket_for(obfuscated, len(analyzed))
        buckets[bucket] += 1
        pct = obfuscated / len(analyzed) * 100.0 if analyzed else 0.0
        rows.append(
            DeveloperRow(
                developer=developer,
                apps=len(dev_records),
                analyzed=len(analyzed),
                obfuscated=obfuscated,
                obfuscated_fraction_pct=pct,
                bucket=bucket,
            )
        )

    single = SingleAppSummary(tool_counts={t: 0 for t in TOOL_COLUMNS})
    for developer, dev_records in by_dev.items():
        if len(dev_records) != 1:
            continue
        analysis = dev_records[0].analysis
        if analysis.error is not None:
            continue
        single.developers += 1
        if analysis.obfuscated:
            single.obfuscated += 1
            if analysis.tool in single.tool_counts:
                single.tool_counts[analysis.tool] += 1
        else:
            single.non_obfuscated += 1

    return DeveloperReport(buckets=buckets, rows=rows, single_app=single)


@dataclass
class TopKRow:
    label: str  # "1000" for a top-k prefix, "1000+" for the remainder row
    total: int
    obfuscated_pct: float
    tool_pcts: dict[str, float]
    technique_pcts: dict[str, float]

    def to_dict(self) -> dict:
        return {
            "top_k": self.label,
            "total": self.total,
            "obfuscated_pct": self.obfuscated_pct,
            "tool_pcts": self.tool_pcts,
            "technique_pcts": self.technique_pcts,
        }


def popularity_key(record: CorpusRecord):
    """Descending downloads, then rating, then rating count; app_id makes the
    order total."""
    m = record.metadata
    return (-m.downloads, -m.avg_rating, -m.rating_count, m.app_id)


def rank_top_k(records: list[CorpusRecord], ks: list[int]) -> list[TopKRow]:
    """Stats over top-k popularity prefixes plus a final remainder row."""
    if not ks:
        raise ValueError("ks must not be empty")
    if list(ks) != sorted(ks):
        raise ValueError("ks must be sorted ascending")
    if ks[-1] > len(records):
        raise KTooLarge(f"k={ks[-1]} exceeds corpus size {len(records)}")
    ordered = sorted(records, key=popularity_key)
    rows = []
    for k in ks:
        stats = _group_stats(ordered[:k])
        rows.append(_topk_row(str(k), stats))
    remainder = _group_stats(ordered[ks[-1]:])
    rows.append(_topk_row(f"{ks[-1]}+", remainder))
    return rows


def _topk_row(label: str, stats: GroupStats) -> TopKRow:
    tool_pcts = {t: stats.tool_pcts.get(t, 0.0) for t in TOOL_COLUMNS}
    technique_pcts = {t: stats.technique_pcts.get(t, 0.0) for t in TECHNIQUE_ORDER}
    return TopKRow(
        label=label,
        total=stats.total,
        obfuscated_pct=stats.obfuscated_pct,
        tool_pcts=tool_pcts,
        technique_pcts=technique_pcts,
    )


@dataclass
class CorpusReport:
    by_year: dict[int, GroupStats]
    by_genre: dict[str, GroupStats]
    developers: DeveloperReport
    topk_rows: list[TopKRow]


def build_report(
    records: list[CorpusRecord], ks: list[int], top_devs: int
) -> CorpusReport:
    return CorpusReport(
        by_year=aggregate_by_year(records),
        by_genre=aggregate_by_genre(records),
        developers=developer_buckets(records, top_devs),
        topk_rows=rank_top_k(records, ks),
    )
