"""Corpus scanning, aggregation, and report emission."""

from .metadata import AppMetadata, read_manifest, write_manifest
from .scan import CorpusRecord, apk_path_for, load_record_log, read_records, scan_corpus
from .aggregate import (
    BUCKET_ORDER,
    CorpusReport,
    DeveloperReport,
    GroupStats,
    SingleAppSummary,
    TopKRow,
    aggregate_by_genre,
    aggregate_by_year,
    build_report,
    developer_buckets,
    rank_top_k,
)
from .report import emit_report
from .plots import render_figures

__all__ = [
    "AppMetadata",
    "read_manifest",
    "write_manifest",
    "CorpusRecord",
    "scan_corpus",
    "load_record_log",
    "read_records",
    "apk_path_for",
    "BUCKET_ORDER",
    "GroupStats",
    "CorpusReport",
    "DeveloperReport",
    "SingleAppSummary",
    "TopKRow",
    "aggregate_by_year",
    "aggregate_by_genre",
    "developer_buckets",
    "rank_top_k",
    "build_report",
    "emit_report",
    "render_figures",
]
