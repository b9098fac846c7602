"""Corpus scanning: analyze every APK named in a manifest, with a resumable
append-only record log.

Each completed analysis is appended to the log as one JSONL line keyed by
app_id; rerunning a scan skips app_ids already present, so an interrupted
run picks up where it left off and converges to the same record set as an
uninterrupted one.
"""

from __future__ import annotations

import json
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from ..detector import AnalysisRecord, analyze_path
from ..models import ModelBundle
from .metadata import AppMetadata, read_manifest


@dataclass
class CorpusRecord:
    metadata: AppMetadata
    analysis: AnalysisRecord

    def to_dict(self) -> dict:
        return {"metadata": self.metadata.to_dict(), "analysis": self.analysis.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusRecord":
        return cls(
            metadata=AppMetadata.from_dict(d["metadata"]),
            analysis=AnalysisRecord.from_dict(d["analysis"]),
        )


def load_record_log(path: str | Path) -> dict[str, CorpusRecord]:
    """Read a record log, tolerating a torn final line (killed mid-write).

    Returns records keyed by app_id; a torn or malformed line is treated as
    not yet processed.
    """
    path = Path(path)
    records: dict[str, CorpusRecord] = {}
    if not path.exists():
        return records
    for line in path.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        try:
            record = CorpusRecord.from_dict(json.loads(line))
        except (json.JSONDecodeError, KeyError, ValueError, TypeError):
            continue
        records[record.metadata.app_id] = record
    return records


def read_records(path: str | Path) -> list[CorpusRecord]:
    """Record-log reader for reporting; same tolerance as load_record_log."""
    return list(load_record_log(path).values())


def apk_path_for(apk_dir: str | Path, app_id: str) -> Path:
    return Path(apk_dir) / f"{app_id}.apk"


def scan_corpus(
    apk_dir: str | Path,
    manifest: str | Path | list[AppMetadata],
    bundle: ModelBundle,
    log_path: str | Path,
    workers: int = 1,
    progress=None,
) -> list[CorpusRecord]:
    """Produce one CorpusRecord per manifest row.

    Missing or unreadable APKs yield error-tagged records, never aborts. A
    malformed manifest aborts before any scanning (ManifestParseError).
    Results are returned in manifest order regardless of worker scheduling.
    """
    rows = manifest if isinstance(manifest, list) else read_manifest(manifest)
    log_path = Path(log_path)
    log_path.parent.mkdir(parents=True, exist_ok=True)
    done = load_record_log(log_path)
    todo = [meta for meta in rows if meta.app_id not in done]

    # A previous run killed mid-write can leave a torn last line; make sure
    # new records start on a fresh line.
    if log_path.exists() and log_path.stat().st_size > 0:
        with open(log_path, "rb+") as fh:
            fh.seek(-1, 2)
            if fh.read(1) != b"\n":
                fh.write(b"\n")

    write_lock = threading.Lock()

    def process(meta: AppMetadata) -> CorpusRecord:
        record = CorpusRecord(
            metadata=meta,
            analysis=analyze_path(bundle, apk_path_for(apk_dir, meta.app_id), meta.app_id),
        )
        line = json.dumps(record.to_dict())
        with write_lock, open(log_path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
        if progress is not None:
            progress(record)
        return record

    if workers <= 1:
        new_records = [process(meta) for meta in todo]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            new_records = list(pool.map(process, todo))

    by_id = {r.metadata.app_id: r for r in new_records}
    by_id.update({k: v for k, v in done.items()})
    return [by_id[meta.app_id] for meta in rows if meta.app_id in by_id]
