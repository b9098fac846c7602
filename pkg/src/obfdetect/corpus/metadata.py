"""App metadata manifests (JSONL, one app per line)."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

from ..errors import ManifestParseError

_REQUIRED_FIELDS = (
    "app_id",
    "genre",
    "developer",
    "downloads",
    "avg_rating",
    "rating_count",
    "last_update_year",
)


@dataclass(frozen=True)
class AppMetadata:
    app_id: str
    genre: str
    developer: str
    downloads: int
    avg_rating: float
    rating_count: int
    last_update_year: int

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "AppMetadata":
        missing = [f for f in _REQUIRED_FIELDS if f not in d]
        if missing:
            raise ValueError(f"missing fields: {missing}")
        meta = cls(
            app_id=str(d["app_id"]),
            genre=str(d["genre"]),
            developer=str(d["developer"]),
            downloads=int(d["downloads"]),
            avg_rating=float(d["avg_rating"]),
            rating_count=int(d["rating_count"]),
            last_update_year=int(d["last_update_year"]),
        )
        if meta.downloads < 0 or meta.rating_count < 0:
            raise ValueError("downloads and rating_count must be non-negative")
        if not 0.0 <= meta.avg_rating <= 5.0:
            raise ValueError(f"avg_rating {meta.avg_rating} outside [0, 5]")
        return meta


def read_manifest(path: str | Path) -> list[AppMetadata]:
    """Parse and validate a metadata manifest; any malformed row aborts.

    Rows must be complete (no missing fields) and app_ids unique.
    """
    path = Path(path)
    rows: list[AppMetadata] = []
    seen: set[str] = set()
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ManifestParseError(f"{path}: cannot read manifest: {exc}")
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            meta = AppMetadata.from_dict(json.loads(line))
        except (json.JSONDecodeError, ValueError, TypeError) as exc:
            raise ManifestParseError(f"{path}:{lineno}: {exc}")
        if meta.app_id in seen:
            raise ManifestParseError(f"{path}:{lineno}: duplicate app_id {meta.app_id!r}")
        seen.add(meta.app_id)
        rows.append(meta)
    return rows


def write_manifest(rows, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row.to_dict()) + "\n")
