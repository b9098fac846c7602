"""Build labeled APK corpora: DEX files wrapped in ZIPs plus a labels
manifest (ground truth) and a synthetic app-metadata manifest for the
corpus-analysis pipeline."""

from __future__ import annotations

import json
import zipfile
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..labels import TechniqueSet, ToolLabel
from .generate import generate_dex, merge_declared
from .profiles import GenerationProfile, tool_style_profile

_STYLE_TOOL = {
    "proguard-like": ToolLabel.PROGUARD.value,
    "allatori-like": ToolLabel.ALLATORI.value,
    "dasho-like": ToolLabel.DASHO.value,
    "other-like": ToolLabel.OTHER.value,
    "none": None,
}

GENRES = (
    "Action", "Adventure", "Arcade", "Board", "Business", "Card", "Casino",
    "Casual", "Education", "Finance", "Health", "Lifestyle", "Music",
    "Parenting", "Productivity", "Puzzle", "Racing", "Role Playing",
    "Simulation", "Social", "Sports", "Tools", "Travel", "Weather",
)

YEARS = (2016, 2017, 2018, 2021, 2022, 2023)


@dataclass(frozen=True)
class CorpusCell:
    """One (tool style, technique set) block of a corpus configuration."""

    name: str
    tool_style: str
    count: int
    techniques: TechniqueSet | None = None  # None = style default
    overrides: dict = field(default_factory=dict)


# Default corpus: all four tool styles plus enough single/pair technique
# cells that every one-vs-other classifier sees both classes.
DEFAULT_CELLS: tuple[CorpusCell, ...] = (
    CorpusCell("none", "none", 60),
    CorpusCell("proguard_ir", "proguard-like", 40, TechniqueSet(ir=True)),
    CorpusCell("allatori_full", "allatori-like", 25, TechniqueSet(True, True, True)),
    CorpusCell("allatori_ir_cf", "allatori-like", 10, TechniqueSet(ir=True, cf=True)),
    CorpusCell("allatori_ir_se", "allatori-like", 10, TechniqueSet(ir=True, se=True)),
    CorpusCell("dasho_full", "dasho-like", 25, TechniqueSet(True, True, True)),
    CorpusCell("dasho_ir_cf", "dasho-like", 10, TechniqueSet(ir=True, cf=True)),
    CorpusCell("dasho_ir_se", "dasho-like", 10, TechniqueSet(ir=True, se=True)),
    CorpusCell("other_full", "other-like", 20, TechniqueSet(True, True, True)),
    CorpusCell("other_ir", "other-like", 10, TechniqueSet(ir=True)),
    CorpusCell("other_cf", "other-like", 10, TechniqueSet(cf=True)),
    CorpusCell("other_se", "other-like", 10, TechniqueSet(se=True)),
    CorpusCell("other_cf_se", "other-like", 10, TechniqueSet(cf=True, se=True)),
)


@dataclass(frozen=True)
class CorpusPaths:
    root: Path
    apk_dir: Path
    labels_path: Path
    metadata_path: Path


def cells_from_config(doc: dict) -> list[CorpusCell]:
    """Parse the synth config document ({"cells": [...]})."""
    cells = []
    for entry in doc.get("cells", []):
        techniques = entry.get("techniques")
        cells.append(
            CorpusCell(
                name=str(entry["name"]),
                tool_style=str(entry["tool_style"]),
                count=int(entry["count"]),
                techniques=TechniqueSet.from_names(techniques)
                if techniques is not None
                else None,
                overrides=dict(entry.get("overrides", {})),
            )
        )
    if not cells:
        raise ValueError("synth config declares no cells")
    names = [c.name for c in cells]
    if len(set(names)) != len(names):
        raise ValueError("synth config has duplicate cell names")
    return cells


def _derived_seed(corpus_seed: int, index: int) -> int:
    return (corpus_seed * 1_000_003 + index) % (2**31)


def _cell_profile(cell: CorpusCell, seed: int) -> GenerationProfile:
    return tool_style_profile(
        cell.tool_style, techniques=cell.techniques, seed=seed, **cell.overrides
    )


def _write_apk(path: Path, payloads: list[bytes]) -> None:
    # Fixed timestamps keep corpus regeneration byte-identical.
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_DEFLATED) as zf:
        for i, payload in enumerate(payloads):
            name = "classes.dex" if i == 0 else f"classes{i + 1}.dex"
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            info.compress_type = zipfile.ZIP_DEFLATED
            zf.writestr(info, payload)


def _metadata_row(app_id: str, rng: np.random.Generator, n_devs: int) -> dict:
    if rng.random() < 0.25:
        developer = f"studio{rng.integers(0, 8):02d}"
    else:
        developer = f"dev{rng.integers(0, n_devs):04d}"
    downloads = int(10 ** rng.uniform(2, 7))
    return {
        "app_id": app_id,
        "genre": GENRES[rng.integers(0, len(GENRES))],
        "developer": developer,
        "downloads": downloads,
        "avg_rating": round(float(rng.uniform(1.0, 5.0)), 1),
        "rating_count": int(downloads * rng.uniform(0.002, 0.05)),
        "last_update_year": int(YEARS[rng.integers(0, len(YEARS))]),
    }


def build_labeled_corpus(
    cells,
    out_dir: str | Path,
    seed: int = 0,
    multidex_every: int = 5,
) -> CorpusPaths:
    """Generate the corpus under out_dir: apks/, labels.jsonl, metadata.jsonl.

    Every multidex_every-th app ships two DEX files so multidex merging gets
    exercised end to end. Deterministic for a given (cells, seed).
    """
    cells = list(cells)
    if not cells:
        raise ValueError("no corpus cells given")
    out_dir = Path(out_dir)
    apk_dir = out_dir / "apks"
    apk_dir.mkdir(parents=True, exist_ok=True)
    meta_rng = np.random.default_rng(_derived_seed(seed, 999_999))
    n_apps = sum(c.count for c in cells)
    n_devs = max(n_apps // 3, 1)

    labels_path = out_dir / "labels.jsonl"
    metadata_path = out_dir / "metadata.jsonl"
    index = 0
    with open(labels_path, "w", encoding="utf-8") as labels_fh, open(
        metadata_path, "w", encoding="utf-8"
    ) as meta_fh:
        for cell in cells:
            for i in range(cell.count):
                app_id = f"{cell.name}-{i:04d}"
                profile = _cell_profile(cell, _derived_seed(seed, index))
                if multidex_every and index % multidex_every == multidex_every - 1:
                    payloads = []
                    for part in range(2):
                        sub = replace(
                            profile,
                            n_classes=max(profile.n_classes // 2, 1),
                            n_strings=max(profile.n_strings // 2, 1),
                            seed=_derived_seed(seed, index * 2 + 7 + part),
                        )
                        payload, _declared = generate_dex(sub)
                        payloads.append(payload)
                else:
                    payload, _declared = generate_dex(profile)
                    payloads = [payload]
                _write_apk(apk_dir / f"{app_id}.apk", payloads)

                label = profile.label
                labels_fh.write(
                    json.dumps(
                        {
                            "app_id": app_id,
                            "obfuscated": label.obfuscated,
                            "tool": _STYLE_TOOL[label.tool_style],
                            "techniques": label.techniques.as_dict()
                            if label.obfuscated
                            else None,
                        }
                    )
                    + "\n"
                )
                meta_fh.write(json.dumps(_metadata_row(app_id, meta_rng, n_devs)) + "\n")
                index += 1

    return CorpusPaths(
        root=out_dir, apk_dir=apk_dir, labels_path=labels_path, metadata_path=metadata_path
    )


def declared_symbols_for_app(cell: CorpusCell, corpus_seed: int, index: int, multidex_every: int = 5):
    """Recompute the declared ground-truth table for one generated app
    (mirrors build_labeled_corpus' seeding; used by round-trip checks)."""
    profile = _cell_profile(cell, _derived_seed(corpus_seed, index))
    if multidex_every and index % multidex_every == multidex_every - 1:
        declared = []
        for part in range(2):
            sub = replace(
                profile,
                n_classes=max(profile.n_classes // 2, 1),
                n_strings=max(profile.n_strings // 2, 1),
                seed=_derived_seed(corpus_seed, index * 2 + 7 + part),
            )
            declared.append(generate_dex(sub)[1])
        return merge_declared(declared)
    return generate_dex(profile)[1]
