"""Three-stage per-APK decision logic.

Stage 1 decides obfuscated vs not from the MLP probability (0.5 or above
counts as obfuscated). If not obfuscated, analysis stops and the record
carries no tool/technique fields. Otherwise the tool and technique banks run
on the same feature vector: the tool is Other when all three tool
probabilities fall below 0.5, else the argmax (ties broken in the fixed
order ProGuard, Allatori, DashO); each technique flag is set only when its
probability is strictly above 0.5.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dexcore import open_container, symbols_from_payloads
from .dexcore.symbols import SymbolTable
from .errors import Error
from .features import compute_features, symbol_counts
from .labels import TECHNIQUE_ORDER, TOOL_ORDER, TechniqueSet, ToolLabel
from .models import ModelBundle, predict_proba_mlp, predict_proba_rf


@dataclass
class AnalysisRecord:
    """Per-APK verdict chain with probabilities.

    Tool and technique fields are present iff obfuscated is True (the
    early-stop contract). When extraction failed, `error` is set and
    `obfuscated` is None, meaning undetermined.
    """

    apk_id: str
    obfuscated: bool | None = None
    p_obfuscated: float | None = None
    tool: str | None = None
    tool_probs: dict[str, float] | None = None
    techniques: TechniqueSet | None = None
    technique_probs: dict[str, float] | None = None
    extraction_stats: dict[str, int] = field(default_factory=dict)
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "apk_id": self.apk_id,
            "obfuscated": self.obfuscated,
            "p_obfuscated": self.p_obfuscated,
            "tool": self.tool,
            "tool_probs": self.tool_probs,
            "techniques": self.techniques.as_dict() if self.techniques else None,
            "technique_probs": self.technique_probs,
            "extraction_stats": self.extraction_stats,
            "error": self.error,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AnalysisRecord":
        techniques = d.get("techniques")
        return cls(
            apk_id=d["apk_id"],
            obfuscated=d.get("obfuscated"),
            p_obfuscated=d.get("p_obfuscated"),
            tool=d.get("tool"),
            tool_probs=d.get("tool_probs"),
            techniques=TechniqueSet.from_dict(techniques) if techniques else None,
            technique_probs=d.get("technique_probs"),
            extraction_stats=d.get("extraction_stats") or {},
            error=d.get("error"),
        )


def detect_obfuscation(bundle: ModelBundle, fv: np.ndarray) -> tuple[bool, float]:
    """MLP verdict; probability exactly 0.5 counts as obfuscated."""
    p = float(predict_proba_mlp(bundle.obfuscation_detector, fv))
    return p >= 0.5, p


def resolve_tool(tool_probs: dict[str, float]) -> str:
    """Other when every probability is below 0.5, else the argmax tool."""
    if all(tool_probs[tool] < 0.5 for tool in TOOL_ORDER):
        return ToolLabel.OTHER.value
    best = TOOL_ORDER[0]
    for tool in TOOL_ORDER[1:]:
        if tool_probs[tool] > tool_probs[best]:
            best = tool
    return best


def resolve_techniques(technique_probs: dict[str, float]) -> TechniqueSet:
    """Flag each technique whose probability is strictly above 0.5."""
    on = {name: technique_probs[name] > 0.5 for name in TECHNIQUE_ORDER}
    return TechniqueSet(ir=on["IR"], cf=on["CF"], se=on["SE"])


def analyze(bundle: ModelBundle, symbols: SymbolTable, apk_id: str) -> AnalysisRecord:
    """Run the decision chain on an extracted symbol table.

    Features are computed once; both banks see the same vector.
    """
    fv = compute_features(symbols)
    stats = symbol_counts(symbols)
    obfuscated, p = detect_obfuscation(bundle, fv)
    record = AnalysisRecord(
        apk_id=apk_id, obfuscated=obfuscated, p_obfuscated=p, extraction_stats=stats
    )
    if not obfuscated:
        return record

    record.tool_probs = {
        tool: float(predict_proba_rf(bundle.tool_classifiers[tool], fv))
        for tool in TOOL_ORDER
    }
    record.tool = resolve_tool(record.tool_probs)
    record.technique_probs = {
        name: float(predict_proba_rf(bundle.technique_classifiers[name], fv))
        for name in TECHNIQUE_ORDER
    }
    record.techniques = resolve_techniques(record.technique_probs)
    return record


def analyze_path(
    bundle: ModelBundle, path: str | Path, apk_id: str | None = None
) -> AnalysisRecord:
    """Container-to-verdict pipeline for one file.

    Extraction failures never raise; they come back as an error-tagged
    record so corpus scans always produce one record per input.
    """
    apk_id = apk_id if apk_id is not None else Path(path).stem
    try:
        container = open_container(path)
        symbols = symbols_from_payloads(container.dex_payloads)
    except (Error, OSError) as exc:
        return AnalysisRecord(apk_id=apk_id, error=f"{type(exc).__name__}: {exc}")
    return analyze(bundle, symbols, apk_id)
