"""Synthetic DEX/APK corpus generation with declared ground truth."""

from .profiles import (
    GenerationProfile,
    ProfileLabel,
    TOOL_STYLES,
    apply_technique_profile,
    tool_style_profile,
)
from .writer import ClassSpec, MethodSpec, build_dex, INSTRUCTION_TOKENS
from .generate import declared_symbols, generate_dex, merge_declared
from .builder import (
    CorpusCell,
    CorpusPaths,
    DEFAULT_CELLS,
    build_labeled_corpus,
    cells_from_config,
    declared_symbols_for_app,
)

__all__ = [
    "GenerationProfile",
    "ProfileLabel",
    "TOOL_STYLES",
    "apply_technique_profile",
    "tool_style_profile",
    "ClassSpec",
    "MethodSpec",
    "build_dex",
    "INSTRUCTION_TOKENS",
    "generate_dex",
    "declared_symbols",
    "merge_declared",
    "CorpusCell",
    "CorpusPaths",
    "DEFAULT_CELLS",
    "build_labeled_corpus",
    "cells_from_config",
    "declared_symbols_for_app",
]
