"""APK container reading, DEX parsing and symbol extraction."""

from .container import ApkContainer, open_container
from .parser import DexFile, parse_dex
from .symbols import (
    SymbolTable,
    extract_symbols,
    merge_symbols,
    simple_class_name,
    symbols_from_payloads,
)
from .opcodes import OPCODE_FAMILIES

__all__ = [
    "ApkContainer",
    "open_container",
    "DexFile",
    "parse_dex",
    "SymbolTable",
    "extract_symbols",
    "merge_symbols",
    "simple_class_name",
    "symbols_from_payloads",
    "OPCODE_FAMILIES",
]
