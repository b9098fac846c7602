"""The 37-feature vector computed from a symbol table.

All features are percentages in [0, 100]. The ordering, character-class rule
and opcode grouping below are the model input contract: a trained bundle is
only valid together with an extractor using the same definitions, which is
why the contract text is hashed into every bundle.
"""

from __future__ import annotations

import hashlib
import string

import numpy as np

from .dexcore.opcodes import OPCODE_FAMILIES
from .dexcore.symbols import SymbolTable

N_FEATURES = 37

_NAME_GROUPS = ("class", "method", "field", "string")

FEATURE_NAMES: tuple[str, ...] = tuple(
    f"{group}_{suffix}"
    for group in _NAME_GROUPS
    for suffix in ("len1", "len2", "len3", "len4", "len_gt4", "special", "numeric", "both")
) + tuple(f"ins_{family}" for family in OPCODE_FAMILIES)

assert len(FEATURE_NAMES) == N_FEATURES

_ALNUM = frozenset(string.ascii_letters + string.digits)
_DIGITS = frozenset(string.digits)

FEATURE_CONTRACT = """\
obfdetect feature contract v1
37 features, all percentages in [0, 100].
Groups, in order: class names, method names, field names, other strings.
Per group: 5 length buckets (length 1, 2, 3, 4, >4 in Unicode scalar values),
then 3 character-class percentages (contains >=1 special character,
contains >=1 decimal digit 0-9, contains at least one of each; overlapping,
not exclusive). A special character is any scalar outside [A-Za-z0-9];
underscore and dollar are special. Zero denominators yield all-zero features.
Final 5 features: percentage of nop, goto, invoke, if, move instructions out
of all decoded instructions. Families: invoke = all invoke-* including
/range, polymorphic and custom variants; if = all if-* including zero-test
forms; move = all move* including move-result* and move-exception;
goto = goto, goto/16, goto/32; nop = plain nop only.
Class name = segment after the final '/' of the type descriptor with leading
'L' and trailing ';' stripped; '$' separators kept. <init>/<clinit> excluded
from method names. Only classes defined in the DEX contribute; multidex
tables are merged before computing percentages.
"""


def feature_contract_hash() -> str:
    return hashlib.sha256(FEATURE_CONTRACT.encode("utf-8")).hexdigest()


def length_bucket_percentages(names) -> np.ndarray:
    """Percentages of names with length 1, 2, 3, 4 and greater than 4.

    Length is counted in Unicode scalar values. Zero-length strings (possible
    in a DEX string pool) count toward the denominator but no bucket.
    """
    counts = np.zeros(5)
    total = 0
    for name in names:
        total += 1
        n = len(name)
        if n >= 1:
            counts[min(n, 5) - 1] += 1
    if total == 0:
        return counts
    return counts / total * 100.0


def character_class_percentages(names) -> np.ndarray:
    """Percentages of names containing special chars, digits, or both.

    Categories overlap: a name with both counts in all three.
    """
    special = numeric = both = 0
    total = 0
    for name in names:
        total += 1
        has_special = any(c not in _ALNUM for c in name)
        has_numeric = any(c in _DIGITS for c in name)
        special += has_special
        numeric += has_numeric
        both += has_special and has_numeric
    if total == 0:
        return np.zeros(3)
    return np.array([special, numeric, both]) / total * 100.0


def instruction_percentages(opcode_counts, total_instructions: int) -> np.ndarray:
    """Percentages of nop, goto, invoke, if, move out of all instructions."""
    if total_instructions == 0:
        return np.zeros(5)
    counts = np.array([opcode_counts.get(f, 0) for f in OPCODE_FAMILIES], dtype=float)
    if counts.sum() > total_instructions:
        raise ValueError("family counts exceed total instruction count")
    return counts / total_instructions * 100.0


def compute_features(symbols: SymbolTable) -> np.ndarray:
    """Assemble the full 37-feature vector (see FEATURE_CONTRACT for order)."""
    parts = []
    for names in (
        symbols.class_names,
        symbols.method_names,
        symbols.field_names,
        symbols.other_strings,
    ):
        parts.append(length_bucket_percentages(names))
        parts.append(character_class_percentages(names))
    parts.append(
        instruction_percentages(symbols.opcode_counts, symbols.total_instructions)
    )
    return np.concatenate(parts)


def symbol_counts(symbols: SymbolTable) -> dict[str, int]:
    """Feature denominators, kept alongside vectors for auditability."""
    return {
        "class_names": len(symbols.class_names),
        "method_names": len(symbols.method_names),
        "field_names": len(symbols.field_names),
        "other_strings": len(symbols.other_strings),
        "total_instructions": symbols.total_instructions,
    }
