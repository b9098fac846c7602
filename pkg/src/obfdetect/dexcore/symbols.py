"""Symbol extraction: turn parsed DEX tables into the name multisets and
opcode histogram that feature computation runs on."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .opcodes import OPCODE_FAMILIES, OPCODE_FAMILY
from .parser import DexFile, parse_dex

# Fixed by the bytecode format, never renamed, so they carry no signal.
_CONSTRUCTOR_NAMES = frozenset({"<init>", "<clinit>"})


@dataclass(frozen=True, eq=False)
class SymbolTable:
    """Per-APK (or per-DEX, before merging) extracted symbols.

    Name fields are multisets stored as tuples; equality is multiset
    equality, so enumeration order never matters.
    """

    class_names: tuple[str, ...] = ()
    method_names: tuple[str, ...] = ()
    field_names: tuple[str, ...] = ()
    other_strings: tuple[str, ...] = ()
    opcode_counts: dict[str, int] = field(
        default_factory=lambda: {f: 0 for f in OPCODE_FAMILIES}
    )
    total_instructions: int = 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymbolTable):
            return NotImplemented
        return (
            Counter(self.class_names) == Counter(other.class_names)
            and Counter(self.method_names) == Counter(other.method_names)
            and Counter(self.field_names) == Counter(other.field_names)
            and Counter(self.other_strings) == Counter(other.other_strings)
            and self.opcode_counts == other.opcode_counts
            and self.total_instructions == other.total_instructions
        )


def simple_class_name(descriptor: str) -> str:
    """Last path segment of a type descriptor, without the L...; wrapping.

    Package prefixes are dropped because obfuscators leave them mostly
    intact and they would dilute the length statistics; `$` separators of
    inner classes stay part of the name.
    """
    name = descriptor
    if name.startswith("L") and name.endswith(";"):
        name = name[1:-1]
    return name.rsplit("/", 1)[-1]


def extract_symbols(dex: DexFile) -> SymbolTable:
    """Extract the symbol table of one DEX.

    Only classes defined in this DEX (class_defs) contribute names; methods
    and fields count when their defining class is defined here. Constructor
    names are excluded. `other_strings` is the string pool minus everything
    used as a type descriptor, method name or field name anywhere in this
    DEX's tables. Empty tables are valid.
    """
    defined = set(dex.class_defs)

    class_names = tuple(
        simple_class_name(dex.type_descriptors[idx]) for idx in dex.class_defs
    )
    method_names = tuple(
        dex.string_pool[name_idx]
        for class_idx, name_idx in dex.method_entries
        if class_idx in defined and dex.string_pool[name_idx] not in _CONSTRUCTOR_NAMES
    )
    field_names = tuple(
        dex.string_pool[name_idx]
        for class_idx, name_idx in dex.field_entries
        if class_idx in defined
    )

    used = set(dex.type_descriptors)
    used.update(dex.string_pool[name_idx] for _cls, name_idx in dex.method_entries)
    used.update(dex.string_pool[name_idx] for _cls, name_idx in dex.field_entries)
    other_strings = tuple(s for s in dex.string_pool if s not in used)

    opcode_counts = {f: 0 for f in OPCODE_FAMILIES}
    total = 0
    for _method_idx, ops in dex.code_units:
        total += len(ops)
        for op in ops:
            family = OPCODE_FAMILY[op]
            if family is not None:
                opcode_counts[family] += 1

    return SymbolTable(
        class_names=class_names,
        method_names=method_names,
        field_names=field_names,
        other_strings=other_strings,
        opcode_counts=opcode_counts,
        total_instructions=total,
    )


def merge_symbols(tables: list[SymbolTable]) -> SymbolTable:
    """Multiset-union symbol tables of a multidex APK.

    Feature percentages are computed on the merged table, i.e. per APK.
    """
    if not tables:
        raise ValueError("merge_symbols requires at least one table")
    class_names: list[str] = []
    method_names: list[str] = []
    field_names: list[str] = []
    other_strings: list[str] = []
    opcode_counts = {f: 0 for f in OPCODE_FAMILIES}
    total = 0
    for t in tables:
        class_names.extend(t.class_names)
        method_names.extend(t.method_names)
        field_names.extend(t.field_names)
        other_strings.extend(t.other_strings)
        for fam, count in t.opcode_counts.items():
            opcode_counts[fam] = opcode_counts.get(fam, 0) + count
        total += t.total_instructions
    return SymbolTable(
        class_names=tuple(class_names),
        method_names=tuple(method_names),
        field_names=tuple(field_names),
        other_strings=tuple(other_strings),
        opcode_counts=opcode_counts,
        total_instructions=total,
    )


def symbols_from_payloads(payloads) -> SymbolTable:
    """Parse and extract every DEX payload of an APK, merged into one table."""
    return merge_symbols([extract_symbols(parse_dex(p)) for p in payloads])
