from collections import Counter

import pytest

from obfdetect.dexcore import (
    SymbolTable,
    extract_symbols,
    merge_symbols,
    parse_dex,
    simple_class_name,
)
from obfdetect.synth import ClassSpec, MethodSpec, build_dex


def test_constructors_excluded(tiny_dex):
    table = extract_symbols(parse_dex(tiny_dex))
    assert table.class_names == ("B",)
    assert table.method_names == ("run",)
    assert table.field_names == ("x",)


def test_simple_class_name_rules():
    assert simple_class_name("Lcom/example/Foo;") == "Foo"
    assert simple_class_name("La/B$1;") == "B$1"  # inner-class separator kept
    assert simple_class_name("LTop;") == "Top"


def test_empty_dex_gives_empty_tables():
    table = extract_symbols(parse_dex(build_dex([])))
    assert table.class_names == ()
    assert table.method_names == ()
    assert table.field_names == ()
    assert table.other_strings == ()
    assert table.total_instructions == 0


def test_opcode_family_counts(tiny_dex):
    # run() carries nop, goto, invoke, if, move, add; <init> carries const.
    # Both end with return: 9 instructions total.
    table = extract_symbols(parse_dex(tiny_dex))
    assert table.opcode_counts == {"nop": 1, "goto": 1, "invoke": 1, "if": 1, "move": 1}
    assert table.total_instructions == 9


def test_family_counts_bounded_by_total(tiny_dex):
    table = extract_symbols(parse_dex(tiny_dex))
    assert sum(table.opcode_counts.values()) <= table.total_instructions


def test_other_strings_exclude_identifier_text():
    dex = build_dex(
        [ClassSpec("La/A;", methods=(MethodSpec("run", ("return",)),), fields=("x",))],
        other_strings=("keep",),
    )
    table = extract_symbols(parse_dex(dex))
    # descriptors, method and field names never show up as other strings
    assert table.other_strings == ("keep",)


def test_merge_identity(tiny_dex):
    table = extract_symbols(parse_dex(tiny_dex))
    assert merge_symbols([table]) == table


def test_merge_is_multiset_union():
    a = SymbolTable(class_names=("a",))
    b = SymbolTable(class_names=("a", "bb"))
    merged = merge_symbols([a, b])
    assert Counter(merged.class_names) == Counter({"a": 2, "bb": 1})


def test_merge_sums_instruction_counts():
    a = SymbolTable(opcode_counts={"nop": 1, "goto": 0, "invoke": 2, "if": 0, "move": 0}, total_instructions=10)
    b = SymbolTable(opcode_counts={"nop": 0, "goto": 3, "invoke": 0, "if": 0, "move": 1}, total_instructions=15)
    merged = merge_symbols([a, b])
    assert merged.total_instructions == 25
    assert merged.opcode_counts["nop"] == 1
    assert merged.opcode_counts["goto"] == 3


def test_merge_empty_list_rejected():
    with pytest.raises(ValueError):
        merge_symbols([])


def test_symbol_table_equality_is_order_free():
    a = SymbolTable(class_names=("x", "y"))
    b = SymbolTable(class_names=("y", "x"))
    assert a == b
    assert a != SymbolTable(class_names=("x", "x"))
