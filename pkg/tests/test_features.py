import numpy as np
import pytest

from obfdetect.dexcore import SymbolTable
from obfdetect.features import (
    FEATURE_NAMES,
    N_FEATURES,
    character_class_percentages,
    compute_features,
    feature_contract_hash,
    instruction_percentages,
    length_bucket_percentages,
    symbol_counts,
)

# --- independent oracle: plain count-and-divide, no shared code ---

def oracle_features(table):
    def lengths(names):
        total = len(names)
        if total == 0:
            return [0.0] * 5
        out = [0, 0, 0, 0, 0]
        for n in names:
            k = len(n)
            if k == 0:
                continue
            out[k - 1 if k <= 4 else 4] += 1
        return [c * 100.0 / total for c in out]

    def charclasses(names):
        total = len(names)
        if total == 0:
            return [0.0] * 3
        ok = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
        s = sum(1 for n in names if any(c not in ok for c in n))
        d = sum(1 for n in names if any(c in "0123456789" for c in n))
        b = sum(
            1
            for n in names
            if any(c not in ok for c in n) and any(c in "0123456789" for c in n)
        )
        return [s * 100.0 / total, d * 100.0 / total, b * 100.0 / total]

    vec = []
    for names in (table.class_names, table.method_names, table.field_names, table.other_strings):
        vec += lengths(names)
        vec += charclasses(names)
    if table.total_instructions == 0:
        vec += [0.0] * 5
    else:
        for fam in ("nop", "goto", "invoke", "if", "move"):
            vec.append(table.opcode_counts.get(fam, 0) * 100.0 / table.total_instructions)
    return np.array(vec)


def random_table(rng, allow_empty=True):
    alphabet = list("abcdefghijKLMNOP$_#!0123456789" + "αβ")

    def names(max_n):
        n = int(rng.integers(0, max_n + 1)) if allow_empty else int(rng.integers(1, max_n + 1))
        out = []
        for _ in range(n):
            length = int(rng.integers(1, 9))
            out.append("".join(rng.choice(alphabet) for _ in range(length)))
        return tuple(out)

    counts = {f: int(rng.integers(0, 30)) for f in ("nop", "goto", "invoke", "if", "move")}
    total = sum(counts.values()) + int(rng.integers(0, 60))
    return SymbolTable(
        class_names=names(25),
        method_names=names(40),
        field_names=names(30),
        other_strings=names(50),
        opcode_counts=counts,
        total_instructions=total,
    )


# --- stated operation examples ---

def test_length_buckets_one_each():
    got = length_bucket_percentages(["a", "bb", "ccc", "dddd", "eeeee"])
    assert np.allclose(got, [20, 20, 20, 20, 20])


def test_length_buckets_empty():
    assert np.array_equal(length_bucket_percentages([]), np.zeros(5))


def test_length_buckets_multiset():
    got = length_bucket_percentages(["a", "a", "xy"])
    assert np.allclose(got, [200 / 3, 100 / 3, 0, 0, 0])


def test_character_classes_overlap():
    got = character_class_percentages(["a$1", "b2", "cd", "e!"])
    assert np.allclose(got, [50, 50, 25])


def test_character_classes_empty():
    assert np.array_equal(character_class_percentages([]), np.zeros(3))


def test_non_ascii_letters_are_special():
    got = character_class_percentages(["αβ"])
    assert np.allclose(got, [100, 0, 0])


def test_instruction_percentages_uniform():
    counts = {"nop": 1, "goto": 1, "invoke": 1, "if": 1, "move": 1}
    got = instruction_percentages(counts, 6)
    assert np.allclose(got, [100 / 6] * 5)


def test_instruction_percentages_zero_total():
    assert np.array_equal(instruction_percentages({}, 0), np.zeros(5))


def test_instruction_percentages_single_family():
    got = instruction_percentages({"invoke": 10}, 10)
    assert np.allclose(got, [0, 0, 100, 0, 0])


def test_empty_table_is_all_zero():
    vec = compute_features(SymbolTable())
    assert vec.shape == (N_FEATURES,)
    assert np.array_equal(vec, np.zeros(N_FEATURES))


def test_all_length_one_class_names():
    table = SymbolTable(class_names=tuple("abcdefghij"))
    vec = compute_features(table)
    assert vec[0] == 100.0
    assert np.array_equal(vec[1:5], np.zeros(4))


# --- invariants ---

def test_oracle_equivalence_50_random_tables(rng):
    for _ in range(50):
        table = random_table(rng)
        assert np.allclose(compute_features(table), oracle_features(table), atol=1e-9)


def test_values_in_range_and_groups_normalize(rng):
    for _ in range(200):
        table = random_table(rng)
        vec = compute_features(table)
        assert (vec >= 0).all() and (vec <= 100).all()
        for start, names in (
            (0, table.class_names),
            (8, table.method_names),
            (16, table.field_names),
            (24, table.other_strings),
        ):
            group = vec[start : start + 5]
            if names:
                assert abs(group.sum() - 100.0) < 1e-6
            else:
                assert np.array_equal(group, np.zeros(5))
        assert vec[32:].sum() <= 100.0 + 1e-9


def test_permutation_invariance(rng):
    table = random_table(rng, allow_empty=False)
    shuffled = SymbolTable(
        class_names=tuple(reversed(table.class_names)),
        method_names=tuple(rng.permutation(table.method_names)),
        field_names=tuple(reversed(table.field_names)),
        other_strings=tuple(rng.permutation(table.other_strings)),
        opcode_counts=table.opcode_counts,
        total_instructions=table.total_instructions,
    )
    assert np.array_equal(compute_features(table), compute_features(shuffled))


def test_scale_invariance(rng):
    table = random_table(rng, allow_empty=False)
    doubled = SymbolTable(
        class_names=table.class_names * 2,
        method_names=table.method_names * 2,
        field_names=table.field_names * 2,
        other_strings=table.other_strings * 2,
        opcode_counts={k: 2 * v for k, v in table.opcode_counts.items()},
        total_instructions=2 * table.total_instructions,
    )
    assert np.allclose(compute_features(table), compute_features(doubled), atol=1e-9)


def test_monotone_response_to_short_class_name(rng):
    for _ in range(20):
        table = random_table(rng, allow_empty=False)
        grown = SymbolTable(
            class_names=table.class_names + ("q",),
            method_names=table.method_names,
            field_names=table.field_names,
            other_strings=table.other_strings,
            opcode_counts=table.opcode_counts,
            total_instructions=table.total_instructions,
        )
        before = compute_features(table)
        after = compute_features(grown)
        assert after[0] > before[0]
        assert (after[1:5] <= before[1:5] + 1e-12).all()


def test_feature_names_and_contract():
    assert len(FEATURE_NAMES) == 37
    assert FEATURE_NAMES[0] == "class_len1"
    assert FEATURE_NAMES[32] == "ins_nop"
    assert len(feature_contract_hash()) == 64
    assert feature_contract_hash() == feature_contract_hash()


def test_symbol_counts_denominators(tiny_dex):
    from conftest import checked_extract

    counts = symbol_counts(checked_extract(tiny_dex))
    assert counts == {
        "class_names": 1,
        "method_names": 1,
        "field_names": 1,
        "other_strings": 2,
        "total_instructions": 9,
    }
