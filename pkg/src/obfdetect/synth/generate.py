"""Profile-driven DEX generation with declared ground truth.

generate_dex samples class/method/field names, pool strings and instruction
streams from a GenerationProfile and assembles them into a parseable DEX.
The returned symbol table is computed from what was actually embedded, so it
serves as an exact oracle for the parse-and-extract pipeline.
"""

from __future__ import annotations

import numpy as np

from ..dexcore.symbols import SymbolTable
from ..errors import ProfileInfeasible
from .profiles import GenerationProfile, LENGTH_BUCKETS, encrypted_length_range
from .writer import ClassSpec, MethodSpec, build_dex, reserved_strings, token_family

_WORDS = (
    "account action adapter android application binder bitmap broadcast buffer "
    "builder button cache callback channel client config connection content "
    "context controller counter cursor database decoder delegate device dialog "
    "document download element encoder engine event factory fetcher filter "
    "format fragment gallery handler helper history holder image index intent "
    "inventory launcher layout legacy library listener loader logger manager "
    "mapper media message metric model module monitor network notification "
    "observer option parser payload picker player plugin prefs profile provider "
    "query queue reader receiver record registry render request resolver "
    "resource response result router runtime schedule screen section service "
    "session setting socket storage stream task texture thread timer token "
    "tracker transfer uploader utility validator viewer widget worker"
).split()

_NATURAL_PACKAGES = ("com/app", "com/example", "net/core", "org/lib", "io/data")
_RENAMED_PACKAGES = ("a", "b", "a/a", "c")

_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
_SPECIALS = "$$$$_#"  # dollar-heavy: the common inner-class/obfuscator character
_DIGITS = "0123456789"
_ENCRYPTED_ALPHABET = _LETTERS + _DIGITS + "+/="

_INSTRUCTION_FAMILIES = ("nop", "goto", "invoke", "if", "move", "other")
_FILLER_TOKENS = ("const", "add", "cmp")
_JUNK_TOKENS = ("nop", "nop", "nop", "nop", "nop", "nop", "nop", "goto", "goto", "goto")


class _NameSampler:
    """Samples renamed identifiers from the profile's length and
    character-class distributions, unique within a caller-held scope."""

    def __init__(self, profile: GenerationProfile, rng: np.random.Generator):
        buckets = [b for b in LENGTH_BUCKETS if profile.name_length_distribution.get(b, 0) > 0]
        weights = np.array([profile.name_length_distribution[b] for b in buckets], dtype=float)
        self._buckets = buckets
        self._weights = weights / weights.sum()
        self._special_rate = profile.special_char_rate
        self._numeric_rate = profile.numeric_rate
        self._rng = rng

    def _sample_once(self) -> str:
        rng = self._rng
        bucket = self._buckets[rng.choice(len(self._buckets), p=self._weights)]
        length = int(rng.integers(5, 9)) if bucket == ">4" else int(bucket)
        chars = [_LETTERS[rng.integers(0, len(_LETTERS))] for _ in range(length)]
        slots = rng.permutation(length)
        want_special = rng.random() < self._special_rate
        want_numeric = rng.random() < self._numeric_rate
        if want_special:
            chars[slots[0]] = _SPECIALS[rng.integers(0, len(_SPECIALS))]
        if want_numeric:
            if length > 1:
                chars[slots[1]] = _DIGITS[rng.integers(0, len(_DIGITS))]
            elif not want_special:
                chars[slots[0]] = _DIGITS[rng.integers(0, len(_DIGITS))]
        return "".join(chars)

    def sample(self, used: set[str]) -> str:
        for _ in range(40):
            name = self._sample_once()
            if name not in used:
                used.add(name)
                return name
        # Scope exhausted the sampled space; fall back to enumeration.
        return _enumerated_name(used)


def _enumerated_name(used: set[str]) -> str:
    for length in (1, 2, 3):
        for i in range(len(_LETTERS) ** length):
            name = ""
            k = i
            for _ in range(length):
                name += _LETTERS[k % len(_LETTERS)]
                k //= len(_LETTERS)
            if name not in used:
                used.add(name)
                return name
    raise ProfileInfeasible("identifier space exhausted")


def _natural_name(rng: np.random.Generator, used: set[str], capitalize: bool) -> str:
    for attempt in range(40):
        word = _WORDS[rng.integers(0, len(_WORDS))]
        if rng.random() < 0.45 or attempt > 10:
            word += _WORDS[rng.integers(0, len(_WORDS))].capitalize()
        name = word.capitalize() if capitalize else word
        if name not in used:
            used.add(name)
            return name
    base = name
    n = 2
    while f"{base}{n}" in used:
        n += 1
    used.add(f"{base}{n}")
    return f"{base}{n}"


def _sample_string(profile: GenerationProfile, rng: np.random.Generator) -> str:
    if profile.string_profile == "encrypted-like":
        lo, hi = encrypted_length_range(profile.label.tool_style)
        length = int(rng.integers(lo, hi + 1))
        return "".join(
            _ENCRYPTED_ALPHABET[rng.integers(0, len(_ENCRYPTED_ALPHABET))]
            for _ in range(length)
        )
    kind = rng.random()
    word = _WORDS[rng.integers(0, len(_WORDS))]
    if kind < 0.5:
        text = word
    elif kind < 0.8:
        text = word + _WORDS[rng.integers(0, len(_WORDS))].capitalize()
    else:
        text = word + "." + _WORDS[rng.integers(0, len(_WORDS))]
    if rng.random() < 0.05:
        text += str(rng.integers(0, 10))
    return text


def _sample_tokens(profile: GenerationProfile, rng: np.random.Generator) -> tuple[str, ...]:
    families = [f for f in _INSTRUCTION_FAMILIES if profile.instruction_mix.get(f, 0) > 0]
    weights = np.array([profile.instruction_mix[f] for f in families], dtype=float)
    weights /= weights.sum()
    base_len = int(rng.integers(6, 28))
    tokens: list[str] = []
    for _ in range(base_len):
        family = families[rng.choice(len(families), p=weights)]
        if family == "other":
            tokens.append(_FILLER_TOKENS[rng.integers(0, len(_FILLER_TOKENS))])
        else:
            tokens.append(family)
    n_junk = int(round(profile.junk_instruction_rate * base_len))
    tokens.extend(_JUNK_TOKENS[rng.integers(0, len(_JUNK_TOKENS))] for _ in range(n_junk))
    tokens = [tokens[i] for i in rng.permutation(len(tokens))]
    tokens.append("return")
    return tuple(tokens)


def _sample_classes(profile: GenerationProfile, rng: np.random.Generator) -> list[ClassSpec]:
    renamed = profile.label.techniques.ir
    packages = _RENAMED_PACKAGES if renamed else _NATURAL_PACKAGES
    sampler = _NameSampler(profile, rng) if renamed else None

    def next_name(used: set[str], capitalize: bool) -> str:
        if sampler is not None:
            return sampler.sample(used)
        return _natural_name(rng, used, capitalize)

    classes: list[ClassSpec] = []
    used_class_names: set[str] = set()
    for _ in range(profile.n_classes):
        simple = next_name(used_class_names, True)
        package = packages[rng.integers(0, len(packages))]
        used_methods: set[str] = set()
        methods = tuple(
            MethodSpec(next_name(used_methods, False), _sample_tokens(profile, rng))
            for _ in range(profile.n_methods_per_class)
        )
        used_fields: set[str] = set()
        fields = tuple(
            next_name(used_fields, False) for _ in range(profile.n_fields_per_class)
        )
        classes.append(
            ClassSpec(descriptor=f"L{package}/{simple};", methods=methods, fields=fields)
        )
    return classes


def declared_symbols(classes: list[ClassSpec], other_strings: tuple[str, ...]) -> SymbolTable:
    """Ground-truth symbol table of an assembled DEX, from the generator's
    own knowledge of what it embedded."""
    class_names = []
    method_names = []
    field_names = []
    opcode_counts = {"nop": 0, "goto": 0, "invoke": 0, "if": 0, "move": 0}
    total = 0
    for cls in classes:
        class_names.append(cls.descriptor[1:-1].rsplit("/", 1)[-1])
        for m in cls.methods:
            if m.name not in ("<init>", "<clinit>"):
                method_names.append(m.name)
            total += len(m.tokens)
            for token in m.tokens:
                family = token_family(token)
                if family is not None:
                    opcode_counts[family] += 1
        field_names.extend(cls.fields)
    return SymbolTable(
        class_names=tuple(class_names),
        method_names=tuple(method_names),
        field_names=tuple(field_names),
        other_strings=tuple(other_strings),
        opcode_counts=opcode_counts,
        total_instructions=total,
    )


def generate_dex(profile: GenerationProfile) -> tuple[bytes, SymbolTable]:
    """Emit one DEX with the profile's statistics plus its declared symbols.

    Deterministic for a given profile (including its seed).
    """
    profile.validate()
    rng = np.random.default_rng(profile.seed)
    classes = _sample_classes(profile, rng)

    # Strings colliding with identifiers would be reclassified on extraction,
    # so they are resampled; the declared table stays exact.
    reserved = reserved_strings(classes)
    strings: list[str] = []
    seen: set[str] = set()
    attempts = 0
    while len(strings) < profile.n_strings:
        s = _sample_string(profile, rng)
        attempts += 1
        if attempts > 40 * max(profile.n_strings, 1):
            raise ProfileInfeasible("string space exhausted for this profile")
        if s in reserved or s in seen:
            continue
        seen.add(s)
        strings.append(s)

    other_strings = tuple(strings)
    payload = build_dex(classes, other_strings)
    return payload, declared_symbols(classes, other_strings)


def merge_declared(tables: list[SymbolTable]) -> SymbolTable:
    """Generator-side concatenation of declared tables for multidex apps
    (kept apart from the extraction-side merge it helps verify)."""
    counts = {"nop": 0, "goto": 0, "invoke": 0, "if": 0, "move": 0}
    for t in tables:
        for fam, c in t.opcode_counts.items():
            counts[fam] += c
    return SymbolTable(
        class_names=sum((t.class_names for t in tables), ()),
        method_names=sum((t.method_names for t in tables), ()),
        field_names=sum((t.field_names for t in tables), ()),
        other_strings=sum((t.other_strings for t in tables), ()),
        opcode_counts=counts,
        total_instructions=sum(t.total_instructions for t in tables),
    )
