"""Minimal DEX file assembler.

Emits structurally valid version-035 DEX bytes from class specifications:
correct header digests, sorted string/type/field/method id tables, class_data
and code items, and a map list. Method bodies are straight-line instruction
streams built from a small token vocabulary; only the surface visible to
symbol extraction matters, not runtime semantics.
"""

from __future__ import annotations

import hashlib
import struct
import zlib
from dataclasses import dataclass, field

from . import _dexenc as enc

OBJECT_DESCRIPTOR = "Ljava/lang/Object;"
_VOID = "V"
_INT = "I"
NO_INDEX = 0xFFFFFFFF

# Instruction tokens -> (code units, tracked family or None). Operands use
# low registers and self-contained branch targets so any token sequence forms
# a decodable stream.
_TOKEN_UNITS: dict[str, tuple[tuple[int, ...], str | None]] = {
    "nop": ((0x0000,), "nop"),
    "goto": ((0x0128,), "goto"),              # goto +1
    "invoke": ((0x106E, 0x0000, 0x0000), "invoke"),  # invoke-virtual {v0}, meth@0
    "if": ((0x1032, 0x0002,), "if"),          # if-eq v0, v1, +2
    "move": ((0x1001,), "move"),              # move v0, v1
    "const": ((0x1012,), None),               # const/4 v0, #1
    "add": ((0x0090, 0x0100), None),          # add-int v0, v0, v1
    "cmp": ((0x002D, 0x0100), None),          # cmpl-float v0, v0, v1
    "return": ((0x000E,), None),              # return-void
}

INSTRUCTION_TOKENS = tuple(_TOKEN_UNITS)


def token_family(token: str) -> str | None:
    return _TOKEN_UNITS[token][1]


@dataclass(frozen=True)
class MethodSpec:
    name: str
    tokens: tuple[str, ...] = ("return",)


@dataclass(frozen=True)
class ClassSpec:
    descriptor: str  # e.g. "Lcom/app/Main;"
    methods: tuple[MethodSpec, ...] = ()
    fields: tuple[str, ...] = ()


def reserved_strings(
    classes: tuple[ClassSpec, ...] | list[ClassSpec],
    superclass: str | None = OBJECT_DESCRIPTOR,
) -> set[str]:
    """Every string the assembled file will use as a descriptor or name.

    Sampled "other" strings must avoid this set or they would be
    reclassified on extraction.
    """
    out: set[str] = set()
    for cls in classes:
        out.add(cls.descriptor)
        out.update(m.name for m in cls.methods)
        out.update(cls.fields)
        if cls.methods:
            out.add(_VOID)
        if cls.fields:
            out.add(_INT)
    if classes and superclass is not None:
        out.add(superclass)
    return out


def build_dex(
    classes: list[ClassSpec] | tuple[ClassSpec, ...],
    other_strings: tuple[str, ...] | list[str] = (),
    superclass: str | None = OBJECT_DESCRIPTOR,
) -> bytes:
    classes = tuple(classes)
    _validate(classes, other_strings)

    any_methods = any(cls.methods for cls in classes)
    any_fields = any(cls.fields for cls in classes)

    pool: set[str] = set(other_strings)
    descriptors: set[str] = {cls.descriptor for cls in classes}
    if classes and superclass is not None:
        descriptors.add(superclass)
    if any_methods:
        descriptors.add(_VOID)
    if any_fields:
        descriptors.add(_INT)
    pool |= descriptors
    for cls in classes:
        pool.update(m.name for m in cls.methods)
        pool.update(cls.fields)

    strings = sorted(pool)
    str_idx = {s: i for i, s in enumerate(strings)}
    types = sorted(descriptors, key=lambda d: str_idx[d])
    type_idx = {d: i for i, d in enumerate(types)}

    protos: list[tuple[int, int]] = []
    if any_methods:
        protos.append((str_idx[_VOID], type_idx[_VOID]))  # ()V

    field_ids: list[tuple[int, int, int]] = sorted(
        (type_idx[cls.descriptor], type_idx[_INT], str_idx[name])
        for cls in classes
        for name in cls.fields
    )
    field_index = {(c, t, n): i for i, (c, t, n) in enumerate(field_ids)}

    method_ids: list[tuple[int, int, int]] = sorted(
        (type_idx[cls.descriptor], 0, str_idx[m.name])
        for cls in classes
        for m in cls.methods
    )
    method_index = {(c, p, n): i for i, (c, p, n) in enumerate(method_ids)}

    n_str, n_type, n_proto = len(strings), len(types), len(protos)
    n_field, n_method, n_class = len(field_ids), len(method_ids), len(classes)

    string_ids_off = enc.HEADER_SIZE
    type_ids_off = string_ids_off + 4 * n_str
    proto_ids_off = type_ids_off + 4 * n_type
    field_ids_off = proto_ids_off + 12 * n_proto
    method_ids_off = field_ids_off + 8 * n_field
    class_defs_off = method_ids_off + 8 * n_method
    data_off = class_defs_off + 32 * n_class

    data = bytearray()

    def here() -> int:
        return data_off + len(data)

    def align4() -> None:
        while here() % 4:
            data.append(0)

    # Code items first (4-byte aligned), one per method.
    code_offsets: dict[tuple[int, str], int] = {}
    n_code = 0
    first_code_off = 0
    for ci, cls in enumerate(classes):
        for m in cls.methods:
            align4()
            off = here()
            if not first_code_off:
                first_code_off = off
            code_offsets[(ci, m.name)] = off
            units: list[int] = []
            for token in m.tokens:
                units.extend(_TOKEN_UNITS[token][0])
            data += struct.pack("<4HII", 4, 1, 1, 0, 0, len(units))
            data += struct.pack(f"<{len(units)}H", *units)
            n_code += 1

    # class_data items.
    class_data_offsets: dict[int, int] = {}
    n_class_data = 0
    first_class_data_off = 0
    for ci, cls in enumerate(classes):
        if not cls.methods and not cls.fields:
            continue
        off = here()
        if not first_class_data_off:
            first_class_data_off = off
        class_data_offsets[ci] = off
        n_class_data += 1

        cdesc = type_idx[cls.descriptor]
        fids = sorted(field_index[(cdesc, type_idx[_INT], str_idx[name])] for name in cls.fields)
        direct = sorted(
            (method_index[(cdesc, 0, str_idx[m.name])], m)
            for m in cls.methods
            if m.name.startswith("<")
        )
        virtual = sorted(
            (method_index[(cdesc, 0, str_idx[m.name])], m)
            for m in cls.methods
            if not m.name.startswith("<")
        )

        data += enc.uleb128(0)  # static fields
        data += enc.uleb128(len(fids))
        data += enc.uleb128(len(direct))
        data += enc.uleb128(len(virtual))
        prev = 0
        for fid in fids:
            data += enc.uleb128(fid - prev)
            data += enc.uleb128(0x0002)  # ACC_PRIVATE
            prev = fid
        for group, flags in ((direct, 0x10001), (virtual, 0x0001)):
            prev = 0
            for mid, m in group:
                data += enc.uleb128(mid - prev)
                data += enc.uleb128(flags)
                data += enc.uleb128(code_offsets[(ci, m.name)])
                prev = mid

    # string_data items, in pool order.
    string_data_offsets: list[int] = []
    first_string_data_off = 0
    for s in strings:
        off = here()
        if not first_string_data_off:
            first_string_data_off = off
        string_data_offsets.append(off)
        data += enc.uleb128(enc.utf16_length(s))
        data += enc.mutf8_encode(s)
        data.append(0)

    align4()
    map_off = here()
    map_entries: list[tuple[int, int, int]] = [(0x0000, 1, 0)]
    if n_str:
        map_entries.append((0x0001, n_str, string_ids_off))
    if n_type:
        map_entries.append((0x0002, n_type, type_ids_off))
    if n_proto:
        map_entries.append((0x0003, n_proto, proto_ids_off))
    if n_field:
        map_entries.append((0x0004, n_field, field_ids_off))
    if n_method:
        map_entries.append((0x0005, n_method, method_ids_off))
    if n_class:
        map_entries.append((0x0006, n_class, class_defs_off))
    if n_code:
        map_entries.append((0x2001, n_code, first_code_off))
    if n_class_data:
        map_entries.append((0x2000, n_class_data, first_class_data_off))
    if n_str:
        map_entries.append((0x2002, n_str, first_string_data_off))
    map_entries.append((0x1000, 1, map_off))
    data += struct.pack("<I", len(map_entries))
    for type_code, size, offset in map_entries:
        data += struct.pack("<HHII", type_code, 0, size, offset)

    file_size = data_off + len(data)

    out = bytearray(file_size)
    struct.pack_into(
        "<8sI20s20I",
        out,
        0,
        b"dex\n035\x00",
        0,  # checksum, patched below
        b"\x00" * 20,  # signature, patched below
        file_size,
        enc.HEADER_SIZE,
        enc.ENDIAN_CONSTANT,
        0,
        0,
        map_off,
        n_str,
        string_ids_off if n_str else 0,
        n_type,
        type_ids_off if n_type else 0,
        n_proto,
        proto_ids_off if n_proto else 0,
        n_field,
        field_ids_off if n_field else 0,
        n_method,
        method_ids_off if n_method else 0,
        n_class,
        class_defs_off if n_class else 0,
        len(data),
        data_off,
    )

    pos = string_ids_off
    for off in string_data_offsets:
        struct.pack_into("<I", out, pos, off)
        pos += 4
    pos = type_ids_off
    for d in types:
        struct.pack_into("<I", out, pos, str_idx[d])
        pos += 4
    pos = proto_ids_off
    for shorty, rtype in protos:
        struct.pack_into("<III", out, pos, shorty, rtype, 0)
        pos += 12
    pos = field_ids_off
    for cidx, tidx, nidx in field_ids:
        struct.pack_into("<HHI", out, pos, cidx, tidx, nidx)
        pos += 8
    pos = method_ids_off
    for cidx, pidx, nidx in method_ids:
        struct.pack_into("<HHI", out, pos, cidx, pidx, nidx)
        pos += 8
    pos = class_defs_off
    super_idx = (
        type_idx[superclass] if (classes and superclass is not None) else NO_INDEX
    )
    for ci, cls in enumerate(classes):
        struct.pack_into(
            "<8I",
            out,
            pos,
            type_idx[cls.descriptor],
            0x0001,  # ACC_PUBLIC
            super_idx,
            0,
            NO_INDEX,
            0,
            class_data_offsets.get(ci, 0),
            0,
        )
        pos += 32

    out[data_off:file_size] = data

    digest = hashlib.sha1(out[32:]).digest()
    out[12:32] = digest
    struct.pack_into("<I", out, 8, zlib.adler32(bytes(out[12:])))
    return bytes(out)


def _validate(classes: tuple[ClassSpec, ...], other_strings) -> None:
    seen_desc: set[str] = set()
    for cls in classes:
        if not (cls.descriptor.startswith("L") and cls.descriptor.endswith(";")):
            raise ValueError(f"class descriptor not in L...; form: {cls.descriptor!r}")
        if cls.descriptor in seen_desc:
            raise ValueError(f"duplicate class descriptor {cls.descriptor!r}")
        seen_desc.add(cls.descriptor)
        method_names = [m.name for m in cls.methods]
        if len(set(method_names)) != len(method_names):
            raise ValueError(f"duplicate method name in {cls.descriptor!r}")
        if len(set(cls.fields)) != len(cls.fields):
            raise ValueError(f"duplicate field name in {cls.descriptor!r}")
        for m in cls.methods:
            for token in m.tokens:
                if token not in _TOKEN_UNITS:
                    raise ValueError(f"unknown instruction token {token!r}")
    if len(set(other_strings)) != len(tuple(other_strings)):
        raise ValueError("other_strings contains duplicates")
