"""DEX bytecode parser.

Decodes the header, string pool, type/method/field tables, class definitions
and per-method instruction streams of a Dalvik Executable file (versions
035-039, little-endian). Checksum and SHA-1 signature fields are read but not
verified: repackaged apps in the wild routinely carry stale digests.

Layout reference: the published Dalvik Executable format.
"""

from __future__ import annotations

import re
import struct
from dataclasses import dataclass

from ..errors import BadMagic, IndexOutOfBounds, TruncatedFile
from .opcodes import (
    FILL_ARRAY_PAYLOAD,
    OPCODE_WIDTHS,
    PACKED_SWITCH_PAYLOAD,
    SPARSE_SWITCH_PAYLOAD,
)
from . import mutf8

HEADER_SIZE = 112
ENDIAN_CONSTANT = 0x12345678
NO_INDEX = 0xFFFFFFFF

_MAGIC_RE = re.compile(rb"\Adex\n[0-9]{3}\x00")

_HEADER_STRUCT = struct.Struct("<8sI20s20I")


@dataclass(frozen=True, eq=False)
class DexFile:
    """Decoded tables of a single DEX payload."""

    magic: bytes
    string_pool: tuple[str, ...]
    type_descriptors: tuple[str, ...]
    # (class type index, name string index) per method_ids / field_ids entry.
    method_entries: tuple[tuple[int, int], ...]
    field_entries: tuple[tuple[int, int], ...]
    class_defs: tuple[int, ...]  # type index of each defined class
    # (method_ids index, decoded opcode bytes) per code item.
    code_units: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def version(self) -> str:
        return self.magic[4:7].decode("ascii")


class _Reader:
    """Bounds-checked little-endian reads over a byte payload."""

    __slots__ = ("data", "size")

    def __init__(self, data: bytes):
        self.data = data
        self.size = len(data)

    def check(self, offset: int, length: int, what: str) -> None:
        if offset < 0 or length < 0 or offset + length > self.size:
            raise TruncatedFile(
                f"{what} at offset {offset} (+{length}) exceeds payload of {self.size} bytes"
            )

    def u2(self, offset: int) -> int:
        self.check(offset, 2, "u2 read")
        return int.from_bytes(self.data[offset : offset + 2], "little")

    def u4(self, offset: int) -> int:
        self.check(offset, 4, "u4 read")
        return int.from_bytes(self.data[offset : offset + 4], "little")

    def uleb128(self, offset: int) -> tuple[int, int]:
        value = 0
        shift = 0
        pos = offset
        while True:
            if pos >= self.size:
                raise TruncatedFile("uleb128 runs past end of payload")
            byte = self.data[pos]
            pos += 1
            value |= (byte & 0x7F) << shift
            if not byte & 0x80:
                return value, pos
            shift += 7
            if shift > 35:
                raise TruncatedFile("uleb128 longer than 5 bytes")


def parse_dex(payload: bytes) -> DexFile:
    """Parse a DEX payload into its symbol-bearing tables.

    Raises BadMagic, TruncatedFile or IndexOutOfBounds; never returns a
    partially populated DexFile.
    """
    if len(payload) >= 8 and not _MAGIC_RE.match(payload):
        raise BadMagic(f"not a DEX header: {payload[:8]!r}")
    if len(payload) < HEADER_SIZE:
        raise TruncatedFile(
            f"payload of {len(payload)} bytes is shorter than the {HEADER_SIZE}-byte header"
        )

    (
        magic,
        _checksum,
        _signature,
        file_size,
        header_size,
        endian_tag,
        _link_size,
        _link_off,
        _map_off,
        string_ids_size,
        string_ids_off,
        type_ids_size,
        type_ids_off,
        proto_ids_size,
        proto_ids_off,
        field_ids_size,
        field_ids_off,
        method_ids_size,
        method_ids_off,
        class_defs_size,
        class_defs_off,
        _data_size,
        _data_off,
    ) = _HEADER_STRUCT.unpack_from(payload, 0)

    if endian_tag != ENDIAN_CONSTANT or header_size != HEADER_SIZE:
        raise BadMagic(
            f"unsupported header (endian_tag={endian_tag:#x}, header_size={header_size})"
        )
    r = _Reader(payload)
    if file_size > r.size:
        raise TruncatedFile(
            f"declared file size {file_size} exceeds payload of {r.size} bytes"
        )

    r.check(string_ids_off, 4 * string_ids_size, "string_ids table")
    string_pool: list[str] = []
    for i in range(string_ids_size):
        data_off = r.u4(string_ids_off + 4 * i)
        r.check(data_off, 1, "string_data item")
        _utf16_len, pos = r.uleb128(data_off)
        text, _end = mutf8.decode(payload, pos)
        string_pool.append(text)

    r.check(type_ids_off, 4 * type_ids_size, "type_ids table")
    type_descriptors: list[str] = []
    for i in range(type_ids_size):
        idx = r.u4(type_ids_off + 4 * i)
        if idx >= string_ids_size:
            raise IndexOutOfBounds(f"type_id {i} references string {idx}/{string_ids_size}")
        type_descriptors.append(string_pool[idx])

    r.check(proto_ids_off, 12 * proto_ids_size, "proto_ids table")

    r.check(field_ids_off, 8 * field_ids_size, "field_ids table")
    field_entries: list[tuple[int, int]] = []
    for i in range(field_ids_size):
        base = field_ids_off + 8 * i
        class_idx = r.u2(base)
        type_idx = r.u2(base + 2)
        name_idx = r.u4(base + 4)
        if class_idx >= type_ids_size or type_idx >= type_ids_size:
            raise IndexOutOfBounds(f"field_id {i} references type out of range")
        if name_idx >= string_ids_size:
            raise IndexOutOfBounds(f"field_id {i} references string {name_idx}/{string_ids_size}")
        field_entries.append((class_idx, name_idx))

    r.check(method_ids_off, 8 * method_ids_size, "method_ids table")
    method_entries: list[tuple[int, int]] = []
    for i in range(method_ids_size):
        base = method_ids_off + 8 * i
        class_idx = r.u2(base)
        proto_idx = r.u2(base + 2)
        name_idx = r.u4(base + 4)
        if class_idx >= type_ids_size:
            raise IndexOutOfBounds(f"method_id {i} references type {class_idx}/{type_ids_size}")
        if proto_idx >= proto_ids_size:
            raise IndexOutOfBounds(f"method_id {i} references proto {proto_idx}/{proto_ids_size}")
        if name_idx >= string_ids_size:
            raise IndexOutOfBounds(f"method_id {i} references string {name_idx}/{string_ids_size}")
        method_entries.append((class_idx, name_idx))

    r.check(class_defs_off, 32 * class_defs_size, "class_defs table")
    class_defs: list[int] = []
    code_units: list[tuple[int, tuple[int, ...]]] = []
    for i in range(class_defs_size):
        base = class_defs_off + 32 * i
        class_idx = r.u4(base)
        if class_idx >= type_ids_size:
            raise IndexOutOfBounds(f"class_def {i} references type {class_idx}/{type_ids_size}")
        class_defs.append(class_idx)
        class_data_off = r.u4(base + 24)
        if class_data_off:
            code_units.extend(
                _parse_class_data(r, class_data_off, method_ids_size, field_ids_size)
            )

    return DexFile(
        magic=magic,
        string_pool=tuple(string_pool),
        type_descriptors=tuple(type_descriptors),
        method_entries=tuple(method_entries),
        field_entries=tuple(field_entries),
        class_defs=tuple(class_defs),
        code_units=tuple(code_units),
    )


def _parse_class_data(
    r: _Reader, offset: int, method_ids_size: int, field_ids_size: int
) -> list[tuple[int, tuple[int, ...]]]:
    static_fields, pos = r.uleb128(offset)
    instance_fields, pos = r.uleb128(pos)
    direct_methods, pos = r.uleb128(pos)
    virtual_methods, pos = r.uleb128(pos)

    for count in (static_fields, instance_fields):
        field_idx = 0
        for _ in range(count):
            diff, pos = r.uleb128(pos)
            _flags, pos = r.uleb128(pos)
            field_idx += diff
            if field_idx >= field_ids_size:
                raise IndexOutOfBounds(
                    f"class_data field index {field_idx}/{field_ids_size}"
                )

    out: list[tuple[int, tuple[int, ...]]] = []
    for count in (direct_methods, virtual_methods):
        method_idx = 0
        for _ in range(count):
            diff, pos = r.uleb128(pos)
            _flags, pos = r.uleb128(pos)
            code_off, pos = r.uleb128(pos)
            method_idx += diff
            if method_idx >= method_ids_size:
                raise IndexOutOfBounds(
                    f"class_data method index {method_idx}/{method_ids_size}"
                )
            if code_off:
                out.append((method_idx, _parse_code_item(r, code_off)))
    return out


def _parse_code_item(r: _Reader, offset: int) -> tuple[int, ...]:
    r.check(offset, 16, "code_item header")
    insns_size = r.u4(offset + 12)  # in 16-bit units
    insns_off = offset + 16
    r.check(insns_off, 2 * insns_size, "code_item instructions")
    units = struct.unpack_from(f"<{insns_size}H", r.data, insns_off)
    return _decode_opcodes(units)


def _decode_opcodes(units: tuple[int, ...]) -> tuple[int, ...]:
    """Linearly decode an instruction stream into opcode bytes.

    Switch/array payload blocks are skipped (they are data, not
    instructions). An unknown opcode or an instruction running past the end
    of the stream aborts decoding of this code item only; instructions
    decoded up to that point are kept.
    """
    ops: list[int] = []
    n = len(units)
    i = 0
    while i < n:
        unit = units[i]
        op = unit & 0xFF
        if op == 0x00:
            ident = unit >> 8
            if ident == PACKED_SWITCH_PAYLOAD:
                if i + 2 > n:
                    break
                width = 4 + 2 * units[i + 1]
            elif ident == SPARSE_SWITCH_PAYLOAD:
                if i + 2 > n:
                    break
                width = 2 + 4 * units[i + 1]
            elif ident == FILL_ARRAY_PAYLOAD:
                if i + 4 > n:
                    break
                element_width = units[i + 1]
                count = units[i + 2] | (units[i + 3] << 16)
                width = 4 + (count * element_width + 1) // 2
            else:
                # Plain nop; format 10x ignores the high byte.
                ops.append(op)
                i += 1
                continue
            if i + width > n:
                break
            i += width
            continue
        width = OPCODE_WIDTHS[op]
        if width == 0 or i + width > n:
            break
        ops.append(op)
        i += width
    return tuple(ops)
