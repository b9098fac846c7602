import struct

import pytest

from obfdetect.dexcore import parse_dex
from obfdetect.errors import BadMagic, IndexOutOfBounds, TruncatedFile
from obfdetect.synth import ClassSpec, MethodSpec, build_dex


def test_exact_string_pool():
    dex = build_dex([ClassSpec("Lpkg/C;")], other_strings=("a", "foo"), superclass=None)
    parsed = parse_dex(dex)
    assert sorted(parsed.string_pool) == ["Lpkg/C;", "a", "foo"]
    assert len(parsed.string_pool) == 3


def test_zip_payload_is_bad_magic():
    with pytest.raises(BadMagic):
        parse_dex(b"PK\x03\x04" + b"\x00" * 200)


def test_short_payload_truncated():
    with pytest.raises(TruncatedFile):
        parse_dex(b"dex\n035\x00" + b"\x00" * 40)


def test_tiny_payload_truncated():
    with pytest.raises(TruncatedFile):
        parse_dex(b"dex\n")


def test_string_table_past_eof(tiny_dex):
    raw = bytearray(tiny_dex)
    # string_ids_off lives at header offset 60
    struct.pack_into("<I", raw, 60, len(raw))
    with pytest.raises(TruncatedFile):
        parse_dex(bytes(raw))


def test_declared_file_size_beyond_payload(tiny_dex):
    raw = bytearray(tiny_dex)
    struct.pack_into("<I", raw, 32, len(raw) + 4)
    with pytest.raises(TruncatedFile):
        parse_dex(bytes(raw))


def test_any_truncation_fails(tiny_dex):
    for cut in (8, 50, 111, 112, len(tiny_dex) // 2, len(tiny_dex) - 1):
        with pytest.raises((TruncatedFile, BadMagic, IndexOutOfBounds)):
            parse_dex(tiny_dex[:cut])


def test_type_id_out_of_bounds(tiny_dex):
    raw = bytearray(tiny_dex)
    type_ids_off = struct.unpack_from("<I", raw, 68)[0]
    struct.pack_into("<I", raw, type_ids_off, 0xFFFF)
    with pytest.raises(IndexOutOfBounds):
        parse_dex(bytes(raw))


def test_method_name_index_out_of_bounds(tiny_dex):
    raw = bytearray(tiny_dex)
    method_ids_off = struct.unpack_from("<I", raw, 92)[0]
    struct.pack_into("<I", raw, method_ids_off + 4, 0x00FFFFFF)
    with pytest.raises(IndexOutOfBounds):
        parse_dex(bytes(raw))


def test_versions_035_through_039_accepted(tiny_dex):
    for version in (b"035", b"037", b"038", b"039"):
        raw = bytearray(tiny_dex)
        raw[4:7] = version
        parsed = parse_dex(bytes(raw))
        assert parsed.version == version.decode()


def test_checksum_not_verified(tiny_dex):
    raw = bytearray(tiny_dex)
    struct.pack_into("<I", raw, 8, 0xDEADBEEF)  # stale digests are common
    parse_dex(bytes(raw))


def test_unknown_opcode_aborts_only_that_code_item():
    dex = build_dex(
        [
            ClassSpec(
                "La/A;",
                methods=(
                    MethodSpec("bad", ("nop", "nop", "return")),
                    MethodSpec("good", ("move", "return")),
                ),
            )
        ]
    )
    raw = bytearray(dex)
    # Overwrite the first method's second instruction with an unused opcode.
    marker = struct.pack("<4H", 0x0000, 0x0000, 0x000E, 0x0000)[:6]  # nop nop return
    pos = raw.find(marker)
    assert pos != -1
    struct.pack_into("<H", raw, pos + 2, 0x003E)  # unused opcode 0x3e
    parsed = parse_dex(bytes(raw))
    decoded = {idx: ops for idx, ops in parsed.code_units}
    by_len = sorted(len(ops) for ops in decoded.values())
    # aborted item keeps its first nop; the other method is untouched
    assert by_len == [1, 2]


def test_parse_is_deterministic(tiny_dex):
    assert parse_dex(tiny_dex) is not None
    a = parse_dex(tiny_dex)
    b = parse_dex(tiny_dex)
    assert a.string_pool == b.string_pool
    assert a.code_units == b.code_units


def test_switch_payload_skipped_not_counted():
    dex = build_dex([ClassSpec("La/A;", methods=(MethodSpec("m", ("nop", "return")),))])
    raw = bytearray(dex)
    # Replace [nop, return-void] with [packed-switch-payload size=0, ...]:
    # ident 0x0100, size 0x0000 -> occupies 4 units; craft a stream of
    # payload followed by nothing decodable.
    marker = struct.pack("<2H", 0x0000, 0x000E)
    pos = raw.find(marker)
    assert pos != -1
    # insns_size for this method is 2 units; payload header alone claims 4,
    # so decoding aborts the item and counts zero instructions.
    struct.pack_into("<2H", raw, pos, 0x0100, 0x0000)
    parsed = parse_dex(bytes(raw))
    ops = [ops for _idx, ops in parsed.code_units]
    assert ops == [()]
