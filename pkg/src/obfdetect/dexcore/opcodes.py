"""Dalvik opcode widths and the tracked opcode families.

Width is the instruction size in 16-bit code units; 0 marks opcodes that are
unused in regular DEX files (decoding one aborts the enclosing code item).
"""

from __future__ import annotations

OPCODE_FAMILIES: tuple[str, ...] = ("nop", "goto", "invoke", "if", "move")

_WIDTH_RANGES: tuple[tuple[int, int, int], ...] = (
    # (first opcode, last opcode inclusive, width in code units)
    (0x00, 0x00, 1),  # nop
    (0x01, 0x01, 1),  # move
    (0x02, 0x02, 2),  # move/from16
    (0x03, 0x03, 3),  # move/16
    (0x04, 0x04, 1),  # move-wide
    (0x05, 0x05, 2),  # move-wide/from16
    (0x06, 0x06, 3),  # move-wide/16
    (0x07, 0x07, 1),  # move-object
    (0x08, 0x08, 2),  # move-object/from16
    (0x09, 0x09, 3),  # move-object/16
    (0x0A, 0x0D, 1),  # move-result*, move-exception
    (0x0E, 0x11, 1),  # return-void .. return-object
    (0x12, 0x12, 1),  # const/4
    (0x13, 0x13, 2),  # const/16
    (0x14, 0x14, 3),  # const
    (0x15, 0x16, 2),  # const/high16, const-wide/16
    (0x17, 0x17, 3),  # const-wide/32
    (0x18, 0x18, 5),  # const-wide
    (0x19, 0x1A, 2),  # const-wide/high16, const-string
    (0x1B, 0x1B, 3),  # const-string/jumbo
    (0x1C, 0x1C, 2),  # const-class
    (0x1D, 0x1E, 1),  # monitor-enter/exit
    (0x1F, 0x1F, 2),  # check-cast
    (0x20, 0x20, 2),  # instance-of
    (0x21, 0x21, 1),  # array-length
    (0x22, 0x23, 2),  # new-instance, new-array
    (0x24, 0x25, 3),  # filled-new-array(/range)
    (0x26, 0x26, 3),  # fill-array-data
    (0x27, 0x27, 1),  # throw
    (0x28, 0x28, 1),  # goto
    (0x29, 0x29, 2),  # goto/16
    (0x2A, 0x2A, 3),  # goto/32
    (0x2B, 0x2C, 3),  # packed-switch, sparse-switch
    (0x2D, 0x31, 2),  # cmp*
    (0x32, 0x37, 2),  # if-eq .. if-le
    (0x38, 0x3D, 2),  # if-eqz .. if-lez
    (0x3E, 0x43, 0),  # unused
    (0x44, 0x51, 2),  # aget*/aput*
    (0x52, 0x5F, 2),  # iget*/iput*
    (0x60, 0x6D, 2),  # sget*/sput*
    (0x6E, 0x72, 3),  # invoke-virtual .. invoke-interface
    (0x73, 0x73, 0),  # unused
    (0x74, 0x78, 3),  # invoke-*/range
    (0x79, 0x7A, 0),  # unused
    (0x7B, 0x8F, 1),  # unary ops
    (0x90, 0xAF, 2),  # binary ops
    (0xB0, 0xCF, 1),  # binary ops /2addr
    (0xD0, 0xD7, 2),  # binop/lit16
    (0xD8, 0xE2, 2),  # binop/lit8
    (0xE3, 0xF9, 0),  # unused
    (0xFA, 0xFB, 4),  # invoke-polymorphic(/range)
    (0xFC, 0xFC, 3),  # invoke-custom
    (0xFD, 0xFD, 3),  # invoke-custom/range
    (0xFE, 0xFF, 2),  # const-method-handle, const-method-type
)


def _build_width_table() -> tuple[int, ...]:
    table = [0] * 256
    for lo, hi, width in _WIDTH_RANGES:
        for op in range(lo, hi + 1):
            table[op] = width
    return tuple(table)


OPCODE_WIDTHS: tuple[int, ...] = _build_width_table()

_FAMILY_OPCODES: dict[str, frozenset[int]] = {
    "nop": frozenset({0x00}),
    "goto": frozenset({0x28, 0x29, 0x2A}),
    "invoke": frozenset(
        set(range(0x6E, 0x73)) | set(range(0x74, 0x79)) | set(range(0xFA, 0xFE))
    ),
    "if": frozenset(range(0x32, 0x3E)),
    "move": frozenset(range(0x01, 0x0E)),
}


def _build_family_table() -> tuple[str | None, ...]:
    table: list[str | None] = [None] * 256
    for family, ops in _FAMILY_OPCODES.items():
        for op in ops:
            table[op] = family
    return tuple(table)


# Maps opcode byte -> family name, or None for untracked opcodes.
OPCODE_FAMILY: tuple[str | None, ...] = _build_family_table()

# Payload pseudo-instructions share opcode 0x00 with nop; the high byte of the
# first code unit identifies them.
PACKED_SWITCH_PAYLOAD = 0x01
SPARSE_SWITCH_PAYLOAD = 0x02
FILL_ARRAY_PAYLOAD = 0x03
