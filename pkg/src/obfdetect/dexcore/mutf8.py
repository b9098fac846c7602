"""Modified UTF-8 as used by DEX string_data items.

Differences from standard UTF-8: U+0000 is encoded as the two-byte sequence
C0 80, and supplementary characters are encoded as CESU-8 surrogate pairs.
Strings are NUL-terminated in the file.
"""

from __future__ import annotations

from ..errors import TruncatedFile


def encode(text: str) -> bytes:
    out = bytearray()
    for ch in text:
        cp = ord(ch)
        if cp == 0:
            out += b"\xc0\x80"
        elif cp < 0x80:
            out.append(cp)
        elif cp < 0x800:
            out.append(0xC0 | (cp >> 6))
            out.append(0x80 | (cp & 0x3F))
        elif cp < 0x10000:
            out.append(0xE0 | (cp >> 12))
            out.append(0x80 | ((cp >> 6) & 0x3F))
            out.append(0x80 | (cp & 0x3F))
        else:
            cp -= 0x10000
            for unit in (0xD800 | (cp >> 10), 0xDC00 | (cp & 0x3FF)):
                out.append(0xE0 | (unit >> 12))
                out.append(0x80 | ((unit >> 6) & 0x3F))
                out.append(0x80 | (unit & 0x3F))
    return bytes(out)


def utf16_length(text: str) -> int:
    return sum(2 if ord(ch) >= 0x10000 else 1 for ch in text)


def decode(data: bytes, pos: int) -> tuple[str, int]:
    """Decode a NUL-terminated MUTF-8 string starting at pos.

    Returns (text, position after the terminating NUL). Surrogate pairs are
    combined into single scalar values; lone surrogates are kept as-is.
    """
    units: list[int] = []
    n = len(data)
    while True:
        if pos >= n:
            raise TruncatedFile("unterminated string data")
        b0 = data[pos]
        if b0 == 0:
            pos += 1
            break
        if b0 < 0x80:
            units.append(b0)
            pos += 1
        elif (b0 & 0xE0) == 0xC0:
            if pos + 1 >= n:
                raise TruncatedFile("truncated 2-byte sequence in string data")
            units.append(((b0 & 0x1F) << 6) | (data[pos + 1] & 0x3F))
            pos += 2
        elif (b0 & 0xF0) == 0xE0:
            if pos + 2 >= n:
                raise TruncatedFile("truncated 3-byte sequence in string data")
            units.append(
                ((b0 & 0x0F) << 12)
                | ((data[pos + 1] & 0x3F) << 6)
                | (data[pos + 2] & 0x3F)
            )
            pos += 3
        else:
            # 4-byte forms are not valid MUTF-8.
            raise TruncatedFile(f"invalid MUTF-8 lead byte {b0:#x}")

    chars: list[str] = []
    i = 0
    while i < len(units):
        u = units[i]
        if 0xD800 <= u <= 0xDBFF and i + 1 < len(units) and 0xDC00 <= units[i + 1] <= 0xDFFF:
            cp = 0x10000 + ((u - 0xD800) << 10) + (units[i + 1] - 0xDC00)
            chars.append(chr(cp))
            i += 2
        else:
            chars.append(chr(u))
            i += 1
    return "".join(chars), pos
