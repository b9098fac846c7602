"""APK container reading: pull classes*.dex payloads out of a ZIP or accept
a bare DEX file."""

from __future__ import annotations

import io
import re
import zipfile
import zlib
from dataclasses import dataclass
from pathlib import Path

from ..errors import CorruptEntry, NoDexEntries, NotAnArchive

DEX_MAGIC_PREFIX = b"dex\n"
_DEX_ENTRY_RE = re.compile(r"\Aclasses([2-9]|[1-9][0-9]+)?\.dex\Z")


@dataclass(frozen=True)
class ApkContainer:
    """DEX payloads of one APK, in classesN numeric order."""

    source: str
    entries: tuple[tuple[str, bytes], ...]

    @property
    def dex_payloads(self) -> tuple[bytes, ...]:
        return tuple(payload for _name, payload in self.entries)


def _dex_entry_order(name: str) -> int:
    m = _DEX_ENTRY_RE.match(name)
    assert m is not None
    return int(m.group(1)) if m.group(1) else 1


def open_container(path: str | Path) -> ApkContainer:
    """Open an APK (ZIP) or bare DEX file and extract its DEX payloads.

    Non-DEX archive entries are not retained. Raises NotAnArchive,
    NoDexEntries or CorruptEntry.
    """
    path = Path(path)
    data = path.read_bytes()

    if data[:4] == DEX_MAGIC_PREFIX:
        return ApkContainer(source=str(path), entries=(("classes.dex", data),))

    if not zipfile.is_zipfile(io.BytesIO(data)):
        raise NotAnArchive(f"{path}: neither a ZIP archive nor a bare DEX file")

    try:
        with zipfile.ZipFile(io.BytesIO(data)) as zf:
            names = [n for n in zf.namelist() if _DEX_ENTRY_RE.match(n)]
            if not names:
                raise NoDexEntries(f"{path}: no classes*.dex entries in archive")
            names.sort(key=_dex_entry_order)
            entries = []
            for name in names:
                try:
                    entries.append((name, zf.read(name)))
                except (zipfile.BadZipFile, zlib.error, EOFError) as exc:
                    raise CorruptEntry(f"{path}: entry {name} failed to decompress: {exc}")
    except zipfile.BadZipFile as exc:
        raise NotAnArchive(f"{path}: unreadable ZIP structure: {exc}")

    return ApkContainer(source=str(path), entries=tuple(entries))
