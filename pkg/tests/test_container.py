import io
import zipfile

import pytest

from obfdetect.dexcore import open_container
from obfdetect.errors import CorruptEntry, NoDexEntries, NotAnArchive

from conftest import make_apk


def test_multidex_order_and_non_dex_entries_dropped(tmp_path, tiny_dex, second_dex):
    path = tmp_path / "app.apk"
    make_apk(path, [tiny_dex, second_dex], extra_entries=[("res/x.png", b"\x89PNG junk")])
    container = open_container(path)
    assert [name for name, _ in container.entries] == ["classes.dex", "classes2.dex"]
    assert container.dex_payloads == (tiny_dex, second_dex)


def test_numeric_suffix_order_beats_lexicographic(tmp_path, tiny_dex, second_dex):
    path = tmp_path / "many.apk"
    with zipfile.ZipFile(path, "w") as zf:
        zf.writestr("classes10.dex", second_dex)
        zf.writestr("classes2.dex", second_dex)
        zf.writestr("classes.dex", tiny_dex)
    names = [name for name, _ in open_container(path).entries]
    assert names == ["classes.dex", "classes2.dex", "classes10.dex"]


def test_bare_dex_accepted(tmp_path, tiny_dex):
    path = tmp_path / "classes.dex"
    path.write_bytes(tiny_dex)
    container = open_container(path)
    assert container.dex_payloads == (tiny_dex,)


def test_zip_without_dex_entries(tmp_path):
    path = tmp_path / "empty.apk"
    make_apk(path, [], extra_entries=[("assets/readme.txt", b"hi")])
    with pytest.raises(NoDexEntries):
        open_container(path)


def test_not_an_archive(tmp_path):
    path = tmp_path / "garbage.bin"
    path.write_bytes(b"\x00\x01\x02 definitely not an apk")
    with pytest.raises(NotAnArchive):
        open_container(path)


def test_corrupt_entry(tmp_path, tiny_dex):
    path = tmp_path / "corrupt.apk"
    make_apk(path, [tiny_dex])
    raw = bytearray(path.read_bytes())
    # Damage the compressed stream of the first entry (after its local header).
    header_end = raw.index(b"classes.dex") + len("classes.dex")
    for i in range(header_end + 2, header_end + 10):
        raw[i] ^= 0xFF
    path.write_bytes(bytes(raw))
    with pytest.raises((CorruptEntry, NotAnArchive)):
        open_container(path)


def test_deterministic(tmp_path, tiny_dex, second_dex):
    path = tmp_path / "app.apk"
    make_apk(path, [tiny_dex, second_dex])
    a = open_container(path)
    b = open_container(path)
    assert a == b


def test_nested_dex_paths_are_not_payloads(tmp_path, tiny_dex):
    path = tmp_path / "nested.apk"
    make_apk(path, [tiny_dex], extra_entries=[("lib/classes.dex", tiny_dex)])
    container = open_container(path)
    assert [name for name, _ in container.entries] == ["classes.dex"]
