import hashlib
import struct
import zlib
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parents[1]
DEMO = REPO / "demo"


def uleb128(n):
    out = bytearray()
    while True:
        byte = n & 0x7F
        n >>= 7
        if n:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return bytes(out)


def build_dex(strings, type_string_idx=None, version=b"035"):
    """Smallest DEX image carrying a string table and a type_ids table.

    `type_string_idx` lists string indices named by type_ids; by default every
    string that looks like a class or array descriptor becomes a type.
    """
    strings = sorted(strings)
    if type_string_idx is None:
        type_string_idx = [i for i, s in enumerate(strings)
                           if s.lstrip("[").startswith("L") and s.endswith(";")]
    n_str, n_type = len(strings), len(type_string_idx)
    string_ids_off = 0x70
    type_ids_off = string_ids_off + 4 * n_str
    data_off = type_ids_off + 4 * n_type
    blobs, offsets, cursor = [], [], data_off
    for s in strings:
        raw = s.encode("utf-8")
        blob = uleb128(len(s)) + raw + b"\x00"
        offsets.append(cursor)
        blobs.append(blob)
        cursor += len(blob)
    body = b"".join(struct.pack("<I", o) for o in offsets)
    body += b"".join(struct.pack("<I", i) for i in type_string_idx)
    body += b"".join(blobs)
    size = 0x70 + len(body)
    header = bytearray(0x70)
    header[0:8] = b"dex\n" + version + b"\x00"
    struct.pack_into("<I", header, 0x20, size)
    struct.pack_into("<I", header, 0x24, 0x70)
    struct.pack_into("<I", header, 0x28, 0x12345678)
    struct.pack_into("<II", header, 0x38, n_str, string_ids_off if n_str else 0)
    struct.pack_into("<II", header, 0x40, n_type, type_ids_off if n_type else 0)
    img = bytearray(header) + body
    img[12:32] = hashlib.sha1(bytes(img[32:])).digest()
    struct.pack_into("<I", img, 8, zlib.adler32(bytes(img[12:])) & 0xFFFFFFFF)
    return bytes(img)


@pytest.fixture
def dex_builder():
    return build_dex


@pytest.fixture(scope="session")
def demo_dir():
    return DEMO


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance: one acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
