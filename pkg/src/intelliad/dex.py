"""Minimal DEX reader: header, string table and type-descriptor table.

Only what network detection needs is decoded; class data, code items and
the map list are never touched.
"""

import hashlib
import struct
import zlib
from pathlib import Path

from .errors import DexParseError

MAGIC_PREFIX = b"dex\n"
HEADER_SIZE = 0x70
ENDIAN_CONSTANT = 0x12345678

# (offset, name) of the uint32 header fields used here
_HEADER_FIELDS = {
    "checksum": 0x08,
    "file_size": 0x20,
    "header_size": 0x24,
    "endian_tag": 0x28,
    "string_ids_size": 0x38,
    "string_ids_off": 0x3C,
    "type_ids_size": 0x40,
    "type_ids_off": 0x44,
}


def _u32(data, off):
    return struct.unpack_from("<I", data, off)[0]


def read_uleb128(data, off):
    """Decode an unsigned LEB128 value; returns (value, next_offset)."""
    result = 0
    shift = 0
    for i in range(5):
        if off + i >= len(data):
            raise DexParseError("truncated uleb128")
        byte = data[off + i]
        result |= (byte & 0x7F) << shift
        if byte & 0x80 == 0:
            return result, off + i + 1
        shift += 7
    raise DexParseError("uleb128 longer than 5 bytes")


def decode_mutf8(raw):
    """Decode Modified UTF-8 (encoded NUL, CESU-style surrogate pairs)."""
    text = raw.replace(b"\xc0\x80", b"\x00").decode("utf-8", "surrogatepass")
    try:
        return text.encode("utf-16", "surrogatepass").decode("utf-16")
    except UnicodeDecodeError:
        return text


class DexFile:
    """Parsed view over the string and type tables of one DEX image."""

    def __init__(self, data, verify_checksum=True):
        self.data = bytes(data)
        self.header = self._parse_header(verify_checksum)
        self._strings = None

    @classmethod
    def from_path(cls, path, verify_checksum=True):
        return cls(Path(path).read_bytes(), verify_checksum=verify_checksum)

    def _parse_header(self, verify_checksum):
        data = self.data
        if len(data) < HEADER_SIZE:
            raise DexParseError(f"file is {len(data)} bytes, shorter than the header")
        if data[:4] != MAGIC_PREFIX or data[7] != 0:
            raise DexParseError(f"bad magic {data[:8]!r}")
        header = {name: _u32(data, off) for name, off in _HEADER_FIELDS.items()}
        header["version"] = data[4:7].decode("ascii", "replace")
        if header["endian_tag"] != ENDIAN_CONSTANT:
            raise DexParseError(f"unsupported endian tag {header['endian_tag']:#x}")
        if header["header_size"] != HEADER_SIZE:
            raise DexParseError(f"unexpected header size {header['header_size']:#x}")
        if header["file_size"] != len(data):
            raise DexParseError(
                f"header file_size {header['file_size']} != actual {len(data)}")
        if verify_checksum:
            actual = zlib.adler32(data[12:]) & 0xFFFFFFFF
            if actual != header["checksum"]:
                raise DexParseError(
                    f"checksum mismatch: header {header['checksum']:#010x}, actual {actual:#010x}")
            if hashlib.sha1(data[32:]).digest() != data[12:32]:
                raise DexParseError("SHA-1 signature mismatch")
        for table, width in (("string_ids", 4), ("type_ids", 4)):
            size, off = header[f"{table}_size"], header[f"{table}_off"]
            if size and (off < HEADER_SIZE or off + size * width > len(data)):
                raise DexParseError(f"{table} table out of bounds")
        return header

    @property
    def strings(self):
        if self._strings is None:
            self._strings = [self._read_string(i) for i in range(self.header["string_ids_size"])]
        return self._strings

    def _read_string(self, idx):
        data = self.data
        str_off = _u32(data, self.header["string_ids_off"] + 4 * idx)
        if str_off >= len(data):
            raise DexParseError(f"string {idx} offset {str_off:#x} out of bounds")
        _utf16_len, start = read_uleb128(data, str_off)
        end = data.find(b"\x00", start)
        if end < 0:
            raise DexParseError(f"string {idx} is not NUL-terminated")
        try:
            return decode_mutf8(data[start:end])
        except UnicodeDecodeError as exc:
            raise DexParseError(f"string {idx} is not valid MUTF-8: {exc}") from exc

    def type_descriptors(self):
        """Descriptors named by the type_ids table, in table order."""
        strings = self.strings
        base = self.header["type_ids_off"]
        out = []
        for i in range(self.header["type_ids_size"]):
            sidx = _u32(self.data, base + 4 * i)
            if sidx >= len(strings):
                raise DexParseError(f"type {i} references missing string {sidx}")
            out.append(strings[sidx])
        return out
