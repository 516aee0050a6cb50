"""Binary model persistence primitives.

Little-endian throughout; strings are length-prefixed UTF-8; real arrays
are raw 64-bit IEEE doubles, so save/load round-trips are bit-exact. A
4-byte magic and a version byte head every file.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import CorruptFile, VersionMismatch

MAGIC = b"DLID"
FORMAT_VERSION = 1


class BinaryWriter:
    def __init__(self, fh):
        self.fh = fh

    def u8(self, value: int) -> None:
        self.fh.write(struct.pack("<B", value))

    def u32(self, value: int) -> None:
        self.fh.write(struct.pack("<I", value))

    def u64(self, value: int) -> None:
        self.fh.write(struct.pack("<Q", value))

    def i64(self, value: int) -> None:
        self.fh.write(struct.pack("<q", value))

    def f64(self, value: float) -> None:
        self.fh.write(struct.pack("<d", value))

    def text(self, value: str) -> None:
        raw = value.encode("utf-8")
        self.u32(len(raw))
        self.fh.write(raw)

    def f64_array(self, arr: np.ndarray) -> None:
        flat = np.ascontiguousarray(arr, dtype="<f8")
        self.u64(flat.size)
        self.fh.write(flat.tobytes())

    def header(self) -> None:
        self.fh.write(MAGIC)
        self.u8(FORMAT_VERSION)


class BinaryReader:
    def __init__(self, fh):
        self.fh = fh
        self.offset = 0

    def _read(self, size: int) -> bytes:
        data = self.fh.read(size)
        if len(data) != size:
            raise CorruptFile(self.offset, f"expected {size} bytes, got {len(data)}")
        self.offset += size
        return data

    def u8(self) -> int:
        return struct.unpack("<B", self._read(1))[0]

    def u32(self) -> int:
        return struct.unpack("<I", self._read(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self._read(8))[0]

    def i64(self) -> int:
        return struct.unpack("<q", self._read(8))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self._read(8))[0]

    def text(self) -> str:
        size = self.u32()
        start = self.offset
        try:
            return self._read(size).decode("utf-8")
        except UnicodeDecodeError:
            raise CorruptFile(start, "string is not valid UTF-8") from None

    def f64_array(self, shape=None) -> np.ndarray:
        size = self.u64()
        arr = np.frombuffer(self._read(size * 8), dtype="<f8").astype(np.float64)
        if shape is not None:
            expected = int(np.prod(shape))
            if expected != size:
                raise CorruptFile(self.offset, f"array size {size} != {expected}")
            arr = arr.reshape(shape)
        return arr

    def header(self) -> None:
        start = self.offset
        magic = self._read(4)
        if magic != MAGIC:
            raise CorruptFile(start, "bad magic")
        version = self.u8()
        if version != FORMAT_VERSION:
            raise VersionMismatch(version, FORMAT_VERSION)
