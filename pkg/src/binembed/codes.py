"""Sign codes in {-1, +1}^m and their text/binary file formats.

Packing: bit 1 <-> +1, most significant bit first, each code padded with zero
bits to a whole number of bytes.

Binary file layout (little-endian)::

    magic   4 bytes  b"BEMB"
    m       uint32   code length
    count   uint32   number of codes
    payload count * ceil(m / 8) bytes
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

MAGIC = b"BEMB"
_HEADER = struct.Struct("<4sII")


def sign_map(v) -> np.ndarray:
    """Entrywise sign as int8, with sgn(0) = +1."""
    v = np.asarray(v, dtype=float)
    return np.where(v >= 0.0, 1, -1).astype(np.int8)


@dataclass(frozen=True)
class BitCode:
    signs: np.ndarray
    blocks: int = 1

    def __post_init__(self):
        s = np.asarray(self.signs, dtype=np.int8).ravel()
        if not np.all(np.abs(s) == 1):
            raise ValueError("bit code entries must be +1 or -1")
        if self.blocks < 1 or s.size % self.blocks:
            raise ValueError(f"length {s.size} is not divisible into {self.blocks} blocks")
        s.flags.writeable = False
        object.__setattr__(self, "signs", s)

    def __len__(self) -> int:
        return self.signs.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitCode):
            return NotImplemented
        return self.blocks == other.blocks and np.array_equal(self.signs, other.signs)

    def __hash__(self) -> int:
        return hash((self.signs.tobytes(), self.blocks))

    @property
    def packed(self) -> np.ndarray:
        return np.packbits(self.signs > 0)

    @classmethod
    def unpack(cls, packed, m: int, blocks: int = 1) -> "BitCode":
        bits = np.unpackbits(np.asarray(packed, dtype=np.uint8), count=m)
        return cls(2 * bits.astype(np.int8) - 1, blocks)

    def to_text(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.signs)

    @classmethod
    def from_text(cls, line: str, blocks: int = 1) -> "BitCode":
        line = line.strip()
        if not line or set(line) - {"+", "-"}:
            raise ValueError(f"bit code line must consist of '+'/'-': {line!r}")
        return cls(np.where(np.frombuffer(line.encode(), np.uint8) == ord("+"), 1, -1), blocks)


def write_text(path, codes) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for c in codes:
            fh.write(c.to_text() + "\n")


def read_text(path, blocks: int = 1) -> list[BitCode]:
    with open(path, encoding="ascii") as fh:
        return [BitCode.from_text(line, blocks) for line in fh if line.strip()]


def write_binary(path, codes) -> None:
    codes = list(codes)
    m = len(codes[0]) if codes else 0
    if any(len(c) != m for c in codes):
        raise ValueError("all codes in one file must share a length")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, m, len(codes)))
        for c in codes:
            fh.write(c.packed.tobytes())


def read_binary(path, blocks: int = 1) -> list[BitCode]:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < _HEADER.size:
        raise ValueError("truncated bit code file")
    magic, m, count = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    width = (m + 7) // 8
    payload = np.frombuffer(data, np.uint8, offset=_HEADER.size)
    if payload.size != width * count:
        raise ValueError(f"payload holds {payload.size} bytes, expected {width * count}")
    rows = payload.reshape(count, width) if count else payload.reshape(0, width)
    return [BitCode.unpack(r, m, blocks) for r in rows]
