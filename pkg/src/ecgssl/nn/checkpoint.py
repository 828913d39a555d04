"""Weight checkpoint file.

Layout (little-endian throughout):

    magic   4 bytes  b"ECGW"
    version u16      currently 1
    count   u32      number of named entries
    entries, each:
        name_len u16, name utf-8
        ndim     u8, dims ndim * u32
        frozen   u8 (0 trainable, 1 frozen)
    weights: float32 arrays concatenated in manifest order

Weights persist in 32-bit; loading promotes back to float64 (every float32
is exactly representable, so save/load round-trips are bit-stable).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from ..errors import FormatError

__all__ = ["CheckpointEntry", "save_checkpoint", "load_checkpoint"]

_MAGIC = b"ECGW"
_VERSION = 1


@dataclass
class CheckpointEntry:
    name: str
    array: np.ndarray
    frozen: bool = False


def save_checkpoint(path, entries: list[CheckpointEntry]) -> None:
    parts = [_MAGIC, struct.pack("<HI", _VERSION, len(entries))]
    for e in entries:
        name = e.name.encode("utf-8")
        arr = np.ascontiguousarray(e.array)
        parts.append(struct.pack("<H", len(name)))
        parts.append(name)
        parts.append(struct.pack("<B", arr.ndim))
        parts.append(struct.pack(f"<{arr.ndim}I", *arr.shape))
        parts.append(struct.pack("<B", 1 if e.frozen else 0))
    for e in entries:
        parts.append(np.ascontiguousarray(e.array, dtype="<f4").tobytes())
    with open(path, "wb") as fh:
        fh.write(b"".join(parts))


def _read_exact(fh, n: int, what: str) -> bytes:
    buf = fh.read(n)
    if len(buf) != n:
        raise FormatError(f"truncated checkpoint while reading {what}")
    return buf


def load_checkpoint(path) -> list[CheckpointEntry]:
    with open(path, "rb") as fh:
        if _read_exact(fh, 4, "magic") != _MAGIC:
            raise FormatError(f"{path}: not a checkpoint file (bad magic)")
        version, count = struct.unpack("<HI", _read_exact(fh, 6, "header"))
        if version != _VERSION:
            raise FormatError(f"{path}: unsupported checkpoint version {version}")
        manifest = []
        for i in range(count):
            (name_len,) = struct.unpack("<H", _read_exact(fh, 2, "name length"))
            name = _read_exact(fh, name_len, "name").decode("utf-8")
            (ndim,) = struct.unpack("<B", _read_exact(fh, 1, "ndim"))
            dims = struct.unpack(f"<{ndim}I", _read_exact(fh, 4 * ndim, "dims"))
            (frozen,) = struct.unpack("<B", _read_exact(fh, 1, "frozen flag"))
            manifest.append((name, dims, bool(frozen)))
        entries = []
        for name, dims, frozen in manifest:
            n_values = int(np.prod(dims)) if dims else 1
            raw = _read_exact(fh, 4 * n_values, f"weights of {name}")
            arr = np.frombuffer(raw, dtype="<f4").reshape(dims).astype(np.float64)
            entries.append(CheckpointEntry(name, arr, frozen))
        if fh.read(1):
            raise FormatError(f"{path}: trailing bytes after declared weights")
    return entries
