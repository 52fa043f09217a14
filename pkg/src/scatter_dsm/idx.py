"""Reader for the IDX image format (the digit-corpus interchange format)."""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

IDX_MAGIC_U8_RANK3 = 0x00000803


class IdxError(RuntimeError):
    pass


def load_idx(path: str | Path) -> np.ndarray:
    """Load a rank-3 unsigned-byte IDX file as (count, rows, cols) floats in [0, 1]."""
    raw = Path(path).read_bytes()
    if len(raw) < 16:
        raise IdxError(f"truncated IDX header: {len(raw)} bytes")
    magic, count, rows, cols = struct.unpack(">4i", raw[:16])
    if magic != IDX_MAGIC_U8_RANK3:
        raise IdxError(f"bad IDX magic {magic:#010x}, expected {IDX_MAGIC_U8_RANK3:#010x}")
    expected = 16 + count * rows * cols
    if len(raw) != expected:
        raise IdxError(f"IDX payload length mismatch at offset 16: "
                       f"expected {expected} bytes, have {len(raw)}")
    data = np.frombuffer(raw, dtype=np.uint8, offset=16)
    return data.reshape(count, rows, cols).astype(np.float64) / 255.0


def write_idx(images: np.ndarray, path: str | Path) -> None:
    """Inverse of load_idx for fixtures: floats in [0, 1] to unsigned bytes."""
    images = np.asarray(images)
    count, rows, cols = images.shape
    payload = np.clip(np.rint(images * 255.0), 0, 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(struct.pack(">4i", IDX_MAGIC_U8_RANK3, count, rows, cols))
        fh.write(payload.tobytes())
