"""Zero-dependency PGM (P5) export for grids, index maps, reconstructions.

Value mapping: v -> round(255 * (v - vmin) / (vmax - vmin)), clipped to
[0, 255]; vmin/vmax default to the array extremes (a constant array maps
to 0).  Array axis 0 is x and axis 1 is y increasing upward, so image row
r shows y index n-1-r: the picture is oriented with +y up and +x right.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np


def write_pgm(arr: np.ndarray, path: str | Path,
              vmin: float | None = None, vmax: float | None = None) -> None:
    arr = np.asarray(arr, float)
    if arr.ndim != 2:
        raise ValueError(f"PGM export needs a 2D array, got shape {arr.shape}")
    lo = float(arr.min()) if vmin is None else float(vmin)
    hi = float(arr.max()) if vmax is None else float(vmax)
    if hi > lo:
        scaled = np.clip(np.rint(255.0 * (arr - lo) / (hi - lo)), 0, 255)
    else:
        scaled = np.zeros_like(arr)
    # rows top-to-bottom = y decreasing; columns = x
    img = scaled.astype(np.uint8).T[::-1]
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode())
        fh.write(img.tobytes())


def read_pgm(path: str | Path) -> np.ndarray:
    """Inverse reader (mainly for tests): returns the raw byte image."""
    raw = Path(path).read_bytes()
    parts = raw.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValueError("not a binary PGM file")
    w, h = map(int, parts[1].split())
    if parts[2] != b"255":
        raise ValueError("unsupported maxval")
    img = np.frombuffer(parts[3][: w * h], dtype=np.uint8).reshape(h, w)
    return img
