"""Reader/writer for the SCAT1 container format (the core toolkit's wire format).

This is a standalone implementation against the published layout:

    magic "SCAT" | u32 version=1 | u32 family | u32 n_samples | u32 n_inc
    | u32 n_rec | u32 n | f64 k | f64 r_meas | f64 aperture_start
    | f64 aperture_end | f64 delta_train | f64 scale_c | u32 flags
    | samples | u64 FNV-1a of all preceding bytes

    sample: u64 sample_id | u64 seed | n*n f64 eps
            | [flag 1] n_inc*n_rec c128 clean us
            | [flag 2] n_inc*n_rec c128 noisy us
            | [flag 4] n_inc*n*n f64 tensor

Train/val/test counts live in the ``<path>.json`` sidecar.  All values are
little-endian; complex numbers are (re, im) float64 pairs.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"SCAT"
VERSION = 1
FAMILIES = ("circles", "circles-high-contrast", "digits", "custom")

FLAG_CLEAN = 1
FLAG_NOISY = 2
FLAG_TENSOR = 4

_HEADER_FMT = "<6I6dI"
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

try:
    from numba import njit as _njit

    @_njit(cache=True)
    def _fnv_kernel(data, h):  # pragma: no cover
        p = np.uint64(_FNV_PRIME)
        for i in range(data.size):
            h = (h ^ np.uint64(data[i])) * p
        return h

    def _fnv1a(chunk: bytes, h: int = _FNV_OFFSET) -> int:
        return int(_fnv_kernel(np.frombuffer(chunk, dtype=np.uint8), np.uint64(h)))

except ImportError:
    def _fnv1a(chunk: bytes, h: int = _FNV_OFFSET) -> int:
        for b in chunk:
            h = ((h ^ b) * _FNV_PRIME) & _MASK64
        return h


class ScatError(RuntimeError):
    pass


@dataclass
class Header:
    family: str
    n_samples: int
    n_inc: int
    n_rec: int
    n: int
    k: float
    r_meas: float
    aperture: tuple[float, float]
    delta_train: float
    scale_c: float
    flags: int
    counts: tuple[int, int, int] = (0, 0, 0)


@dataclass
class Sample:
    sample_id: int
    seed: int
    eps: np.ndarray
    clean_us: np.ndarray | None = None
    noisy_us: np.ndarray | None = None
    tensor: np.ndarray | None = None


def read_scat(path: str | Path) -> tuple[Header, list[Sample]]:
    path = Path(path)
    raw = path.read_bytes()
    head_len = 4 + struct.calcsize(_HEADER_FMT)
    if len(raw) < head_len + 8 or raw[:4] != MAGIC:
        raise ScatError(f"not a SCAT1 container: {path}")
    (version, family_id, n_samples, n_inc, n_rec, n, k, r_meas, ap0, ap1,
     delta_train, scale_c, flags) = struct.unpack(_HEADER_FMT, raw[4:head_len])
    if version != VERSION:
        raise ScatError(f"unsupported container version {version}")
    (stored,) = struct.unpack("<Q", raw[-8:])
    if _fnv1a(raw[:-8]) != stored:
        raise ScatError(f"checksum mismatch in {path}")

    counts = (n_samples, 0, 0)
    sidecar = Path(str(path) + ".json")
    if sidecar.exists():
        counts = tuple(json.loads(sidecar.read_text()).get("counts", counts))
    header = Header(FAMILIES[family_id], n_samples, n_inc, n_rec, n, k, r_meas,
                    (ap0, ap1), delta_train, scale_c, flags, counts)

    samples = []
    off = head_len
    for _ in range(n_samples):
        sid, seed = struct.unpack_from("<QQ", raw, off)
        off += 16
        eps = np.frombuffer(raw, dtype="<f8", count=n * n, offset=off).reshape(n, n).copy()
        off += n * n * 8
        clean = noisy = tensor = None
        if flags & FLAG_CLEAN:
            clean = np.frombuffer(raw, dtype="<c16", count=n_inc * n_rec,
                                  offset=off).reshape(n_inc, n_rec).copy()
            off += n_inc * n_rec * 16
        if flags & FLAG_NOISY:
            noisy = np.frombuffer(raw, dtype="<c16", count=n_inc * n_rec,
                                  offset=off).reshape(n_inc, n_rec).copy()
            off += n_inc * n_rec * 16
        if flags & FLAG_TENSOR:
            tensor = np.frombuffer(raw, dtype="<f8", count=n_inc * n * n,
                                   offset=off).reshape(n_inc, n, n).copy()
            off += n_inc * n * n * 8
        samples.append(Sample(sid, seed, eps, clean, noisy, tensor))
    if off + 8 != len(raw):
        raise ScatError(f"container length mismatch in {path}")
    return header, samples


def write_recon_scat(path: str | Path, header: Header,
                     recons: list[tuple[int, int, np.ndarray, np.ndarray]]) -> None:
    """Write reconstructions: tensor slot (one channel) holds predicted eps.

    ``recons`` entries are (sample_id, seed, true_eps, predicted_eps); the
    grid slot keeps the ground truth for side-by-side export.
    """
    path = Path(path)
    n = header.n
    blob = MAGIC + struct.pack(
        _HEADER_FMT, VERSION, FAMILIES.index("custom"), len(recons), 1,
        header.n_rec, n, header.k, header.r_meas, header.aperture[0],
        header.aperture[1], header.delta_train, header.scale_c, FLAG_TENSOR)
    parts = [blob]
    for sid, seed, true_eps, pred in recons:
        parts.append(struct.pack("<QQ", sid & _MASK64, seed & _MASK64))
        parts.append(np.ascontiguousarray(true_eps, dtype="<f8").tobytes())
        parts.append(np.ascontiguousarray(pred[None, :, :], dtype="<f8").tobytes())
    body = b"".join(parts)
    with open(path, "wb") as fh:
        fh.write(body)
        fh.write(struct.pack("<Q", _fnv1a(body)))
    sidecar = {
        "family": "custom",
        "counts": [len(recons), 0, 0],
        "delta_train": header.delta_train,
        "scale_c": header.scale_c,
        "n_inc": 1,
        "n_rec": header.n_rec,
        "n": n,
        "k": header.k,
        "r_meas": header.r_meas,
        "aperture": list(header.aperture),
    }
    Path(str(path) + ".json").write_text(json.dumps(sidecar, sort_keys=True, indent=1) + "\n")


def split_ids(header: Header) -> dict[str, range]:
    tr, va, te = header.counts
    return {"train": range(0, tr), "val": range(tr, tr + va),
            "test": range(tr + va, tr + va + te)}
