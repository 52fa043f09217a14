"""SCAT1: the bit-exact binary container for datasets and reconstructions.

Layout (all little-endian):

    magic "SCAT" | u32 version=1 | u32 family | u32 n_samples | u32 n_inc
    | u32 n_rec | u32 n | f64 k | f64 r_meas | f64 aperture_start
    | f64 aperture_end | f64 delta_train | f64 scale_c | u32 flags
    | per-sample records | u64 FNV-1a checksum of all preceding bytes

Flags: bit0 clean fields present, bit1 noisy fields present, bit2 index
tensors present.  Each sample record is

    u64 sample_id | u64 seed | n*n f64 eps (row-major)
    | [bit0] n_inc * n_rec * 2 f64 clean us (re,im interleaved)
    | [bit1] n_inc * n_rec * 2 f64 noisy us
    | [bit2] n_inc * n * n f64 tensor

Families: 0 = circles, 1 = circles-high-contrast, 2 = digits, 3 = custom.

Train/val/test counts are not part of the binary layout; they ride in a
deterministic JSON sidecar ``<path>.json`` (samples are ordered train,
then val, then test).  A container without a sidecar reads back with all
samples counted as training data.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dsm import IndexTensor
from .experiment import ExperimentConfig
from .scenes import ContrastGrid

MAGIC = b"SCAT"
VERSION = 1

FAMILIES = ("circles", "circles-high-contrast", "digits", "custom")

FLAG_CLEAN = 1
FLAG_NOISY = 2
FLAG_TENSOR = 4

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

try:
    from numba import njit as _njit

    @_njit(cache=True)
    def _fnv1a_kernel(data, h):  # pragma: no cover - exercised via Fnv1a
        p = np.uint64(_FNV_PRIME)
        for i in range(data.size):
            h = (h ^ np.uint64(data[i])) * p
        return h

    def _fnv1a_update(h: int, chunk: bytes) -> int:
        arr = np.frombuffer(chunk, dtype=np.uint8)
        return int(_fnv1a_kernel(arr, np.uint64(h)))

except ImportError:  # pure-python fallback, same values
    def _fnv1a_update(h: int, chunk: bytes) -> int:
        for b in chunk:
            h = ((h ^ b) * _FNV_PRIME) & _MASK64
        return h


class Fnv1a:
    """Streaming 64-bit FNV-1a."""

    def __init__(self):
        self.value = _FNV_OFFSET

    def update(self, chunk: bytes) -> None:
        self.value = _fnv1a_update(self.value, chunk)


class ContainerError(RuntimeError):
    """Malformed, truncated, or corrupted container file."""


@dataclass
class DatasetSample:
    """One stored experiment: scene, measured fields, index tensor."""

    sample_id: int
    seed: int
    grid: ContrastGrid
    clean_us: np.ndarray | None = None     # (n_inc, n_rec) complex
    noisy_us: np.ndarray | None = None
    tensor: IndexTensor | None = None


@dataclass
class DatasetManifest:
    """Container-level metadata mirrored into the header and sidecar."""

    config: ExperimentConfig
    family: str = "custom"
    counts: tuple[int, int, int] = (0, 0, 0)
    delta_train: float = 0.0
    scale_c: float = 0.0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; one of {FAMILIES}")

    @property
    def n_samples(self) -> int:
        return sum(self.counts)

    def split_slices(self) -> dict[str, slice]:
        tr, va, te = self.counts
        return {"train": slice(0, tr), "val": slice(tr, tr + va),
                "test": slice(tr + va, tr + va + te)}


def _flags_for(samples: list[DatasetSample]) -> int:
    if not samples:
        return 0
    first = samples[0]
    flags = 0
    if first.clean_us is not None:
        flags |= FLAG_CLEAN
    if first.noisy_us is not None:
        flags |= FLAG_NOISY
    if first.tensor is not None:
        flags |= FLAG_TENSOR
    for s in samples:
        if ((s.clean_us is not None) != bool(flags & FLAG_CLEAN)
                or (s.noisy_us is not None) != bool(flags & FLAG_NOISY)
                or (s.tensor is not None) != bool(flags & FLAG_TENSOR)):
            raise ContainerError("samples disagree on which payload blocks are present")
    return flags


def _f64_bytes(arr: np.ndarray) -> bytes:
    return np.ascontiguousarray(arr, dtype="<f8").tobytes()


def _c128_bytes(arr: np.ndarray) -> bytes:
    return np.ascontiguousarray(arr, dtype="<c16").tobytes()


def write_container(samples: list[DatasetSample], manifest: DatasetManifest,
                    path: str | Path) -> None:
    """Write samples and manifest; read_container inverts this bit-exactly."""
    path = Path(path)
    cfg = manifest.config
    n = samples[0].grid.n if samples else 64
    flags = _flags_for(samples)
    declared = manifest.n_samples
    if declared and declared != len(samples):
        raise ContainerError(
            f"manifest counts {manifest.counts} do not cover {len(samples)} samples")

    header = MAGIC + struct.pack(
        "<6I6dI", VERSION, FAMILIES.index(manifest.family), len(samples),
        cfg.n_inc, cfg.n_rec, n, cfg.k, cfg.r_meas, cfg.aperture[0],
        cfg.aperture[1], manifest.delta_train, manifest.scale_c, flags)

    check = Fnv1a()
    with open(path, "wb") as fh:
        fh.write(header)
        check.update(header)
        for s in samples:
            blob = sample_blob(s, cfg, n, flags)
            fh.write(blob)
            check.update(blob)
        fh.write(struct.pack("<Q", check.value))

    counts = manifest.counts if declared else (len(samples), 0, 0)
    write_sidecar(path, manifest, n, counts)


def write_sidecar(path: str | Path, manifest: DatasetManifest, n: int,
                  counts: tuple[int, int, int] | None = None) -> None:
    cfg = manifest.config
    sidecar = {
        "family": manifest.family,
        "counts": list(counts if counts is not None else manifest.counts),
        "delta_train": manifest.delta_train,
        "scale_c": manifest.scale_c,
        "n_inc": cfg.n_inc,
        "n_rec": cfg.n_rec,
        "n": n,
        "k": cfg.k,
        "r_meas": cfg.r_meas,
        "aperture": list(cfg.aperture),
    }
    Path(str(path) + ".json").write_text(json.dumps(sidecar, sort_keys=True, indent=1) + "\n")


def sample_blob(s: DatasetSample, cfg: ExperimentConfig, n: int, flags: int) -> bytes:
    """Serialise one sample record exactly as write_container lays it out."""
    if s.grid.n != n:
        raise ContainerError(f"sample {s.sample_id}: grid size {s.grid.n} != {n}")
    parts = [struct.pack("<QQ", s.sample_id & _MASK64, s.seed & _MASK64),
             _f64_bytes(s.grid.eps)]
    if flags & FLAG_CLEAN:
        if s.clean_us.shape != (cfg.n_inc, cfg.n_rec):
            raise ContainerError(f"sample {s.sample_id}: clean field shape {s.clean_us.shape}")
        parts.append(_c128_bytes(s.clean_us))
    if flags & FLAG_NOISY:
        if s.noisy_us.shape != (cfg.n_inc, cfg.n_rec):
            raise ContainerError(f"sample {s.sample_id}: noisy field shape {s.noisy_us.shape}")
        parts.append(_c128_bytes(s.noisy_us))
    if flags & FLAG_TENSOR:
        if s.tensor.data.shape != (cfg.n_inc, n, n):
            raise ContainerError(f"sample {s.sample_id}: tensor shape {s.tensor.data.shape}")
        parts.append(_f64_bytes(s.tensor.data))
    return b"".join(parts)


def write_header_and_stream(path: str | Path, manifest: DatasetManifest, n: int,
                            flags: int, n_samples: int, blob_iter) -> None:
    """Streaming variant of write_container for blobs produced elsewhere."""
    cfg = manifest.config
    header = MAGIC + struct.pack(
        "<6I6dI", VERSION, FAMILIES.index(manifest.family), n_samples,
        cfg.n_inc, cfg.n_rec, n, cfg.k, cfg.r_meas, cfg.aperture[0],
        cfg.aperture[1], manifest.delta_train, manifest.scale_c, flags)
    check = Fnv1a()
    with open(path, "wb") as fh:
        fh.write(header)
        check.update(header)
        for blob in blob_iter:
            fh.write(blob)
            check.update(blob)
        fh.write(struct.pack("<Q", check.value))


def read_container(path: str | Path) -> tuple[list[DatasetSample], DatasetManifest]:
    """Parse and checksum-verify a SCAT1 file."""
    path = Path(path)
    raw = path.read_bytes()
    head_len = 4 + struct.calcsize("<6I6dI")
    if len(raw) < head_len + 8:
        raise ContainerError(f"truncated container: {len(raw)} bytes")
    if raw[:4] != MAGIC:
        raise ContainerError(f"bad magic {raw[:4]!r}")
    (version, family_id, n_samples, n_inc, n_rec, n, k, r_meas, ap0, ap1,
     delta_train, scale_c, flags) = struct.unpack("<6I6dI", raw[4:head_len])
    if version != VERSION:
        raise ContainerError(f"unsupported version {version}")
    if family_id >= len(FAMILIES):
        raise ContainerError(f"unknown family id {family_id}")

    check = Fnv1a()
    check.update(raw[:-8])
    (stored,) = struct.unpack("<Q", raw[-8:])
    if check.value != stored:
        raise ContainerError(
            f"checksum mismatch: stored {stored:#018x}, computed {check.value:#018x}")

    cfg = ExperimentConfig(k=k, n_inc=n_inc, n_rec=n_rec, r_meas=r_meas,
                           aperture=(ap0, ap1))
    sample_bytes = (16 + n * n * 8
                    + (n_inc * n_rec * 16 if flags & FLAG_CLEAN else 0)
                    + (n_inc * n_rec * 16 if flags & FLAG_NOISY else 0)
                    + (n_inc * n * n * 8 if flags & FLAG_TENSOR else 0))
    expected = head_len + n_samples * sample_bytes + 8
    if len(raw) != expected:
        raise ContainerError(f"length mismatch: expected {expected} bytes, have {len(raw)}")

    samples = []
    off = head_len
    for _ in range(n_samples):
        sample_id, seed = struct.unpack_from("<QQ", raw, off)
        off += 16
        eps = np.frombuffer(raw, dtype="<f8", count=n * n, offset=off).reshape(n, n)
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
            data = np.frombuffer(raw, dtype="<f8", count=n_inc * n * n,
                                 offset=off).reshape(n_inc, n, n).copy()
            tensor = IndexTensor(data=data, scale_c=scale_c)
            off += n_inc * n * n * 8
        samples.append(DatasetSample(sample_id=sample_id, seed=seed,
                                     grid=ContrastGrid(eps=eps.copy()),
                                     clean_us=clean, noisy_us=noisy, tensor=tensor))

    counts = (n_samples, 0, 0)
    sidecar = Path(str(path) + ".json")
    if sidecar.exists():
        meta = json.loads(sidecar.read_text())
        counts = tuple(meta.get("counts", counts))
        if sum(counts) != n_samples:
            raise ContainerError(f"sidecar counts {counts} disagree with {n_samples} samples")
    manifest = DatasetManifest(config=cfg, family=FAMILIES[family_id],
                               counts=counts, delta_train=delta_train, scale_c=scale_c)
    return samples, manifest
