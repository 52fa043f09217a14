"""End-to-end dataset generation: scene -> solve -> noise -> index tensor.

Each sample is a pure function of (family, master_seed, sample_id, config),
so generation parallelises over samples without any shared state and the
worker count never changes the output.  Samples are written in id order
(train block, then val, then test); the dataset scaling constant is the
maximum index value over the training split and is recorded in the header
while the stored tensors stay raw.

Scene distributions:

* circles: 1-3 discs, centers uniform in [-0.6, 0.6]^2, radii U(0.15, 0.4),
  permittivity U(1.5, 2.0); overlaps allowed, last disc wins.
* circles-high-contrast: same geometry, permittivity U(3.5, 4.0).
* digits: one corpus image, thresholded and rotated by U(0, 2 pi), plus one
  disc with radius U(0.1, 0.3); both permittivities U(1.5, 2.5).

Measurement noise on stored records uses seeds derived from
(sample_id, delta, incidence) via ``rng.noise_seed``, never from the scene
stream, so noisy fields at any level can be regenerated from clean ones.
"""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .container import (
    FLAG_CLEAN,
    FLAG_NOISY,
    FLAG_TENSOR,
    DatasetManifest,
    DatasetSample,
    sample_blob,
    write_header_and_stream,
    write_sidecar,
)
from .dsm import IndexTensor, compute_index_tensor, index_map
from .experiment import ExperimentConfig
from .forward import (
    FieldRecord,
    add_noise,
    receiver_kernel,
    scattered_at_receivers,
    solve_forward_all,
)
from .idx import load_idx
from .rng import noise_seed, sample_seed, uniform_rng
from .scenes import CircleSpec, ContrastGrid, digit_to_grid, rasterize_circles

THREADS_ENV = "SCATTER_DSM_THREADS"

CIRCLE_CENTER_BOX = 0.6
CIRCLE_RADIUS_RANGE = (0.15, 0.4)
CIRCLE_EPS_RANGE = (1.5, 2.0)
HIGH_CONTRAST_EPS_RANGE = (3.5, 4.0)
DIGIT_EPS_RANGE = (1.5, 2.5)
DIGIT_CIRCLE_RADIUS_RANGE = (0.1, 0.3)

_idx_cache: dict[str, np.ndarray] = {}


def _corpus(path: str) -> np.ndarray:
    if path not in _idx_cache:
        _idx_cache[path] = load_idx(path)
    return _idx_cache[path]


def sample_scene(family: str, seed: int, n: int, idx_path: str | None = None) -> ContrastGrid:
    """Draw one scene for the family from its documented distributions."""
    rng = uniform_rng(seed)
    if family in ("circles", "circles-high-contrast"):
        eps_range = CIRCLE_EPS_RANGE if family == "circles" else HIGH_CONTRAST_EPS_RANGE
        count = int(rng.integers(1, 4))
        circles = [
            CircleSpec(center=(rng.uniform(-CIRCLE_CENTER_BOX, CIRCLE_CENTER_BOX),
                               rng.uniform(-CIRCLE_CENTER_BOX, CIRCLE_CENTER_BOX)),
                       radius=rng.uniform(*CIRCLE_RADIUS_RANGE),
                       permittivity=rng.uniform(*eps_range))
            for _ in range(count)
        ]
        return rasterize_circles(circles, n)
    if family == "digits":
        if idx_path is None:
            raise ValueError("digit generation needs an IDX corpus path")
        images = _corpus(idx_path)
        img = images[int(rng.integers(len(images)))]
        rot = rng.uniform(0.0, 2.0 * np.pi)
        eps_digit = rng.uniform(*DIGIT_EPS_RANGE)
        circle = CircleSpec(center=(rng.uniform(-CIRCLE_CENTER_BOX, CIRCLE_CENTER_BOX),
                                    rng.uniform(-CIRCLE_CENTER_BOX, CIRCLE_CENTER_BOX)),
                            radius=rng.uniform(*DIGIT_CIRCLE_RADIUS_RANGE),
                            permittivity=rng.uniform(*DIGIT_EPS_RANGE))
        return digit_to_grid(img, rot=rot, circle=circle, eps_digit=eps_digit, n=n)
    raise ValueError(f"cannot sample scenes for family {family!r}")


def generate_sample(family: str, sample_id: int, master_seed: int,
                    cfg: ExperimentConfig, n: int, delta: float,
                    idx_path: str | None = None) -> DatasetSample:
    """Generate one full sample: scene, clean and noisy fields, index tensor."""
    seed = sample_seed(master_seed, sample_id)
    grid = sample_scene(family, seed, n, idx_path)
    results = solve_forward_all(grid, cfg)
    kernel = (receiver_kernel(grid, results[0].support_cells, cfg)
              if len(results[0].support_cells) else None)
    clean = np.empty((cfg.n_inc, cfg.n_rec), dtype=complex)
    records = []
    for p, res in enumerate(results):
        rec = scattered_at_receivers(res, grid, cfg, kernel=kernel)
        clean[p] = rec.us
        records.append(add_noise(rec, delta, noise_seed(sample_id, delta, p)))
    noisy = np.stack([r.us for r in records])
    tensor = compute_index_tensor(records, cfg, n)
    return DatasetSample(sample_id=sample_id, seed=seed, grid=grid,
                         clean_us=clean, noisy_us=noisy, tensor=tensor)


def tensor_from_fields(us: np.ndarray, cfg: ExperimentConfig, n: int,
                       green: np.ndarray | None = None) -> IndexTensor:
    """Index tensor for stored (n_inc, n_rec) field samples."""
    records = [FieldRecord(p, us[p]) for p in range(cfg.n_inc)]
    if green is not None:
        data = np.stack([index_map(r, cfg, n, green=green) for r in records])
        return IndexTensor(data=data)
    return compute_index_tensor(records, cfg, n)


def resolve_workers(requested: int | None = None) -> int:
    if requested is not None and requested > 0:
        return requested
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return max(1, os.cpu_count() or 1)


_GEN_FLAGS = FLAG_CLEAN | FLAG_NOISY | FLAG_TENSOR


def _gen_task(args) -> tuple[int, bytes, float]:
    family, sample_id, master_seed, cfg, n, delta, idx_path = args
    s = generate_sample(family, sample_id, master_seed, cfg, n, delta, idx_path)
    return sample_id, sample_blob(s, cfg, n, _GEN_FLAGS), float(s.tensor.data.max())


def gen_dataset(family: str, counts: tuple[int, int, int], cfg: ExperimentConfig,
                master_seed: int, out_path: str | Path, n: int = 64,
                delta_train: float = 0.05, idx_path: str | None = None,
                workers: int | None = None, progress=None) -> DatasetManifest:
    """Generate and persist a dataset container; returns its manifest.

    Sample ids run 0 .. N-1 with the train/val/test blocks in order.  The
    header's scale constant is the max raw index value over the training
    block.  Deterministic in (family, counts, cfg, master_seed, n, delta).
    """
    out_path = Path(out_path)
    n_train, n_val, n_test = counts
    total = n_train + n_val + n_test
    tasks = [(family, sid, master_seed, cfg, n, delta_train, idx_path)
             for sid in range(total)]
    workers = resolve_workers(workers)

    scale_c = 0.0
    spool = tempfile.NamedTemporaryFile(dir=out_path.parent, delete=False,
                                        prefix=out_path.name + ".", suffix=".part")
    try:
        if workers > 1 and total > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = pool.map(_gen_task, tasks, chunksize=4)
                scale_c = _spool_results(spool, results, n_train, progress)
        else:
            scale_c = _spool_results(spool, map(_gen_task, tasks), n_train, progress)
        spool.close()

        manifest = DatasetManifest(config=cfg, family=family,
                                   counts=(n_train, n_val, n_test),
                                   delta_train=delta_train, scale_c=scale_c)
        write_header_and_stream(out_path, manifest, n, _GEN_FLAGS, total,
                                _read_chunks(spool.name))
        write_sidecar(out_path, manifest, n)
        return manifest
    finally:
        os.unlink(spool.name)


def _spool_results(spool, results, n_train: int, progress) -> float:
    scale_c = 0.0
    for sample_id, blob, peak in results:
        spool.write(blob)
        if sample_id < n_train:
            scale_c = max(scale_c, peak)
        if progress is not None:
            progress(sample_id)
    return scale_c


def _read_chunks(path: str, chunk: int = 1 << 23):
    with open(path, "rb") as fh:
        while True:
            data = fh.read(chunk)
            if not data:
                return
            yield data
