"""Command-line surface: gen / dsm / eval / augment / export.

Every command is deterministic given its flags; worker counts (--threads
or the SCATTER_DSM_THREADS variable) never change any output byte.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .augment import augment_pair_mirror, augment_pair_rotation
from .container import (
    ContainerError,
    DatasetManifest,
    DatasetSample,
    read_container,
    write_container,
)
from .dataset import gen_dataset, tensor_from_fields
from .dsm import receiver_green_matrix
from .experiment import HALF_APERTURE, ExperimentConfig
from .forward import FieldRecord, add_noise
from .images import write_pgm
from .metrics import DEFAULT_DYNAMIC_RANGE, relative_l2, report_line, ssim
from .rng import noise_seed


def _config_from(args) -> ExperimentConfig:
    base = {}
    if getattr(args, "config", None):
        base = json.loads(Path(args.config).read_text())
        if "aperture" in base:
            base["aperture"] = tuple(base["aperture"])
    if getattr(args, "ni", None) is not None:
        base["n_inc"] = args.ni
    if getattr(args, "nr", None) is not None:
        base["n_rec"] = args.nr
    if getattr(args, "k", None) is not None:
        base["k"] = args.k
    if getattr(args, "radius", None) is not None:
        base["r_meas"] = args.radius
    if getattr(args, "half_aperture", False):
        base["aperture"] = HALF_APERTURE
    return ExperimentConfig(**base)


def _cmd_gen(args) -> int:
    cfg = _config_from(args)
    counts = (args.n_train, args.n_val, args.n_test)
    manifest = gen_dataset(args.family, counts, cfg, args.seed, args.out,
                           n=args.n, delta_train=args.delta, idx_path=args.idx,
                           workers=args.threads)
    print(f"wrote {manifest.n_samples} samples to {args.out} "
          f"(scale_c={manifest.scale_c:.6g})")
    return 0


def _cmd_dsm(args) -> int:
    samples, manifest = read_container(getattr(args, "in"))
    cfg = manifest.config
    n = samples[0].grid.n if samples else 64
    green = receiver_green_matrix(cfg, n)
    out_samples = []
    for s in samples:
        if args.delta is not None:
            if s.clean_us is None:
                raise ContainerError("container has no clean fields to re-noise")
            noisy = np.stack([
                add_noise(FieldRecord(p, s.clean_us[p]), args.delta,
                          noise_seed(s.sample_id, args.delta, p)).us
                for p in range(cfg.n_inc)])
        else:
            noisy = s.noisy_us if s.noisy_us is not None else s.clean_us
            if noisy is None:
                raise ContainerError("container holds no field data")
        tensor = tensor_from_fields(noisy, cfg, n, green=green)
        out_samples.append(DatasetSample(sample_id=s.sample_id, seed=s.seed,
                                         grid=s.grid, clean_us=s.clean_us,
                                         noisy_us=noisy, tensor=tensor))
    delta = args.delta if args.delta is not None else manifest.delta_train
    out_manifest = DatasetManifest(config=cfg, family=manifest.family,
                                   counts=manifest.counts, delta_train=delta,
                                   scale_c=manifest.scale_c)
    write_container(out_samples, out_manifest, args.out)
    print(f"wrote {len(out_samples)} tensored samples to {args.out}")
    return 0


def _cmd_eval(args) -> int:
    recon_samples, _ = read_container(args.recon)
    truth_samples, truth_manifest = read_container(args.truth)
    truth_by_id = {s.sample_id: s for s in truth_samples}
    lines = []
    rels, ssims = [], []
    for s in recon_samples:
        if s.tensor is None:
            raise ContainerError(f"reconstruction {s.sample_id} has no prediction block")
        if s.tensor.data.shape[0] != 1:
            raise ContainerError("reconstruction containers carry one channel per sample")
        truth = truth_by_id.get(s.sample_id)
        if truth is None:
            raise ContainerError(f"sample {s.sample_id} missing from the truth container")
        pred = s.tensor.data[0]
        rel = relative_l2(pred, truth.grid.eps)
        sim = ssim(pred, truth.grid.eps, dynamic_range=args.dynamic_range)
        rels.append(rel)
        ssims.append(sim)
        lines.append(report_line(s.sample_id, args.delta,
                                 truth_manifest.config.n_inc, rel, sim,
                                 args.dynamic_range))
    Path(args.report).write_text("\n".join(lines) + ("\n" if lines else ""))
    if rels:
        print(f"evaluated {len(rels)} samples: mean rel_l2 {np.mean(rels):.4f}, "
              f"mean ssim {np.mean(ssims):.4f}")
    return 0


def _cmd_augment(args) -> int:
    samples, manifest = read_container(getattr(args, "in"))
    cfg = manifest.config
    j = args.j if args.j is not None else cfg.n_inc // 2
    out_samples = []
    for s in samples:
        if s.tensor is None:
            raise ContainerError("augmentation needs stored index tensors")
        if cfg.n_inc == 1:
            grid, tensor = augment_pair_mirror(s.grid, s.tensor)
        else:
            grid, tensor = augment_pair_rotation(s.grid, s.tensor, j)
        out_samples.append(DatasetSample(sample_id=s.sample_id, seed=s.seed,
                                         grid=grid, tensor=tensor))
    write_container(out_samples, manifest, args.out)
    kind = "mirror" if cfg.n_inc == 1 else f"rotation j={args.j}"
    print(f"wrote {len(out_samples)} {kind}-augmented samples to {args.out}")
    return 0


def _cmd_export(args) -> int:
    samples, manifest = read_container(getattr(args, "in"))
    by_id = {s.sample_id: s for s in samples}
    if args.sample not in by_id:
        raise ContainerError(f"sample {args.sample} not in container")
    s = by_id[args.sample]
    if args.what == "eps":
        arr = s.grid.eps
    else:
        if s.tensor is None:
            raise ContainerError("container holds no index tensors")
        arr = s.tensor.data[args.channel]
    write_pgm(arr, args.out, vmin=args.vmin, vmax=args.vmax)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="scatter-dsm",
                                 description="2D inverse-scattering dataset toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a dataset container")
    g.add_argument("--family", required=True,
                   choices=["circles", "circles-high-contrast", "digits"])
    g.add_argument("--n-train", type=int, required=True)
    g.add_argument("--n-val", type=int, default=0)
    g.add_argument("--n-test", type=int, default=0)
    g.add_argument("--ni", type=int, default=None, help="incidence count")
    g.add_argument("--nr", type=int, default=None, help="receiver count")
    g.add_argument("--k", type=float, default=None, help="wavenumber")
    g.add_argument("--radius", type=float, default=None, help="measurement radius")
    g.add_argument("--half-aperture", action="store_true",
                   help="receivers on the upper half circle only")
    g.add_argument("--n", type=int, default=64, help="grid resolution")
    g.add_argument("--delta", type=float, default=0.05, help="training noise level")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--idx", default=None, help="IDX digit corpus (digits family)")
    g.add_argument("--config", default=None, help="JSON experiment config")
    g.add_argument("--threads", type=int, default=None)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=_cmd_gen)

    d = sub.add_parser("dsm", help="(re)compute index tensors for stored fields")
    d.add_argument("--in", required=True)
    d.add_argument("--delta", type=float, default=None,
                   help="re-noise clean fields at this level first")
    d.add_argument("--out", required=True)
    d.set_defaults(fn=_cmd_dsm)

    e = sub.add_parser("eval", help="score reconstructions against ground truth")
    e.add_argument("--recon", required=True)
    e.add_argument("--truth", required=True)
    e.add_argument("--delta", type=float, default=0.0,
                   help="noise level tag recorded in the report")
    e.add_argument("--dynamic-range", type=float, default=DEFAULT_DYNAMIC_RANGE)
    e.add_argument("--report", required=True, help="JSON-lines output path")
    e.set_defaults(fn=_cmd_eval)

    a = sub.add_parser("augment", help="rotation/mirror-augment a container")
    a.add_argument("--in", required=True)
    a.add_argument("--j", type=int, default=None,
                   help="rotation index (multiples of 2 pi / n_inc); mirror when n_inc = 1")
    a.add_argument("--out", required=True)
    a.set_defaults(fn=_cmd_augment)

    x = sub.add_parser("export", help="export a grid or index map as PGM")
    x.add_argument("--in", required=True)
    x.add_argument("--what", choices=["eps", "tensor"], default="eps")
    x.add_argument("--sample", type=int, required=True)
    x.add_argument("--channel", type=int, default=0)
    x.add_argument("--vmin", type=float, default=None)
    x.add_argument("--vmax", type=float, default=None)
    x.add_argument("--out", required=True)
    x.set_defaults(fn=_cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ContainerError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
