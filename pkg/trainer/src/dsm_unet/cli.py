"""Trainer CLI: ``dsm-unet train`` and ``dsm-unet export``."""

from __future__ import annotations

import argparse
import json
import sys

from .infer import export_reconstructions
from .train import TrainConfig, circle_preset, digit_preset, train


def _cmd_train(args) -> int:
    preset = circle_preset if args.preset == "circle" else digit_preset
    overrides = {}
    if args.epochs is not None:
        overrides["epochs"] = args.epochs
    if args.batch is not None:
        overrides["batch_size"] = args.batch
    cfg = preset(seed=args.seed, augment=not args.no_augment,
                 deterministic=args.deterministic, **overrides)
    summary = train(args.data, args.out, cfg)
    print(json.dumps(summary))
    return 0


def _cmd_export(args) -> int:
    paths = export_reconstructions(args.model, args.data, args.delta, args.out,
                                   split=args.split)
    for p in paths:
        print(f"wrote {p}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dsm-unet",
                                 description="U-Net trainer for index-map inversion")
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train on a SCAT1 dataset container")
    t.add_argument("--data", required=True)
    t.add_argument("--out", required=True, help="run directory (checkpoint + log)")
    t.add_argument("--preset", choices=["circle", "digit"], default="circle")
    t.add_argument("--epochs", type=int, default=None)
    t.add_argument("--batch", type=int, default=None)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--no-augment", action="store_true")
    t.add_argument("--deterministic", action="store_true")
    t.set_defaults(fn=_cmd_train)

    e = sub.add_parser("export", help="write reconstructions for the core evaluator")
    e.add_argument("--model", required=True)
    e.add_argument("--data", required=True)
    e.add_argument("--delta", type=float, action="append", required=True,
                   help="noise level; repeatable")
    e.add_argument("--split", choices=["train", "val", "test"], default="test")
    e.add_argument("--out", required=True)
    e.set_defaults(fn=_cmd_export)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
