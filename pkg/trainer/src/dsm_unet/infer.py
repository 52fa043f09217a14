"""Inference and reconstruction export.

Predictions use the symmetrised two-term average

    eps_hat = 1/2 [ G(Phi) + R_pi( G(P Phi) ) ]

where P is the exact half-turn channel permutation (mirror for a single
incidence); the result is floored at the background level 1.  By
construction the reconstructions of a sample and of its half-turned twin
are exact half-turn images of each other.

Export regenerates noisy fields from the stored clean ones at any noise
level (seeds derive from sample id, level, and incidence only), recomputes
index tensors, scales them with the TRAINING constant from the header, and
writes predictions back into a container (tensor slot, one channel) for
the core toolkit's evaluator.
"""

from __future__ import annotations

import warnings
from pathlib import Path

import numpy as np
import torch

from .augment import mirror_image, rotate_pi_image, rotate_pi_pair
from .model import build_unet
from .physics import green_matrix, index_tensor, replay_noise
from .scat import Header, read_scat, split_ids, write_recon_scat


def load_model(path: str) -> tuple[torch.nn.Module, dict]:
    meta = torch.load(path, map_location="cpu", weights_only=True)
    model = build_unet(meta["n_inc"])
    model.load_state_dict(meta["state_dict"])
    model.eval()
    return model, meta


def infer_averaged(model: torch.nn.Module, x: torch.Tensor) -> torch.Tensor:
    """Two-term averaged prediction for a (n_inc, n, n) scaled input."""
    n_inc = x.shape[-3]
    xb = x[None]
    with torch.no_grad():
        if n_inc > 1 and n_inc % 2:
            warnings.warn("odd incidence count: falling back to a single pass")
            pred = model(xb)
        else:
            first = model(xb)
            second = model(rotate_pi_pair(xb))
            undo = mirror_image if n_inc == 1 else rotate_pi_image
            pred = 0.5 * (first + undo(second))
    return pred[0, 0].clamp(min=1.0)


def export_reconstructions(model_path: str, container: str, deltas, out_path: str,
                           split: str = "test") -> list[str]:
    """Reconstruct one split at each noise level; one container per level.

    A single level writes exactly ``out_path``; several levels append a
    ``.d<level>`` tag before the extension.  Returns the written paths.
    """
    model, meta = load_model(model_path)
    header, samples = read_scat(container)
    if meta["n_inc"] != header.n_inc:
        raise ValueError(f"model expects {meta['n_inc']} channels, "
                         f"container has {header.n_inc}")
    scale_c = meta["scale_c"]
    ids = split_ids(header)[split]
    chosen = [s for s in samples if s.sample_id in ids]
    if any(s.clean_us is None for s in chosen):
        raise ValueError("export needs stored clean fields")
    green = green_matrix(header)

    deltas = list(deltas)
    written = []
    for delta in deltas:
        recons = []
        for s in chosen:
            noisy = replay_noise(s.clean_us, s.sample_id, float(delta))
            tensor = index_tensor(noisy, header, green=green) * (2.0 / scale_c)
            x = torch.as_tensor(tensor, dtype=torch.float32)
            pred = infer_averaged(model, x).numpy().astype(np.float64)
            recons.append((s.sample_id, s.seed, s.eps, pred))
        path = _delta_path(out_path, delta, len(deltas) > 1)
        out_header = Header(header.family, len(recons), 1, header.n_rec, header.n,
                            header.k, header.r_meas, header.aperture,
                            float(delta), scale_c, 0)
        write_recon_scat(path, out_header, recons)
        written.append(path)
    return written


def _delta_path(out_path: str, delta: float, tag: bool) -> str:
    if not tag:
        return out_path
    p = Path(out_path)
    return str(p.with_name(f"{p.stem}.d{delta:g}{p.suffix}"))
