"""Container-backed dataset: scaled index tensors in, permittivity maps out."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch

from .scat import Header, Sample, read_scat, split_ids


@dataclass
class SplitArrays:
    x: torch.Tensor          # (N, n_inc, n, n) scaled index tensors
    y: torch.Tensor          # (N, 1, n, n) permittivity
    sample_ids: list[int]


def load_split(path: str, split: str, scale_c: float | None = None,
               dtype=torch.float32) -> tuple[Header, SplitArrays]:
    """Load one split with inputs scaled by 2 / scale_c.

    The scale constant is the TRAINING split's maximum from the container
    header; it is never recomputed on val/test data.
    """
    header, samples = read_scat(path)
    if scale_c is None:
        scale_c = header.scale_c
    if scale_c <= 0:
        raise ValueError("container has no positive scale constant; "
                         "was it generated with index tensors?")
    ids = split_ids(header)[split]
    chosen = [s for s in samples if s.sample_id in ids]
    if not chosen:
        raise ValueError(f"split {split!r} is empty in {path}")
    if any(s.tensor is None for s in chosen):
        raise ValueError("container lacks index tensors")
    x = np.stack([s.tensor for s in chosen]) * (2.0 / scale_c)
    y = np.stack([s.eps for s in chosen])[:, None, :, :]
    return header, SplitArrays(x=torch.as_tensor(x, dtype=dtype),
                               y=torch.as_tensor(y, dtype=dtype),
                               sample_ids=[s.sample_id for s in chosen])
