"""U-Net mapping stacked index maps to a permittivity image.

Encoder-decoder with skip connections: double (3x3 conv, batch norm, ReLU)
blocks, 2x2 max-pool down, transposed-conv up, channel ladder 64-128-256-
512 with a 1024-wide bottleneck, and a final 1x1 convolution with ReLU.
Input (B, n_inc, 64, 64), output (B, 1, 64, 64) interpreted directly as
relative permittivity (the background level 1 is learned; inference may
floor at 1).
"""

from __future__ import annotations

import torch
from torch import nn

WIDTHS = (64, 128, 256, 512)
BOTTLENECK = 1024


class DoubleConv(nn.Module):
    def __init__(self, c_in: int, c_out: int):
        super().__init__()
        self.block = nn.Sequential(
            nn.Conv2d(c_in, c_out, 3, padding=1, bias=False),
            nn.BatchNorm2d(c_out),
            nn.ReLU(inplace=True),
            nn.Conv2d(c_out, c_out, 3, padding=1, bias=False),
            nn.BatchNorm2d(c_out),
            nn.ReLU(inplace=True),
        )

    def forward(self, x):
        return self.block(x)


class UNet(nn.Module):
    def __init__(self, n_inc: int):
        super().__init__()
        if n_inc < 1:
            raise ValueError(f"need at least one input channel, got {n_inc}")
        self.n_inc = n_inc
        self.pool = nn.MaxPool2d(2)
        enc = []
        c_prev = n_inc
        for w in WIDTHS:
            enc.append(DoubleConv(c_prev, w))
            c_prev = w
        self.encoders = nn.ModuleList(enc)
        self.bottleneck = DoubleConv(WIDTHS[-1], BOTTLENECK)
        ups, dec = [], []
        c_prev = BOTTLENECK
        for w in reversed(WIDTHS):
            ups.append(nn.ConvTranspose2d(c_prev, w, 2, stride=2))
            dec.append(DoubleConv(2 * w, w))
            c_prev = w
        self.ups = nn.ModuleList(ups)
        self.decoders = nn.ModuleList(dec)
        self.head = nn.Sequential(nn.Conv2d(WIDTHS[0], 1, 1), nn.ReLU(inplace=True))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        skips = []
        for enc in self.encoders:
            x = enc(x)
            skips.append(x)
            x = self.pool(x)
        x = self.bottleneck(x)
        for up, dec, skip in zip(self.ups, self.decoders, reversed(skips)):
            x = up(x)
            x = dec(torch.cat([skip, x], dim=1))
        return self.head(x)


def build_unet(n_inc: int) -> UNet:
    return UNet(n_inc)


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
