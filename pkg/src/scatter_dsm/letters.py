"""Fixed raster masks for the letter targets D, S, M.

The glyphs are authored as 16x16 text art (rows top to bottom) and blown
up by an integer factor of 4 to the 64x64 raster, which keeps the masks
bit-reproducible without any font dependency.  The outer border stays
clear so every letter sits fully inside the sampling square.
"""

from __future__ import annotations

import numpy as np

_GLYPH_ART = {
    "D": [
        "................",
        "..########......",
        "..#########.....",
        "..#.......##....",
        "..#........#....",
        "..#........##...",
        "..#.........#...",
        "..#.........#...",
        "..#.........#...",
        "..#.........#...",
        "..#........##...",
        "..#........#....",
        "..#.......##....",
        "..#########.....",
        "..########......",
        "................",
    ],
    "S": [
        "................",
        "...#########....",
        "..##########....",
        "..##............",
        "..##............",
        "..###...........",
        "...#########....",
        ".....########...",
        "...........##...",
        "............##..",
        "............##..",
        "...........##...",
        "..##########....",
        "..#########.....",
        "................",
        "................",
    ],
    "M": [
        "................",
        "..##.......##...",
        "..###.....###...",
        "..####...####...",
        "..##.##.##.##...",
        "..##..###..##...",
        "..##...#...##...",
        "..##.......##...",
        "..##.......##...",
        "..##.......##...",
        "..##.......##...",
        "..##.......##...",
        "..##.......##...",
        "..##.......##...",
        "................",
        "................",
    ],
}

_UPSCALE = 4


def _art_to_mask(rows: list[str]) -> np.ndarray:
    assert len(rows) == 16 and all(len(r) == 16 for r in rows)
    # art row 0 is the top of the picture: grid axis 0 is x (columns of the
    # art), axis 1 is y increasing upward (reversed rows)
    art = np.array([[ch == "#" for ch in row] for row in rows])
    coarse = art[::-1].T
    return np.kron(coarse, np.ones((_UPSCALE, _UPSCALE), dtype=bool))


LETTER_MASKS = {name: _art_to_mask(rows) for name, rows in _GLYPH_ART.items()}
