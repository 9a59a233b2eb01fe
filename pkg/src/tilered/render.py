"""SVG and ASCII pictures of planar tiles and tilings."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lattice import Lattice, QuotientGroup
from .periodic import PeriodicSetTuple
from .tile import Tile

PALETTE = (
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
)
GLYPHS = "0123456789abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class RenderSpec:
    window: tuple[int, int, int, int]  # x0, y0, x1, y1 inclusive
    cell_size: int = 10
    palette: tuple[str, ...] = field(default=PALETTE)
    kind: str = "svg"

    def __post_init__(self):
        x0, y0, x1, y1 = self.window
        if x1 < x0 or y1 < y0:
            raise ValueError("window must satisfy x0 <= x1 and y0 <= y1")
        if self.kind not in ("svg", "ascii"):
            raise ValueError("kind must be svg or ascii")


def _planar(cells: np.ndarray) -> np.ndarray:
    if cells.shape[1] >= 2:
        return cells
    return np.concatenate([cells, np.zeros((len(cells), 1), dtype=cells.dtype)], axis=1)


def bounding_window(tiles: Sequence[Tile], margin: int = 1) -> tuple[int, int, int, int]:
    cells = np.concatenate([_planar(t.cells)[:, :2] for t in tiles if len(t)])
    lo, hi = cells.min(axis=0), cells.max(axis=0)
    return (int(lo[0]) - margin, int(lo[1]) - margin, int(hi[0]) + margin, int(hi[1]) + margin)


def coloring_from_tiles(tiles: Sequence[Tile], window, slice_at: Sequence[int] = ()) -> np.ndarray:
    """Grid (rows = y descending, cols = x) of tile indices, -1 where empty.

    Overlapping tiles keep the lower index.  For d > 2 only the slice with
    trailing coordinates ``slice_at`` (zeros by default) is drawn.
    """
    x0, y0, x1, y1 = window
    grid = np.full((y1 - y0 + 1, x1 - x0 + 1), -1, dtype=np.int64)
    for j in range(len(tiles) - 1, -1, -1):
        c = _planar(tiles[j].cells)
        if c.shape[1] > 2:
            want = np.zeros(c.shape[1] - 2, dtype=np.int64)
            want[:len(slice_at)] = slice_at
            c = c[np.all(c[:, 2:] == want, axis=1)]
        keep = (c[:, 0] >= x0) & (c[:, 0] <= x1) & (c[:, 1] >= y0) & (c[:, 1] <= y1)
        c = c[keep]
        grid[y1 - c[:, 1], c[:, 0] - x0] = j
    return grid


def coloring_from_solution(tiles: Sequence[Tile], solution: PeriodicSetTuple,
                           group_kernel: Lattice, window) -> np.ndarray:
    """Color every window cell by the tile covering it in a periodic tiling."""
    M = solution.period + group_kernel
    Q = QuotientGroup(M)
    owner: dict[tuple, int] = {}
    for j, (tile, comp) in enumerate(zip(tiles, solution.base)):
        for a in comp:
            for f in tile:
                owner.setdefault(Q.rep([x + y for x, y in zip(a, f)]), j)
    x0, y0, x1, y1 = window
    grid = np.full((y1 - y0 + 1, x1 - x0 + 1), -1, dtype=np.int64)
    d = solution.d
    for y in range(y0, y1 + 1):
        for x in range(x0, x1 + 1):
            v = (x,) if d == 1 else (x, y) + (0,) * (d - 2)
            if d == 1 and y != 0:
                continue
            grid[y1 - y, x - x0] = owner.get(Q.rep(v), -1)
    return grid


def svg(panels: Sequence[np.ndarray], spec: RenderSpec, gap: int = 2) -> str:
    """One <rect> per colored cell; panels are laid out left to right."""
    cs = spec.cell_size
    h = max(p.shape[0] for p in panels)
    w = sum(p.shape[1] for p in panels) + gap * (len(panels) - 1)
    need = max((int(p.max()) for p in panels if p.size), default=-1) + 1
    if need > len(spec.palette):
        raise ValueError(f"palette has {len(spec.palette)} colors, need {need}")
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * cs}" height="{h * cs}" '
        f'viewBox="0 0 {w * cs} {h * cs}">',
        f'<rect x="0" y="0" width="{w * cs}" height="{h * cs}" fill="#ffffff"/>',
    ]
    left = 0
    for grid in panels:
        for r, c in zip(*np.nonzero(grid >= 0)):
            color = spec.palette[int(grid[r, c])]
            out.append(
                f'<rect x="{(left + c) * cs}" y="{r * cs}" width="{cs}" height="{cs}" '
                f'fill="{color}" stroke="#333333" stroke-width="0.5"/>'
            )
        left += grid.shape[1] + gap
    out.append("</svg>")
    return "\n".join(out) + "\n"


def ascii_art(panels: Sequence[np.ndarray], gap: int = 2) -> str:
    h = max(p.shape[0] for p in panels)
    lines = []
    for r in range(h):
        parts = []
        for grid in panels:
            if r < grid.shape[0]:
                parts.append("".join("." if v < 0 else GLYPHS[v % len(GLYPHS)] for v in grid[r]))
            else:
                parts.append(" " * grid.shape[1])
        lines.append((" " * gap).join(parts).rstrip())
    return "\n".join(lines) + "\n"
