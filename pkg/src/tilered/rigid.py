"""Jigsaw tiles whose bumps and dents pin every tiling to a fixed lattice.

``build_rigid(d, s, L)`` returns a box tile ``T`` of side ``N = 2m + 1``
with ``d`` frame-shaped dents, each matched by a bump displaced by
``N e_i``, together with ``s`` variants ``T_1..T_s``.  Variant ``j`` moves
``r = rank L`` further frames by ``N w_l`` for the free generators ``w_l``
of L, using its own block of frame radii so that variants cannot be
confused with one another.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import Lattice, QuotientGroup, Vector, free_generators
from .tile import Tile


class UnsupportedDimensionError(ValueError):
    pass


def box(d: int, n: int) -> Tile:
    """{-n..n}^d."""
    if n < 0:
        raise ValueError(f"box radius must be non-negative, got {n}")
    side = 2 * n + 1
    grid = np.indices((side,) * d).reshape(d, -1).T - n
    return Tile(grid, d=d)


def frame(d: int, n: int) -> Tile:
    """box(d, n) minus box(d, n - 1)."""
    if n < 1:
        raise ValueError(f"frame radius must be at least 1, got {n}")
    cells = box(d, n).cells
    return Tile(cells[np.abs(cells).max(axis=1) == n], d=d)


@dataclass(frozen=True)
class RigidTileSet:
    d: int
    s: int
    r: int
    q: int
    m: int
    N: int
    v: tuple[Vector, ...]
    w: tuple[Vector, ...]
    T: Tile
    Tj: tuple[Tile, ...]

    @property
    def kernel(self) -> Lattice:
        return Lattice(self.d, self.w)

    def frame_block(self, j: int) -> range:
        """1-based frame indices carrying the extra bumps of T_j."""
        start = self.d + self.r * (j - 1)
        return range(start + 1, start + self.r + 1)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "s": self.s,
            "N": self.N,
            "m": self.m,
            "v": [list(x) for x in self.v],
            "T": self.T.to_list(),
            "Tj": [t.to_list() for t in self.Tj],
            "kernel": [list(x) for x in self.w],
        }

    @classmethod
    def from_json(cls, data: dict) -> RigidTileSet:
        d = int(data["d"])
        w = tuple(tuple(int(x) for x in row) for row in data.get("kernel", []))
        return cls(
            d=d,
            s=int(data["s"]),
            r=len(w),
            q=len(data["v"]),
            m=int(data["m"]),
            N=int(data["N"]),
            v=tuple(tuple(int(x) for x in row) for row in data["v"]),
            w=w,
            T=Tile(data["T"], d=d),
            Tj=tuple(Tile(t, d=d) for t in data["Tj"]),
        )


def block_layout(q: int) -> tuple[int, int, int, int]:
    """(block side b, grid side g, box radius m, grid offset) for q frames.

    Frames of radius <= q get one b x b block each, b = 2q + 1, laid out on
    a g x g grid in the first two coordinates.  When g is even the grid is
    one cell narrower than the box, and it is pushed to the positive side so
    that the origin never lands on the outermost frame of a block.
    """
    b = 2 * q + 1
    g = math.isqrt(q - 1) + 1 if q > 1 else 1
    m = (g * b) // 2
    offset = 2 * m + 1 - g * b
    return b, g, m, offset


def packing(d: int, q: int) -> tuple[int, list[Vector]]:
    b, g, m, offset = block_layout(q)
    vs = []
    for i in range(q):
        col, row = i % g, i // g
        x = -m + offset + q + b * col
        y = -m + offset + q + b * row
        vs.append((x, y) + (0,) * (d - 2))
    return m, vs


def build_rigid(d: int, s: int, L: Lattice | None = None) -> RigidTileSet:
    if d < 2:
        raise UnsupportedDimensionError(f"d={d} unsupported: rigid tiles need d >= 2")
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    if L is None:
        L = Lattice(d)
    if L.d != d:
        raise ValueError(f"kernel lives in Z^{L.d}, expected Z^{d}")

    w = free_generators(L)
    r = len(w)
    q = d + r * s
    m, v = packing(d, q)
    N = 2 * m + 1
    frames = [frame(d, i) for i in range(1, q + 1)]
    unit = [tuple(N * int(i == k) for k in range(d)) for i in range(d)]

    def dent(i):
        return frames[i - 1].translate(v[i - 1])

    T = box(d, m).remove(Tile(np.concatenate([dent(i).cells for i in range(1, d + 1)]), d=d))
    T = T.disjoint_union(*(dent(i).translate(unit[i - 1]) for i in range(1, d + 1)))

    Tj = []
    for j in range(1, s + 1):
        start = d + r * (j - 1)
        idx = range(start + 1, start + r + 1)
        tj = T
        if r:
            tj = tj.remove(Tile(np.concatenate([dent(a).cells for a in idx]), d=d))
            tj = tj.disjoint_union(*(
                dent(a).translate([N * x for x in w[l]]) for l, a in enumerate(idx)
            ))
        Tj.append(tj)

    return RigidTileSet(d=d, s=s, r=r, q=q, m=m, N=N, v=tuple(v), w=tuple(w), T=T, Tj=tuple(Tj))


def verify_fundamental(tile: Tile, N: int, window_radius: int) -> bool:
    """Every cell of the window is t + N z for exactly one t in ``tile``."""
    d = tile.d
    residues = np.mod(tile.cells, N)
    codes = (residues * (N ** np.arange(d - 1, -1, -1, dtype=np.int64))).sum(axis=1)
    counts = np.bincount(codes, minlength=N ** d)
    window = np.mod(box(d, window_radius).cells, N)
    wcodes = (window * (N ** np.arange(d - 1, -1, -1, dtype=np.int64))).sum(axis=1)
    return bool(np.all(counts[wcodes] == 1))


def verify_rigid_fundamental(R: RigidTileSet, window_radius: int | None = None) -> bool:
    if window_radius is None:
        window_radius = R.N
    if window_radius < R.N:
        raise ValueError("window radius must be at least N")
    return verify_fundamental(R.T, R.N, window_radius)


def default_shift_window(R: RigidTileSet) -> int:
    wmax = max((abs(x) for row in R.w for x in row), default=0)
    return R.m + R.N * (1 + wmax) + R.N


@lru_cache(maxsize=8)
def _window_reps(period: Lattice, d: int, window_radius: int) -> frozenset:
    """Canonical representatives, modulo ``period``, of the cells in the window."""
    reps = QuotientGroup(period).rep_array(box(d, window_radius).cells)
    return frozenset(map(tuple, np.unique(reps, axis=0).tolist()))


def shift_equal(a: Tile, b: Tile, period: Lattice, window_radius: int) -> bool:
    """Windowed test of ``a (+) period == b (+) period`` as direct sums."""
    G = QuotientGroup(period)
    ra = set(map(tuple, G.rep_array(a.cells).tolist()))
    rb = set(map(tuple, G.rep_array(b.cells).tolist()))
    if len(ra) != len(a) or len(rb) != len(b):
        return False
    return _window_reps(period, a.d, window_radius).isdisjoint(ra ^ rb)


def verify_shift_equality(R: RigidTileSet, window_radius: int | None = None) -> bool:
    """T_j (+) NL == T (+) NL for every j, checked on a window."""
    if window_radius is None:
        window_radius = default_shift_window(R)
    NL = R.kernel.scaled(R.N)
    return all(shift_equal(tj, R.T, NL, window_radius) for tj in R.Tj)
