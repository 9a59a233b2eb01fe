"""Reduction of tiling problems on Gamma = Z^d / L to tiling problems on Z^d.

Each tile F_j of Gamma becomes

    Ftilde_j = (N * lift(F_j minus 0) (+) T_j)  disjoint-union  T_{k+j}

where ``lift`` takes canonical representatives and T_1..T_{2k}, N come from
``build_rigid(d, 2k, L)``.  Co-tiles correspond through ``A -> N pi^-1(A)``.
"""
from __future__ import annotations

from dataclasses import dataclass

from .lattice import Lattice, QuotientGroup, Vector, lift_to_D
from .periodic import PeriodicSetTuple
from .rigid import RigidTileSet, build_rigid
from .tile import Tile


class ReductionError(ValueError):
    pass


class CotileError(ValueError):
    """A co-tile tuple outside the image of the lift.

    ``component`` is the 0-based tuple index and ``witness`` the offending cell.
    """

    def __init__(self, message: str, component: int, witness: Vector):
        super().__init__(message)
        self.component = component
        self.witness = witness


def canonical_tile(G: QuotientGroup, cells) -> Tile:
    return Tile(lift_to_D(G, cells), d=G.d)


@dataclass(frozen=True)
class ReductionInstance:
    G: QuotientGroup
    F: tuple[Tile, ...]
    R: RigidTileSet
    Ftilde: tuple[Tile, ...]

    @property
    def k(self) -> int:
        return len(self.F)

    @property
    def N(self) -> int:
        return self.R.N

    def to_json(self) -> dict:
        return {
            "group": {"d": self.G.d, "relations": self.G.kernel.to_json()},
            "F": [f.to_list() for f in self.F],
            "rigid": self.R.to_json(),
            "Ftilde": [f.to_list() for f in self.Ftilde],
            "N": self.N,
        }

    @classmethod
    def from_json(cls, data: dict) -> ReductionInstance:
        g = data["group"]
        G = QuotientGroup.from_relations(int(g["d"]), g["relations"])
        return cls(
            G=G,
            F=tuple(Tile(f, d=G.d) for f in data["F"]),
            R=RigidTileSet.from_json(data["rigid"]),
            Ftilde=tuple(Tile(f, d=G.d) for f in data["Ftilde"]),
        )


def normalize_tiles(G: QuotientGroup, tiles) -> tuple[list[Tile], list[Vector]]:
    """Translate each tile so its lexicographically least representative becomes 0.

    Returns the translated tiles and the subtracted shifts.
    """
    out, shifts = [], []
    for cells in tiles:
        reps = lift_to_D(G, cells)
        if not reps:
            raise ValueError("cannot normalize an empty tile")
        f = reps[0]
        out.append(canonical_tile(G, [[a - b for a, b in zip(c, f)] for c in reps]))
        shifts.append(f)
    return out, shifts


def reduce_tiles(G: QuotientGroup, tiles, R: RigidTileSet | None = None) -> ReductionInstance:
    d = G.d
    F = [canonical_tile(G, t) for t in tiles]
    if not F:
        raise ReductionError("at least one tile is required")
    zero = (0,) * d
    for j, f in enumerate(F, 1):
        if len(f) == 0:
            raise ReductionError(f"tile {j} is empty")
        if zero not in f:
            raise ReductionError(
                f"tile {j} does not contain 0; translate it first (normalize_tiles)"
            )
    k = len(F)
    if R is None:
        R = build_rigid(d, 2 * k, G.kernel)
    elif R.s != 2 * k or R.kernel != G.kernel:
        raise ReductionError("rigid tile set does not match the group and tile count")
    N = R.N
    Ftilde = []
    for j, f in enumerate(F):
        shifts = [c for c in f if any(c)]
        head = [R.Tj[j].translate([N * x for x in c]) for c in shifts]
        tail = R.Tj[k + j]
        try:
            ft = tail.disjoint_union(*head)
        except ValueError:
            raise ReductionError(f"translates in Ftilde_{j + 1} overlap") from None
        if len(ft) != len(f) * N ** d:
            raise ReductionError(f"|Ftilde_{j + 1}| != |F_{j + 1}| N^d")
        Ftilde.append(ft)
    return ReductionInstance(G=G, F=tuple(F), R=R, Ftilde=tuple(Ftilde))


def lift_cotiles(G: QuotientGroup, A: PeriodicSetTuple, N: int) -> PeriodicSetTuple:
    """(A_1..A_k) over Gamma  ->  (N pi^-1(A_1), ..., N pi^-1(A_k)) over Z^d.

    A set over Gamma is given by a base in Z^d and a period lattice; it
    stands for the union of the pi-images of base + period.  The preimage
    therefore has period ``period + L``.
    """
    if A.d != G.d:
        raise ValueError("co-tile tuple and group have different dimensions")
    if not A.period.is_full_rank:
        raise ValueError("co-tile period must have finite index")
    full = A.period + G.kernel
    pre = PeriodicSetTuple(A.base, full)
    return pre.scaled(N)


def project_cotiles(G: QuotientGroup, At: PeriodicSetTuple, N: int) -> PeriodicSetTuple:
    """Inverse of ``lift_cotiles``: recover A with At_j = N pi^-1(A_j).

    Raises CotileError when a component leaves N Z^d or is not NL-periodic.
    """
    d = G.d
    P = At.period
    for j, comp in enumerate(At.base):
        for b in comp:
            if any(x % N for x in b):
                raise CotileError(f"component {j} has a cell off N Z^{d}", j, b)
            for p in P.basis:
                c = tuple(x + y for x, y in zip(b, p))
                if any(x % N for x in c):
                    raise CotileError(f"component {j} has a cell off N Z^{d}", j, c)
    NL = G.kernel.scaled(N)
    for j, comp in enumerate(At.base):
        members = set(comp)
        for b in comp:
            for w in NL.basis:
                c = tuple(x + y for x, y in zip(b, w))
                if P.reduce(c) not in members:
                    raise CotileError(f"component {j} is not NL-periodic", j, c)
    if any(At.base):
        small = P.divided(N)
    else:
        # empty sets: any period will do, keep the part that lives on the grid
        small = (P + Lattice.full(d).scaled(N)).divided(N)
    period = small + G.kernel
    base = tuple(tuple(tuple(x // N for x in b) for b in comp) for comp in At.base)
    return PeriodicSetTuple(base, period)


def lifted_period(G: QuotientGroup, P: Lattice, N: int) -> Lattice:
    """N (L + P): the Z^d period matching period P on the Gamma side."""
    return (G.kernel + P).scaled(N)
