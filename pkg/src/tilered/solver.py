"""Periodic tilings on finite quotients, by exact cover.

A tiling of Gamma = Z^d / L with period P is the same thing as an exact
cover of the finite group Q = Z^d / (L + P) by translates of the projected
tiles.  The search is Algorithm X over the cell x placement incidence: it
always branches on the open cell with the fewest live placements, and keeps
the per-cell counts up to date with vectorised numpy updates.

A placement is a pair (tile j, position a in Q).  Placements whose cells
collide in Q, or leave the target set, can never occur in a tiling and are
discarded before the search starts.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .lattice import Lattice, QuotientGroup, Vector, as_vector
from .periodic import PeriodicSetTuple
from .reduce import ReductionInstance, lift_cotiles, lifted_period, project_cotiles
from .tile import Tile

MODES = ("first", "all", "count")


class InfiniteQuotientError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteInstance:
    G: QuotientGroup
    P: Lattice
    M: Lattice  # L + P
    cells: np.ndarray  # (n, d) canonical representatives of Q
    tiles: tuple[Tile, ...]
    target: np.ndarray  # bool mask over cells
    feasible: np.ndarray  # bool, (k * n,)
    place_cells: np.ndarray  # (k * n, width), padded with n
    cell_places: np.ndarray  # (n, depth), feasible placements only, padded with k * n

    @property
    def n(self) -> int:
        return len(self.cells)

    @property
    def k(self) -> int:
        return len(self.tiles)

    @property
    def quotient(self) -> QuotientGroup:
        return QuotientGroup(self.M)

    def cell_index(self, v: Sequence[int]) -> int:
        return self.quotient.element_index(v)

    def placement(self, p: int) -> tuple[int, int]:
        return divmod(int(p), self.n)

    def placement_cells(self, p: int) -> np.ndarray:
        row = self.place_cells[p]
        return row[row < self.n]


def build_instance(G: QuotientGroup, P: Lattice, tiles, target=None) -> FiniteInstance:
    """Finite exact-cover instance for tilings of G with period P.

    ``tiles`` are iterables of Z^d vectors (representatives of Gamma
    elements); ``target`` optionally restricts the covered set to a list of
    cells, read modulo L + P.
    """
    d = G.d
    if P.d != d:
        raise ValueError("period and group have different dimensions")
    M = G.kernel + P
    if not M.is_full_rank:
        raise InfiniteQuotientError("L + P does not have full rank: the quotient is infinite")
    Q = QuotientGroup(M)
    cells = np.array(Q.elements(), dtype=np.int64).reshape(-1, d)
    n = len(cells)
    radix = np.array([M.basis[i][i] for i in range(d)], dtype=np.int64)
    strides = np.ones(d, dtype=np.int64)
    for i in range(d - 2, -1, -1):
        strides[i] = strides[i + 1] * radix[i + 1]

    tiles = tuple(t if isinstance(t, Tile) else Tile(list(t), d=d) for t in tiles)
    for j, t in enumerate(tiles):
        if t.d != d:
            raise ValueError(f"tile {j} has dimension {t.d}, expected {d}")
        if len(t) == 0:
            raise ValueError(f"tile {j} is empty")

    if target is None:
        in_target = np.ones(n, dtype=bool)
    else:
        in_target = np.zeros(n, dtype=bool)
        for v in target:
            in_target[Q.element_index(as_vector(v, d))] = True

    k = len(tiles)
    width = max(len(t) for t in tiles)
    place_cells = np.full((k * n, width), n, dtype=np.int64)
    feasible = np.zeros(k * n, dtype=bool)
    for j, t in enumerate(tiles):
        offs = Q.rep_array(t.cells)
        # (n, |t|, d) sums, reduced into Q
        sums = (cells[:, None, :] + offs[None, :, :]).reshape(-1, d)
        idx = (Q.rep_array(sums) * strides).sum(axis=1).reshape(n, len(t))
        srt = np.sort(idx, axis=1)
        distinct = np.all(srt[:, 1:] != srt[:, :-1], axis=1) if len(t) > 1 else np.ones(n, bool)
        inside = in_target[idx].all(axis=1)
        place_cells[j * n:(j + 1) * n, :len(t)] = srt
        feasible[j * n:(j + 1) * n] = distinct & inside

    rows = np.nonzero(feasible)[0]
    sub = place_cells[rows]
    mask = sub < n
    flat_cells = sub[mask]
    flat_rows = np.repeat(rows, mask.sum(axis=1))
    order = np.lexsort((flat_rows, flat_cells))
    flat_cells, flat_rows = flat_cells[order], flat_rows[order]
    deg = np.bincount(flat_cells, minlength=n)
    depth = max(int(deg.max()) if len(deg) else 0, 1)
    cell_places = np.full((n, depth), k * n, dtype=np.int64)
    starts = np.concatenate([[0], np.cumsum(deg)[:-1]])
    slot = np.arange(len(flat_cells)) - starts[flat_cells]
    cell_places[flat_cells, slot] = flat_rows

    return FiniteInstance(
        G=G, P=P, M=M, cells=cells, tiles=tiles, target=in_target,
        feasible=feasible, place_cells=place_cells, cell_places=cell_places,
    )


@dataclass
class SolutionSet:
    instance: FiniteInstance = field(repr=False)
    mode: str
    require_origin: bool
    solutions: list[PeriodicSetTuple]
    count: int

    def __len__(self) -> int:
        return self.count

    def __iter__(self):
        return iter(self.solutions)

    def to_json(self) -> dict:
        inst = self.instance
        out = {
            "group": {"d": inst.G.d, "relations": inst.G.kernel.to_json()},
            "tiles": [t.to_list() for t in inst.tiles],
            "period": inst.P.to_json(),
            "mode": self.mode,
            "require_origin": self.require_origin,
            "count": self.count,
            "solutions": [s.to_json() for s in self.solutions],
        }
        if not inst.target.all():
            out["target"] = inst.cells[inst.target].tolist()
        return out


class _State:
    __slots__ = ("alive", "counts", "open")

    def __init__(self, alive, counts, open_):
        self.alive = alive
        self.counts = counts
        self.open = open_


def _root(inst: FiniteInstance) -> _State:
    alive = np.append(inst.feasible, False)
    counts = np.bincount(inst.place_cells[inst.feasible].ravel(), minlength=inst.n + 1)[:inst.n]
    return _State(alive, counts.astype(np.int64), inst.target.copy())


def _kill(inst: FiniteInstance, st: _State, dead: np.ndarray) -> _State:
    dead = dead[st.alive[dead]]
    alive = st.alive.copy()
    alive[dead] = False
    drop = np.bincount(inst.place_cells[dead].ravel(), minlength=inst.n + 1)[:inst.n]
    return _State(alive, st.counts - drop, st.open)


def _select(inst: FiniteInstance, st: _State, p: int) -> _State:
    cells = inst.placement_cells(p)
    hit = inst.cell_places[cells].ravel()
    hit = np.unique(hit[st.alive[hit]])
    nxt = _kill(inst, st, hit)
    nxt.open = st.open.copy()
    nxt.open[cells] = False
    return nxt


def _choose(st: _State) -> int | None:
    """Open cell with fewest live placements; None when nothing is open."""
    if not st.open.any():
        return None
    masked = np.where(st.open, st.counts, np.iinfo(np.int64).max)
    return int(masked.argmin())


def _walk(inst: FiniteInstance, st: _State, chosen, limit: int | None):
    """Depth-first enumeration below ``st``; yields chosen-placement chains."""
    frames = []
    node = (st, chosen)
    found = 0
    while True:
        if node is not None:
            s, ch = node
            node = None
            c = _choose(s)
            if c is None:
                yield ch
                found += 1
                if limit is not None and found >= limit:
                    return
            elif s.counts[c] > 0:
                row = inst.cell_places[c]
                cands = row[s.alive[row]]
                frames.append((s, ch, cands, [0]))
        if not frames:
            return
        s, ch, cands, pos = frames[-1]
        if pos[0] >= len(cands):
            frames.pop()
            continue
        p = int(cands[pos[0]])
        pos[0] += 1
        node = (_select(inst, s, p), (p, ch))


def _branches(inst: FiniteInstance, require_origin: bool):
    """Disjoint top-level subproblems as (placements to discard, placement to take)."""
    root = _root(inst)
    if require_origin:
        origin = [j * inst.n for j in range(inst.k) if inst.feasible[j * inst.n]]
        return root, [(tuple(origin[:i]), p) for i, p in enumerate(origin)]
    c = _choose(root)
    if c is None:
        return root, [((), None)]
    row = inst.cell_places[c]
    return root, [((), int(p)) for p in row[root.alive[row]]]


def _run_branch(inst: FiniteInstance, root: _State, kills, pick, limit):
    st = root
    if kills:
        st = _kill(inst, st, np.asarray(kills, dtype=np.int64))
    chain = None
    if pick is not None:
        if not st.alive[pick]:
            return []
        st = _select(inst, st, pick)
        chain = (pick, None)
    out = []
    for ch in _walk(inst, st, chain, limit):
        picks = []
        while ch is not None:
            picks.append(ch[0])
            ch = ch[1]
        out.append(tuple(sorted(picks)))
    return out


def _jobs(jobs: int | None) -> int:
    if jobs is None:
        raw = os.environ.get("TILERED_JOBS", "1")
        try:
            jobs = int(raw)
        except ValueError:
            raise ValueError(f"TILERED_JOBS must be a positive integer, got {raw!r}") from None
    if jobs < 1:
        raise ValueError("worker count must be positive")
    return jobs


def solve(inst: FiniteInstance, mode: str = "all", require_origin: bool = False,
          jobs: int | None = None) -> SolutionSet:
    """Enumerate co-tile tuples (A_1..A_k) with the tiles exactly covering the target.

    ``require_origin`` keeps only tuples whose union of co-tiles contains
    the origin cell.  Results are sorted, so the output does not depend on
    the worker count.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    jobs = _jobs(jobs)
    root, branches = _branches(inst, require_origin)
    limit = 1 if mode == "first" else None
    if jobs > 1 and len(branches) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(branches))) as pool:
            futures = [pool.submit(_run_branch, inst, root, kl, pk, limit) for kl, pk in branches]
            per_branch = [f.result() for f in futures]
    else:
        per_branch = []
        for kl, pk in branches:
            per_branch.append(_run_branch(inst, root, kl, pk, limit))
            if mode == "first" and per_branch[-1]:
                break
    chains = [c for part in per_branch for c in part]
    if mode == "first":
        chains = chains[:1]
    if mode == "count":
        return SolutionSet(inst, mode, require_origin, [], len(chains))
    solutions = sorted((_to_tuple(inst, ch) for ch in chains), key=lambda s: s.sort_key)
    count = len(solutions)
    return SolutionSet(inst, mode, require_origin, solutions, count)


def _positions(inst: FiniteInstance, picks) -> list[list[Vector]]:
    comps = [[] for _ in range(inst.k)]
    for p in picks:
        j, a = inst.placement(p)
        comps[j].append(tuple(int(x) for x in inst.cells[a]))
    return comps


def _to_tuple(inst: FiniteInstance, picks) -> PeriodicSetTuple:
    return PeriodicSetTuple(tuple(tuple(c) for c in _positions(inst, picks)), inst.M)


@dataclass(frozen=True)
class TilingCheck:
    ok: bool
    cell: Vector | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_tiling(inst: FiniteInstance, candidate, require_origin: bool = False) -> TilingCheck:
    """Check a candidate co-tile tuple directly, reporting the first bad cell.

    ``candidate`` is a PeriodicSetTuple over ``inst.M`` or a sequence of k
    collections of positions (read modulo L + P).
    """
    Q = inst.quotient
    if isinstance(candidate, PeriodicSetTuple):
        if candidate.period != inst.M:
            candidate = candidate.with_period(inst.M) if inst.M.contains_lattice(candidate.period) \
                else None
            if candidate is None:
                raise ValueError("candidate period is not compatible with the instance")
        comps = candidate.base
    else:
        comps = candidate
    if len(comps) != inst.k:
        raise ValueError(f"expected {inst.k} co-tiles, got {len(comps)}")
    cover: dict[Vector, int] = {}
    positions = set()
    for tile, comp in zip(inst.tiles, comps):
        for a in {Q.rep(a) for a in comp}:
            positions.add(a)
            for f in tile:
                c = Q.rep([x + y for x, y in zip(a, f)])
                cover[c] = cover.get(c, 0) + 1
    for i, c in enumerate(Q.elements()):
        hits = cover.get(c, 0)
        if hits and not inst.target[i]:
            return TilingCheck(False, c, "covered outside the target")
        if hits > 1:
            return TilingCheck(False, c, "covered more than once")
        if inst.target[i] and hits == 0:
            return TilingCheck(False, c, "not covered")
    origin = (0,) * inst.G.d
    if require_origin and origin not in positions:
        return TilingCheck(False, origin, "origin is not a co-tile position")
    return TilingCheck(True)


@dataclass
class ReductionReport:
    gamma_count: int
    lifted_count: int
    gamma_solutions: list[PeriodicSetTuple]
    lifted_solutions: list[PeriodicSetTuple]
    unmatched_gamma: list[PeriodicSetTuple]
    unmatched_lifted: list[PeriodicSetTuple]
    period_gamma: Lattice
    period_lifted: Lattice

    @property
    def ok(self) -> bool:
        return (self.gamma_count == self.lifted_count
                and not self.unmatched_gamma and not self.unmatched_lifted)

    def table(self) -> str:
        lines = [
            f"{'side':<8}{'period':<28}{'solutions':>10}",
            f"{'Gamma':<8}{str(self.period_gamma.to_json()):<28}{self.gamma_count:>10}",
            f"{'Z^d':<8}{str(self.period_lifted.to_json()):<28}{self.lifted_count:>10}",
            f"unmatched: Gamma {len(self.unmatched_gamma)}, Z^d {len(self.unmatched_lifted)}",
            f"{self.gamma_count} = {self.lifted_count}, {'OK' if self.ok else 'MISMATCH'}"
            if self.gamma_count == self.lifted_count else
            f"{self.gamma_count} != {self.lifted_count}, MISMATCH",
        ]
        return "\n".join(lines)


def verify_reduction(G: QuotientGroup, F, reduction: ReductionInstance, P: Lattice,
                     jobs: int | None = None) -> ReductionReport:
    """Enumerate both sides at matched periods and pair them through lift/project.

    Gamma side: Tile_0(F; Gamma) with period P.  Z^d side: Tile_0(Ftilde; Z^d)
    with period N (L + P).
    """
    N = reduction.N
    gamma = solve(build_instance(G, P, F), "all", require_origin=True, jobs=jobs)
    Zd = QuotientGroup(Lattice(G.d))
    Pz = lifted_period(G, P, N)
    lifted = solve(build_instance(Zd, Pz, reduction.Ftilde), "all", require_origin=True, jobs=jobs)

    lifted_set = set(lifted.solutions)
    gamma_set = set(gamma.solutions)
    unmatched_gamma = []
    for A in gamma.solutions:
        At = lift_cotiles(G, A, N)
        if At not in lifted_set:
            unmatched_gamma.append(A)
    unmatched_lifted = []
    for At in lifted.solutions:
        try:
            A = project_cotiles(G, At, N)
        except ValueError:
            unmatched_lifted.append(At)
            continue
        if A not in gamma_set or lift_cotiles(G, A, N) != At:
            unmatched_lifted.append(At)
    return ReductionReport(
        gamma_count=gamma.count,
        lifted_count=lifted.count,
        gamma_solutions=gamma.solutions,
        lifted_solutions=lifted.solutions,
        unmatched_gamma=unmatched_gamma,
        unmatched_lifted=unmatched_lifted,
        period_gamma=P,
        period_lifted=Pz,
    )
