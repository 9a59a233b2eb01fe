"""Integer lattices in Z^d and the quotient groups Z^d / L.

Every lattice is stored through its row-style Hermite normal form: rows in
echelon form, positive pivots, and entries above each pivot reduced into
``[0, pivot)``.  That basis doubles as the canonical representative map of
the quotient: reducing the pivot coordinates of a vector, in row order,
lands on the unique representative whose pivot coordinates lie in
``[0, pivot)`` and whose other coordinates are untouched.  The set of all
such representatives is the fundamental domain used throughout the package;
it always contains the origin.

All lattice arithmetic is done on Python ints, so it is exact.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

Vector = tuple[int, ...]

# largest magnitude allowed in the int64 fast path of rep_array
_INT64_SAFE = 2**62


def as_vector(v: Iterable[int], d: int | None = None) -> Vector:
    out = tuple(int(x) for x in v)
    if d is not None and len(out) != d:
        raise ValueError(f"expected a vector of length {d}, got {len(out)}: {out}")
    return out


def hermite_basis(gens: Iterable[Sequence[int]], d: int | None = None) -> tuple[Vector, ...]:
    """Row-style Hermite normal form basis of the lattice spanned by ``gens``.

    >>> hermite_basis([(2, 0), (4, 0)])
    ((2, 0),)
    >>> hermite_basis([(2, 0), (0, 3), (1, 1)])
    ((1, 0), (0, 1))
    """
    rows = [list(as_vector(g)) for g in gens]
    if d is None:
        if not rows:
            raise ValueError("dimension is required when there are no generators")
        d = len(rows[0])
    for row in rows:
        if len(row) != d:
            raise ValueError(f"dimension mismatch: expected length {d}, got {row}")
    rows = [row for row in rows if any(row)]

    top = 0
    for col in range(d):
        live = [i for i in range(top, len(rows)) if rows[i][col]]
        if not live:
            continue
        # Euclid on the column until a single row keeps a nonzero entry
        while len(live) > 1:
            piv = min(live, key=lambda i: abs(rows[i][col]))
            prow = rows[piv]
            for i in live:
                if i != piv:
                    f = rows[i][col] // prow[col]
                    rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
            live = [i for i in live if rows[i][col]]
        i = live[0]
        rows[top], rows[i] = rows[i], rows[top]
        if rows[top][col] < 0:
            rows[top] = [-a for a in rows[top]]
        prow = rows[top]
        for i in range(top):
            f = rows[i][col] // prow[col]
            if f:
                rows[i] = [a - f * b for a, b in zip(rows[i], prow)]
        top += 1
    return tuple(tuple(row) for row in rows[:top])


@dataclass(frozen=True)
class Lattice:
    """A sublattice of Z^d.  Equality and hashing go through the HNF basis."""

    d: int
    gens: tuple[Vector, ...] = field(default=(), compare=False, repr=False)
    basis: tuple[Vector, ...] = field(init=False)

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        gens = tuple(as_vector(g, self.d) for g in self.gens)
        object.__setattr__(self, "gens", gens)
        object.__setattr__(self, "basis", hermite_basis(gens, self.d))

    @classmethod
    def full(cls, d: int) -> Lattice:
        return cls(d, [tuple(int(i == j) for j in range(d)) for i in range(d)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(c for c, x in enumerate(row) if x) for row in self.basis)

    @property
    def is_full_rank(self) -> bool:
        return self.rank == self.d

    @property
    def index(self) -> int | float:
        """[Z^d : L], or ``math.inf`` when the rank is below d."""
        if not self.is_full_rank:
            return math.inf
        return math.prod(self.basis[i][i] for i in range(self.d))

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of ``v + L``."""
        out = list(as_vector(v, self.d))
        for row, c in zip(self.basis, self.pivots):
            f = out[c] // row[c]
            if f:
                out = [a - f * b for a, b in zip(out, row)]
        return tuple(out)

    def contains(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def contains_lattice(self, other: Lattice) -> bool:
        return all(self.contains(w) for w in other.basis)

    def __add__(self, other: Lattice) -> Lattice:
        return sum_lattice(self, other)

    def scaled(self, n: int) -> Lattice:
        return Lattice(self.d, [tuple(n * x for x in row) for row in self.basis])

    def divided(self, n: int) -> Lattice:
        """The lattice ``{v : n v in L}``, for L inside n Z^d."""
        rows = []
        for row in self.basis:
            if any(x % n for x in row):
                raise ValueError(f"lattice is not contained in {n}Z^{self.d}")
            rows.append(tuple(x // n for x in row))
        return Lattice(self.d, rows)

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.basis]


def free_generators(L: Lattice) -> list[Vector]:
    """Free generators w_1..w_r of L (its HNF rows)."""
    return list(L.basis)


def sum_lattice(L1: Lattice, L2: Lattice) -> Lattice:
    if L1.d != L2.d:
        raise ValueError("lattices live in different dimensions")
    return Lattice(L1.d, L1.basis + L2.basis)


def index(L: Lattice) -> int | float:
    return L.index


def iter_full_rank_lattices(d: int, max_index: int) -> Iterator[Lattice]:
    """All full-rank sublattices of Z^d with index at most ``max_index``.

    Yielded by increasing index, then by HNF basis.  Each lattice appears
    exactly once because HNF is canonical.
    """
    for idx in range(1, max_index + 1):
        found = []
        for diag in _factorizations(idx, d):
            free = [(i, j) for i in range(d) for j in range(i + 1, d)]
            ranges = [range(diag[j]) for (_, j) in free]
            for entries in itertools.product(*ranges):
                rows = [[0] * d for _ in range(d)]
                for i in range(d):
                    rows[i][i] = diag[i]
                for (i, j), x in zip(free, entries):
                    rows[i][j] = x
                found.append(tuple(tuple(r) for r in rows))
        for basis in sorted(found):
            yield Lattice(d, basis)


def _factorizations(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (n,)
        return
    for a in range(1, n + 1):
        if n % a == 0:
            for rest in _factorizations(n // a, parts - 1):
                yield (a,) + rest


@dataclass(frozen=True)
class GroupElement:
    coords: Vector


@dataclass(frozen=True)
class QuotientGroup:
    """Gamma = Z^d / kernel, with elements stored as canonical representatives."""

    kernel: Lattice

    @classmethod
    def from_relations(cls, d: int, relations: Iterable[Sequence[int]] = ()) -> QuotientGroup:
        return cls(Lattice(d, list(relations)))

    @property
    def d(self) -> int:
        return self.kernel.d

    @property
    def is_finite(self) -> bool:
        return self.kernel.is_full_rank

    @property
    def order(self) -> int | float:
        return self.kernel.index

    def rep(self, v: Sequence[int]) -> Vector:
        return self.kernel.reduce(v)

    def element(self, v: Sequence[int]) -> GroupElement:
        return GroupElement(self.rep(v))

    def add(self, a: Sequence[int], b: Sequence[int]) -> Vector:
        return self.rep([x + y for x, y in zip(a, b)])

    def equal(self, a: Sequence[int], b: Sequence[int]) -> bool:
        return self.kernel.contains([x - y for x, y in zip(a, b)])

    def elements(self) -> list[Vector]:
        """Canonical representatives of a finite quotient, in lexicographic order."""
        if not self.is_finite:
            raise ValueError("quotient is infinite: kernel rank is below d")
        diag = [self.kernel.basis[i][i] for i in range(self.d)]
        return [tuple(v) for v in itertools.product(*(range(n) for n in diag))]

    def element_index(self, v: Sequence[int]) -> int:
        """Position of rep(v) in ``elements()`` (mixed radix over the diagonal)."""
        r = self.rep(v)
        out = 0
        for i in range(self.d):
            out = out * self.kernel.basis[i][i] + r[i]
        return out

    def rep_array(self, points: np.ndarray) -> np.ndarray:
        """Vectorised ``rep`` over the rows of an (n, d) integer array."""
        pts = np.asarray(points)
        if pts.ndim != 2 or pts.shape[1] != self.d:
            raise ValueError(f"expected an (n, {self.d}) array")
        basis = self.kernel.basis
        if not basis:
            return pts.copy()
        big = max(abs(x) for row in basis for x in row)
        top = int(np.abs(pts).max()) if pts.size else 0
        if pts.dtype != object and top * (1 + big) ** len(basis) < _INT64_SAFE:
            out = pts.astype(np.int64, copy=True)
        else:
            out = pts.astype(object, copy=True)
        for row, c in zip(basis, self.kernel.pivots):
            f = out[:, c] // row[c]
            out -= f[:, None] * np.asarray(row, dtype=out.dtype)[None, :]
        return out


def rep(G: QuotientGroup, v: Sequence[int]) -> Vector:
    return G.rep(v)


def lift_to_D(G: QuotientGroup, S: Iterable) -> list[Vector]:
    """Canonical representatives of a finite set of group elements, sorted.

    Elements may be given as GroupElement values or as integer vectors;
    vectors naming the same coset collapse to one representative.
    """
    reps = set()
    for s in S:
        coords = s.coords if isinstance(s, GroupElement) else s
        reps.add(G.rep(coords))
    return sorted(reps)


def project(G: QuotientGroup, cells: Iterable[Sequence[int]]) -> list[Vector]:
    """pi(cells) as sorted canonical representatives."""
    return lift_to_D(G, cells)


def parse_matrix(text: str) -> list[Vector]:
    """Parse row-semicolon syntax ``"a,b;c,d"`` into integer rows."""
    text = text.strip()
    if not text:
        return []
    rows = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if chunk:
            rows.append(tuple(int(x) for x in chunk.split(",")))
    return rows
