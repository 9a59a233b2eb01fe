"""Tuples of periodic sets, each stored as (finite base) (+) (period lattice)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .lattice import Lattice, QuotientGroup, Vector, as_vector


@dataclass(frozen=True)
class PeriodicSetTuple:
    """k sets ``base_j (+) period`` in Z^d, period of full rank.

    Bases are reduced to canonical representatives of the period and sorted
    on construction, so two values describing the same sets over the same
    period compare equal.
    """

    base: tuple[tuple[Vector, ...], ...]
    period: Lattice

    def __post_init__(self):
        if not self.period.is_full_rank:
            raise ValueError("period lattice must have full rank")
        G = QuotientGroup(self.period)
        d = self.period.d
        canon = tuple(
            tuple(sorted({G.rep(as_vector(b, d)) for b in comp})) for comp in self.base
        )
        object.__setattr__(self, "base", canon)

    @property
    def k(self) -> int:
        return len(self.base)

    @property
    def d(self) -> int:
        return self.period.d

    @property
    def sort_key(self):
        return (self.base, self.period.basis)

    def contains(self, j: int, v: Sequence[int]) -> bool:
        return self.period.reduce(v) in set(self.base[j])

    def is_invariant(self, u: Sequence[int]) -> bool:
        """True when translating every component by ``u`` leaves it unchanged."""
        G = QuotientGroup(self.period)
        for comp in self.base:
            if {G.add(b, u) for b in comp} != set(comp):
                return False
        return True

    def with_period(self, coarser: Lattice) -> PeriodicSetTuple:
        """Rewrite over a superlattice of the period; the sets must be invariant under it."""
        if not coarser.contains_lattice(self.period):
            raise ValueError("new period must contain the current one")
        for w in coarser.basis:
            if not self.is_invariant(w):
                raise ValueError(f"sets are not invariant under {w}")
        return PeriodicSetTuple(self.base, coarser)

    def stabilizer(self) -> Lattice:
        """The lattice of all translations fixing every component."""
        G = QuotientGroup(self.period)
        extra = [c for c in G.elements() if any(c) and self.is_invariant(c)]
        return Lattice(self.d, list(self.period.basis) + extra)

    def scaled(self, n: int) -> PeriodicSetTuple:
        return PeriodicSetTuple(
            tuple(tuple(tuple(n * x for x in b) for b in comp) for comp in self.base),
            self.period.scaled(n),
        )

    def same_sets(self, other: PeriodicSetTuple) -> bool:
        """Set equality, independent of the period each side was written over."""
        if self.k != other.k or self.d != other.d:
            return False
        if not all(self.is_invariant(w) for w in other.period.basis):
            return False
        if not all(other.is_invariant(w) for w in self.period.basis):
            return False
        joint = self.period + other.period
        return self.with_period(joint) == other.with_period(joint)

    def cells_in(self, j: int, window: Iterable[Sequence[int]]) -> list[Vector]:
        members = set(self.base[j])
        return [tuple(v) for v in window if self.period.reduce(v) in members]

    def to_json(self) -> dict:
        return {
            "base": [[list(b) for b in comp] for comp in self.base],
            "period": self.period.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict, d: int | None = None) -> PeriodicSetTuple:
        period = [tuple(int(x) for x in row) for row in data["period"]]
        if d is None:
            d = len(period[0])
        return cls(
            tuple(tuple(tuple(int(x) for x in b) for b in comp) for comp in data["base"]),
            Lattice(d, period),
        )
