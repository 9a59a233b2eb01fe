"""Finite sets of lattice points stored as sorted, deduplicated int64 arrays."""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

import numpy as np

_LIMIT = 2**62


def _lexsorted_unique(arr: np.ndarray) -> np.ndarray:
    if len(arr) == 0:
        return arr
    order = np.lexsort(arr.T[::-1])
    arr = arr[order]
    keep = np.ones(len(arr), dtype=bool)
    keep[1:] = np.any(arr[1:] != arr[:-1], axis=1)
    return arr[keep]


def row_keys(*arrays: np.ndarray) -> list[np.ndarray]:
    """Map rows of several (n, d) arrays to int64 keys, equal rows to equal keys."""
    nonempty = [a for a in arrays if len(a)]
    if not nonempty:
        return [np.zeros(0, dtype=np.int64) for _ in arrays]
    stacked = np.concatenate(nonempty)
    lo = stacked.min(axis=0)
    span = stacked.max(axis=0) - lo + 1
    if float(np.prod(span.astype(float))) < _LIMIT:
        strides = np.ones(len(span), dtype=np.int64)
        for i in range(len(span) - 2, -1, -1):
            strides[i] = strides[i + 1] * span[i + 1]
        return [((a - lo) * strides).sum(axis=1) if len(a) else np.zeros(0, np.int64)
                for a in arrays]
    _, inverse = np.unique(stacked, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    out, pos = [], 0
    for a in arrays:
        out.append(inverse[pos:pos + len(a)].astype(np.int64))
        pos += len(a)
    return out


class Tile:
    """A finite subset of Z^d, immutable, cells in lexicographic order."""

    __slots__ = ("cells",)

    def __init__(self, cells: Iterable[Sequence[int]] | np.ndarray, d: int | None = None):
        if isinstance(cells, np.ndarray):
            arr = cells
        else:
            cells = [tuple(int(x) for x in c) for c in cells]
            if cells and max(abs(x) for c in cells for x in c) >= _LIMIT:
                raise OverflowError("cell coordinates exceed the int64 safe range")
            arr = np.array(cells, dtype=np.int64)
        if arr.size == 0:
            if d is None:
                d = arr.shape[1] if arr.ndim == 2 else None
            if d is None:
                raise ValueError("dimension is required for an empty tile")
            arr = np.zeros((0, d), dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("cells must be a list of equal-length vectors")
        if d is not None and arr.shape[1] != d:
            raise ValueError(f"expected {d}-dimensional cells, got {arr.shape[1]}")
        arr = _lexsorted_unique(np.asarray(arr, dtype=np.int64))
        arr.flags.writeable = False
        object.__setattr__(self, "cells", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Tile is immutable")

    def __reduce__(self):
        return (Tile, (np.array(self.cells), self.d))

    @property
    def d(self) -> int:
        return self.cells.shape[1]

    def __len__(self) -> int:
        return len(self.cells)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        for row in self.cells.tolist():
            yield tuple(row)

    def __contains__(self, v) -> bool:
        (k,), keys = row_keys(np.asarray([v], dtype=np.int64), self.cells)
        return bool(np.isin(k, keys).item())

    def __eq__(self, other) -> bool:
        return isinstance(other, Tile) and np.array_equal(self.cells, other.cells)

    def __hash__(self) -> int:
        return hash((self.cells.shape, self.cells.tobytes()))

    def __repr__(self) -> str:
        return f"Tile(<{len(self)} cells in Z^{self.d}>)"

    def to_list(self) -> list[list[int]]:
        return self.cells.tolist()

    def translate(self, v: Sequence[int]) -> Tile:
        v = np.asarray([int(x) for x in v], dtype=object)
        _check_range(self.cells, 1, v)
        return Tile(self.cells + v.astype(np.int64), d=self.d)

    def scale(self, n: int) -> Tile:
        _check_range(self.cells, n, None)
        return Tile(self.cells * n, d=self.d)

    def isdisjoint(self, other: Tile) -> bool:
        a, b = row_keys(self.cells, other.cells)
        return not np.isin(a, b).any()

    def issubset(self, other: Tile) -> bool:
        a, b = row_keys(self.cells, other.cells)
        return bool(np.isin(a, b).all())

    def union(self, *others: Tile) -> Tile:
        return Tile(np.concatenate([self.cells] + [o.cells for o in others]), d=self.d)

    def disjoint_union(self, *others: Tile) -> Tile:
        """Union that refuses overlapping operands."""
        parts = [self.cells] + [o.cells for o in others]
        merged = Tile(np.concatenate(parts), d=self.d)
        if len(merged) != sum(len(p) for p in parts):
            raise ValueError("operands of a disjoint union overlap")
        return merged

    def difference(self, other: Tile) -> Tile:
        a, b = row_keys(self.cells, other.cells)
        return Tile(self.cells[~np.isin(a, b)], d=self.d)

    def remove(self, other: Tile) -> Tile:
        """Set difference that requires ``other`` to be a subset."""
        if not other.issubset(self):
            raise ValueError("removed cells are not all present")
        return self.difference(other)

    def bounds(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Coordinatewise (min, max) corners."""
        return tuple(self.cells.min(axis=0).tolist()), tuple(self.cells.max(axis=0).tolist())


def _check_range(cells: np.ndarray, factor: int, shift) -> None:
    if not len(cells):
        return
    top = int(np.abs(cells).max()) * abs(int(factor))
    if shift is not None:
        top += max(abs(int(x)) for x in shift)
    if top >= _LIMIT:
        raise OverflowError("tile coordinates would leave the int64 safe range")
