"""JSON readers and writers for the file formats shared by the CLI subcommands."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .lattice import QuotientGroup
from .tile import Tile


def dumps(obj: Any) -> str:
    return json.dumps(obj, separators=(",", ":")) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj))


def read_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text())


def group_to_json(G: QuotientGroup) -> dict:
    return {"d": G.d, "relations": G.kernel.to_json()}


def group_from_json(data: dict) -> QuotientGroup:
    return QuotientGroup.from_relations(int(data["d"]), data.get("relations", []))


def tiles_from_json(data: Any, d: int | None = None) -> list[Tile]:
    """Accepts ``{"tiles": [...]}`` or a bare list of tiles."""
    if isinstance(data, dict):
        d = data.get("d", d)
        data = data["tiles"]
    if not isinstance(data, list) or not data:
        raise ValueError("tile file holds no tiles")
    tiles = []
    for j, cells in enumerate(data):
        if not cells:
            raise ValueError(f"tile {j + 1} is empty")
        tiles.append(Tile(cells, d=d))
    dims = {t.d for t in tiles}
    if len(dims) != 1:
        raise ValueError("tiles have different dimensions")
    return tiles


def tiles_to_json(tiles: list[Tile]) -> dict:
    return {"d": tiles[0].d, "tiles": [t.to_list() for t in tiles]}
