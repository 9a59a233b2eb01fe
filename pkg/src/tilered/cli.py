"""Command-line driver: ``tilered rigid|reduce|solve|verify|render``.

Exit codes: 0 success, 1 no solution / verification mismatch, 2 bad input.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .lattice import Lattice, QuotientGroup, iter_full_rank_lattices, parse_matrix
from .periodic import PeriodicSetTuple
from .reduce import ReductionError, ReductionInstance, reduce_tiles
from .render import (RenderSpec, ascii_art, bounding_window, coloring_from_solution,
                     coloring_from_tiles, svg)
from .rigid import RigidTileSet, UnsupportedDimensionError, build_rigid
from .solver import MODES, build_instance, solve, verify_reduction
from .tile import Tile


class UsageError(Exception):
    pass


def _matrix(text: str, d: int | None = None) -> list[tuple[int, ...]]:
    try:
        rows = parse_matrix(text)
    except ValueError:
        raise UsageError(f"cannot parse matrix {text!r}; use row syntax 'a,b;c,d'") from None
    if d is not None and any(len(r) != d for r in rows):
        raise UsageError(f"matrix {text!r} does not have {d} columns")
    return rows


def _load(path: str):
    try:
        return io.read_json(path)
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    except ValueError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _group_and_tiles(args) -> tuple[QuotientGroup, list[Tile]]:
    d = None
    G = None
    if args.group:
        G = io.group_from_json(_load(args.group))
        d = G.d
    tiles = io.tiles_from_json(_load(args.tiles), d)
    if G is None:
        G = QuotientGroup(Lattice(tiles[0].d))
    if tiles[0].d != G.d:
        raise UsageError(f"tiles live in Z^{tiles[0].d} but the group is a quotient of Z^{G.d}")
    return G, tiles


def cmd_rigid(args) -> int:
    if args.d < 2:
        raise UsageError(f"d={args.d} unsupported: rigid tiles need d >= 2")
    if args.s < 1:
        raise UsageError("s must be at least 1")
    rows = []
    if args.kernel:
        rows = io.group_from_json(_load(args.kernel)).kernel.basis
    elif args.kernel_inline:
        rows = _matrix(args.kernel_inline, args.d)
    R = build_rigid(args.d, args.s, Lattice(args.d, rows))
    if args.out:
        io.write_json(args.out, R.to_json())
    print(f"N={R.N}")
    print(f"m={R.m}")
    print(f"|T|={len(R.T)}")
    return 0


def cmd_reduce(args) -> int:
    G, tiles = _group_and_tiles(args)
    red = reduce_tiles(G, tiles)
    if args.out:
        io.write_json(args.out, red.to_json())
    print(f"k={red.k}")
    print(f"N={red.N}")
    for j, ft in enumerate(red.Ftilde, 1):
        print(f"|Ftilde_{j}|={len(ft)}")
    return 0


def cmd_solve(args) -> int:
    if args.request:
        req = _load(args.request)
        G = io.group_from_json(req["group"])
        tiles = io.tiles_from_json(req["tiles"], G.d)
        P = Lattice(G.d, req["period"])
        target = req.get("target")
        mode = req.get("mode", "all")
        origin = bool(req.get("require_origin", False))
    else:
        if not args.tiles:
            raise UsageError("--tiles is required")
        G, tiles = _group_and_tiles(args)
        target = io.read_json(args.target) if args.target else None
        if isinstance(target, dict):
            target = target["target"]
        mode, origin = args.mode, args.require_origin
        if args.sweep:
            return _sweep(G, tiles, target, origin, args.sweep, args.out)
        if not args.period:
            raise UsageError("--period is required (or --sweep BOUND)")
        P = Lattice(G.d, _matrix(args.period, G.d))
    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}")
    if not (G.kernel + P).is_full_rank:
        raise UsageError("kernel + period must have full rank")
    result = solve(build_instance(G, P, tiles, target), mode, require_origin=origin)
    if args.out:
        io.write_json(args.out, result.to_json())
    print(f"count={result.count}")
    for sol in result.solutions:
        print(io.dumps(sol.to_json()), end="")
    return 0 if result.count else 1


def _sweep(G, tiles, target, origin, bound, out) -> int:
    for M in iter_full_rank_lattices(G.d, bound):
        if not M.contains_lattice(G.kernel):
            continue
        result = solve(build_instance(G, M, tiles, target), "first", require_origin=origin)
        if result.count:
            print(f"period={M.to_json()} index={M.index}")
            print(io.dumps(result.solutions[0].to_json()), end="")
            if out:
                io.write_json(out, result.to_json())
            return 0
    print(f"no periodic tiling with period index <= {bound}")
    return 1


def cmd_verify(args) -> int:
    G, tiles = _group_and_tiles(args)
    P = Lattice(G.d, _matrix(args.period, G.d))
    if not (G.kernel + P).is_full_rank:
        raise UsageError("kernel + period must have full rank")
    red = reduce_tiles(G, tiles)
    if args.corrupt:
        # negative control: drop the last cell of Ftilde_1
        broken = Tile(red.Ftilde[0].cells[:-1], d=G.d)
        red = ReductionInstance(red.G, red.F, red.R, (broken,) + red.Ftilde[1:])
    report = verify_reduction(G, red.F, red, P)
    print(report.table())
    return 0 if report.ok else 1


def cmd_render(args) -> int:
    data = _load(args.input)
    panels_tiles = None
    solution = None
    kernel = None
    if isinstance(data, dict) and "T" in data and "Tj" in data:
        R = RigidTileSet.from_json(data)
        panels_tiles = [[R.T]] + [[t] for t in R.Tj]
    elif isinstance(data, dict) and "Ftilde" in data:
        red = ReductionInstance.from_json(data)
        panels_tiles = [[t] for t in red.Ftilde]
    elif isinstance(data, dict) and "solutions" in data:
        if not data["solutions"]:
            raise UsageError("solution file holds no solutions")
        G = io.group_from_json(data["group"])
        tiles = io.tiles_from_json(data["tiles"], G.d)
        idx = args.index
        if not 0 <= idx < len(data["solutions"]):
            raise UsageError(f"solution index {idx} out of range")
        solution = PeriodicSetTuple.from_json(data["solutions"][idx], G.d)
        kernel = G.kernel
        panels_tiles = [tiles]
    else:
        tiles = io.tiles_from_json(data)
        panels_tiles = [tiles]

    d = panels_tiles[0][0].d
    if args.svg and d != 2:
        raise UsageError(f"--svg needs d = 2, got d = {d}")
    if args.window:
        try:
            window = tuple(int(x) for x in args.window.split(","))
        except ValueError:
            raise UsageError("--window takes x0,y0,x1,y1") from None
        if len(window) != 4:
            raise UsageError("--window takes x0,y0,x1,y1")
    elif solution is not None:
        M = solution.period + kernel
        sides = [M.basis[i][i] for i in range(min(2, d))] + [1] * (2 - min(2, d))
        window = (0, 0, 2 * sides[0] - 1, 2 * sides[1] - 1)
    else:
        window = bounding_window([t for group in panels_tiles for t in group])
    spec = RenderSpec(window=window, cell_size=args.cell_size, kind="svg" if args.svg else "ascii")
    if solution is not None:
        grids = [coloring_from_solution(panels_tiles[0], solution, kernel, window)]
    else:
        grids = [coloring_from_tiles(group, window) for group in panels_tiles]
    if args.svg:
        Path(args.svg).write_text(svg(grids, spec))
    else:
        sys.stdout.write(ascii_art(grids))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tilered", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rigid", help="build the rigid tile set T, T_1..T_s")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    k = p.add_mutually_exclusive_group()
    k.add_argument("--kernel", help="group file whose relations generate L")
    k.add_argument("--kernel-inline", help='generators of L, e.g. "2,0" or "2,0;0,3"')
    p.add_argument("--out")
    p.set_defaults(func=cmd_rigid)

    p = sub.add_parser("reduce", help="build Ftilde_1..Ftilde_k from tiles over the group")
    p.add_argument("--group")
    p.add_argument("--tiles", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="periodic tilings on a finite quotient")
    p.add_argument("--tiles")
    p.add_argument("--group")
    p.add_argument("--period", help='period lattice rows, e.g. "4" or "0,2"')
    p.add_argument("--mode", choices=MODES, default="all")
    p.add_argument("--require-origin", action="store_true")
    p.add_argument("--target", help="JSON list of target cells")
    p.add_argument("--request", help="solve request JSON (replaces the other flags)")
    p.add_argument("--sweep", type=int, metavar="BOUND",
                   help="try every period lattice of index <= BOUND")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check the lift/project bijection at matched periods")
    p.add_argument("--group")
    p.add_argument("--tiles", required=True)
    p.add_argument("--period", required=True)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("render", help="draw tiles, rigid sets or solutions")
    p.add_argument("--input", required=True)
    out = p.add_mutually_exclusive_group(required=True)
    out.add_argument("--svg", metavar="OUT")
    out.add_argument("--ascii", action="store_true")
    p.add_argument("--window", help="x0,y0,x1,y1")
    p.add_argument("--cell-size", type=int, default=10)
    p.add_argument("--index", type=int, default=0, help="which solution to draw")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UnsupportedDimensionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ReductionError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
