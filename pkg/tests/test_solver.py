import random

import pytest

from oracles import naive_tilings, solution_sets
from tilered.lattice import Lattice, QuotientGroup
from tilered.periodic import PeriodicSetTuple
from tilered.solver import (
    InfiniteQuotientError, build_instance, is_tiling, solve,
)

Z = QuotientGroup(Lattice(1))
P4 = Lattice(1, [(4,)])


def _z4(tiles, **kw):
    return build_instance(Z, P4, tiles, **kw)


def test_domino_on_z4():
    res = solve(_z4([[(0,), (1,)]]), "all", require_origin=True)
    assert res.count == 1
    assert res.solutions[0].base == (((0,), (2,)),)
    # without the origin condition the shifted copy {1, 3} also appears
    assert solve(_z4([[(0,), (1,)]]), "all").count == 2


def test_gapped_pair_on_z4():
    res = solve(_z4([[(0,), (2,)]]), "all", require_origin=True)
    assert [s.base[0] for s in res.solutions] == [((0,), (1,)), ((0,), (3,))]


def test_singleton_tile_has_one_tiling():
    G = QuotientGroup.from_relations(2, [(2, 0)])
    inst = build_instance(G, Lattice(2, [(0, 3)]), [[(0, 0)]])
    res = solve(inst, "all", require_origin=True)
    assert res.count == 1
    assert len(res.solutions[0].base[0]) == inst.n == 6


def test_modes():
    inst = _z4([[(0,), (2,)]])
    assert solve(inst, "count").count == len(solve(inst, "all").solutions) == 4
    assert solve(inst, "count").solutions == []
    first = solve(inst, "first")
    assert first.count == 1 and first.solutions[0] in solve(inst, "all").solutions
    with pytest.raises(ValueError):
        solve(inst, "some")


def test_is_tiling_witness():
    inst = _z4([[(0,), (1,)]])
    bad = is_tiling(inst, [[(0,), (1,)]])
    assert not bad
    assert bad.cell == (1,)
    assert "more than once" in bad.reason
    assert is_tiling(inst, [[(0,), (2,)]])
    gap = is_tiling(inst, [[(0,)]])
    assert gap.cell == (2,) and "not covered" in gap.reason
    assert not is_tiling(inst, [[(1,), (3,)]], require_origin=True)


def test_is_tiling_accepts_solutions():
    G = QuotientGroup.from_relations(2, [(3, 0)])
    inst = build_instance(G, Lattice(2, [(0, 4)]), [[(0, 0), (1, 0), (0, 1)], [(0, 0), (0, 1)]])
    res = solve(inst, "all")
    assert res.count > 0
    for sol in res.solutions:
        assert is_tiling(inst, sol)
    assert len(set(res.solutions)) == res.count


def test_collapsed_tile_is_infeasible():
    # 0 and 2 coincide in Z/2, so the tile can never be placed
    inst = build_instance(Z, Lattice(1, [(2,)]), [[(0,), (2,)]])
    assert not inst.feasible.any()
    assert solve(inst, "all").count == 0


def test_infinite_quotient_rejected():
    G = QuotientGroup.from_relations(2, [(2, 0)])
    with pytest.raises(InfiniteQuotientError):
        build_instance(G, Lattice(2, [(4, 0)]), [[(0, 0)]])


def test_target_restricts_cover():
    inst = build_instance(Z, Lattice(1, [(6,)]), [[(0,), (1,)]], target=[(0,), (1,), (2,), (3,)])
    res = solve(inst, "all")
    assert [s.base[0] for s in res.solutions] == [((0,), (2,))]
    assert res.to_json()["target"] == [[0], [1], [2], [3]]
    # a placement hanging over the edge of the target is rejected
    assert not is_tiling(inst, [[(3,), (0,)]])


def _random_instance(rng):
    """Random quotient with |Q| <= 12, one or two tiles of size <= 3."""
    while True:
        d = rng.choice([1, 2])
        if d == 1:
            G = QuotientGroup(Lattice(1, [(rng.randint(0, 6),)] if rng.random() < 0.3 else []))
            P = Lattice(1, [(rng.randint(1, 12),)])
        else:
            gens = rng.choice([[], [(rng.randint(1, 3), rng.randint(0, 2))],
                               [(0, rng.randint(1, 3))]])
            G = QuotientGroup(Lattice(2, gens))
            P = Lattice(2, [(rng.randint(1, 4), rng.randint(0, 3)), (0, rng.randint(1, 4))])
        M = G.kernel + P
        if not M.is_full_rank or M.index > 12:
            continue
        k = rng.choice([1, 2])
        tiles = []
        for _ in range(k):
            size = rng.randint(1, 3)
            tiles.append(sorted({tuple(rng.randint(-2, 2) for _ in range(d)) for _ in range(size)}))
        return G, P, tiles


def _naive(inst, **kw):
    Q = inst.quotient
    cells = [tuple(int(x) for x in c) for c in inst.cells]
    tiles = [list(t) for t in inst.tiles]
    return naive_tilings(cells, Q.rep, tiles, **kw)


@pytest.mark.parametrize("seed", range(40))
def test_matches_naive_enumeration(seed):
    rng = random.Random(seed)
    G, P, tiles = _random_instance(rng)
    inst = build_instance(G, P, tiles)
    origin = rng.random() < 0.5
    assert solution_sets(solve(inst, "all", require_origin=origin)) == \
        _naive(inst, require_origin=origin)


def test_origin_filter_is_a_restriction():
    rng = random.Random(7)
    for _ in range(20):
        G, P, tiles = _random_instance(rng)
        inst = build_instance(G, P, tiles)
        zero = (0,) * G.d
        everything = solve(inst, "all").solutions
        through_origin = [s for s in everything if any(zero in comp for comp in s.base)]
        assert solve(inst, "all", require_origin=True).solutions == through_origin


def test_translation_covariance():
    rng = random.Random(11)
    for _ in range(15):
        G, P, tiles = _random_instance(rng)
        t = tuple(rng.randint(-3, 3) for _ in range(G.d))
        shifted = [[tuple(a + b for a, b in zip(c, t)) for c in tile] for tile in tiles]
        a = solve(build_instance(G, P, tiles), "all")
        b = solve(build_instance(G, P, shifted), "all")
        minus = tuple(-x for x in t)
        moved = {PeriodicSetTuple(tuple(tuple(tuple(x + y for x, y in zip(p, minus)) for p in comp)
                                        for comp in s.base), s.period) for s in a.solutions}
        assert moved == set(b.solutions)


def test_worker_count_does_not_change_output():
    G = QuotientGroup.from_relations(2, [(4, 0)])
    inst = build_instance(G, Lattice(2, [(0, 4)]), [[(0, 0), (1, 0)], [(0, 0), (0, 1)]])
    one = solve(inst, "all", jobs=1)
    two = solve(inst, "all", jobs=2)
    assert one.to_json() == two.to_json()
    assert one.count > 0


def test_jobs_env(monkeypatch):
    inst = _z4([[(0,), (1,)]])
    monkeypatch.setenv("TILERED_JOBS", "zero")
    with pytest.raises(ValueError, match="TILERED_JOBS"):
        solve(inst)
    monkeypatch.setenv("TILERED_JOBS", "2")
    assert solve(inst).count == 2


def test_solution_json_shape():
    data = solve(_z4([[(0,), (1,)]]), "all", require_origin=True).to_json()
    assert data["solutions"] == [{"base": [[[0], [2]]], "period": [[4]]}]
    assert data["count"] == 1 and data["mode"] == "all" and data["require_origin"] is True
