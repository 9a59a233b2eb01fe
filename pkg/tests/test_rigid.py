import itertools

import numpy as np
import pytest

from tilered.lattice import Lattice, QuotientGroup
from tilered.rigid import (
    RigidTileSet, UnsupportedDimensionError, block_layout, box, build_rigid, frame,
    shift_equal, verify_fundamental, verify_rigid_fundamental, verify_shift_equality,
)
from tilered.solver import build_instance, solve
from tilered.tile import Tile

STRIP = Lattice(2, [(2, 0)])


@pytest.fixture(scope="module")
def r11():
    return build_rigid(2, 1)


@pytest.fixture(scope="module")
def r19():
    return build_rigid(2, 2, STRIP)


def test_box_and_frame_sizes():
    assert len(box(2, 0)) == 1
    assert len(box(2, 1)) == 9
    assert len(box(3, 2)) == 125
    assert len(frame(2, 1)) == 8
    assert len(frame(2, 2)) == 16
    assert len(frame(3, 1)) == 26
    with pytest.raises(ValueError):
        frame(2, 0)
    with pytest.raises(ValueError):
        box(2, -1)


def test_block_layout():
    # q=2: one row of two 5x5 blocks inside an 11x11 box
    assert block_layout(2) == (5, 2, 5, 1)
    assert block_layout(4) == (9, 2, 9, 1)
    assert block_layout(6) == (13, 3, 19, 0)


@pytest.mark.parametrize("d,s,gens,N,m", [
    (2, 1, [], 11, 5),
    (2, 2, [(2, 0)], 19, 9),
    (2, 4, [(2, 0)], 39, 19),
    (3, 1, [], 15, 7),
])
def test_sizes(d, s, gens, N, m):
    R = build_rigid(d, s, Lattice(d, gens))
    assert (R.N, R.m) == (N, m)
    assert len(R.T) == N ** d
    assert all(len(t) == N ** d for t in R.Tj)
    assert len(R.Tj) == s


def test_origin_in_every_tile():
    for d, s, gens in [(2, 1, []), (2, 2, [(2, 0)]), (2, 3, [(1, 1), (0, 3)]),
                       (2, 4, [(2, 0)]), (3, 2, [(2, 0, 0)]), (3, 1, [(1, 0, 0), (0, 2, 0)])]:
        R = build_rigid(d, s, Lattice(d, gens))
        zero = (0,) * d
        assert zero in R.T
        assert all(zero in t for t in R.Tj)


def test_packing_blocks_inside_box_and_disjoint():
    for q_gens, s in [([], 1), ([(2, 0)], 2), ([(2, 0)], 4), ([(1, 2), (0, 5)], 3)]:
        R = build_rigid(2, s, Lattice(2, q_gens))
        blocks = [box(2, R.q).translate(v) for v in R.v]
        big = box(2, R.m)
        for b in blocks:
            assert b.issubset(big)
        for a, b in itertools.combinations(blocks, 2):
            assert a.isdisjoint(b)


def test_trivial_kernel_gives_equal_variants(r11):
    assert all(t == r11.T for t in r11.Tj)
    assert r11.r == 0


def test_rejects_low_dimension():
    with pytest.raises(UnsupportedDimensionError, match="d=1 unsupported"):
        build_rigid(1, 1)
    with pytest.raises(ValueError):
        build_rigid(2, 0)
    with pytest.raises(ValueError):
        build_rigid(2, 1, Lattice(3, [(1, 0, 0)]))


def test_deterministic(r19):
    again = build_rigid(2, 2, STRIP)
    assert again.to_json() == r19.to_json()


def test_json_round_trip(r19):
    back = RigidTileSet.from_json(r19.to_json())
    assert back == r19
    cells = r19.to_json()["T"]
    assert cells == sorted(cells)


def _embeds(small: Tile, big: Tile) -> bool:
    """Some translate of ``small`` lies inside ``big``; shifts tried exhaustively."""
    bset = set(big)
    anchor = small.to_list()[0]
    for target in big:
        shift = [t - a for t, a in zip(target, anchor)]
        if all(tuple(x + y for x, y in zip(c, shift)) in bset for c in small):
            return True
    return False


@pytest.mark.parametrize("d,q", [(2, 6), (3, 4)])
def test_frames_do_not_embed(d, q):
    frames = [frame(d, i) for i in range(1, q + 1)]
    for i, j in itertools.permutations(range(q), 2):
        assert not _embeds(frames[i], frames[j]), (i + 1, j + 1)


@pytest.mark.parametrize("d,s,gens", [(2, 1, []), (2, 2, [(2, 0)]), (2, 4, [(2, 0)]), (3, 1, [])])
def test_dent_uniqueness(d, s, gens):
    # among centres whose frame fits in the box, only v_i leaves S_i fully uncovered
    R = build_rigid(d, s, Lattice(d, gens))
    tset = set(R.T)
    for i in range(1, d + 1):
        S = frame(d, i)
        hits = [v for v in R.T if max(map(abs, v)) <= R.m - i
                and all(tuple(a + b for a, b in zip(v, c)) not in tset for c in S)]
        assert hits == [R.v[i - 1]]


def test_fundamental_domain(r11, r19):
    assert verify_rigid_fundamental(r11)
    assert verify_rigid_fundamental(r19, window_radius=2 * r19.N)
    with pytest.raises(ValueError):
        verify_rigid_fundamental(r11, window_radius=5)


def test_fundamental_domain_negative(r11):
    N = r11.N
    cells = r11.T.cells
    assert not verify_fundamental(Tile(cells[:-1], d=2), N, N)
    # same coset as cells[1]: one coset doubled, cells[0]'s coset left empty
    clash = cells[1] + np.array([N, 0])
    assert not verify_fundamental(Tile(np.vstack([cells[1:], [clash]]), d=2), N, N)
    # same coset as the removed cell: still a fundamental domain
    same = cells[0] + np.array([N, -N])
    assert verify_fundamental(Tile(np.vstack([cells[1:], [same]]), d=2), N, N)


def test_shift_equality(r19):
    assert verify_shift_equality(r19)
    big = build_rigid(2, 4, STRIP)
    assert verify_shift_equality(big)
    two = build_rigid(2, 2, Lattice(2, [(1, 1), (0, 2)]))
    assert verify_shift_equality(two)


def test_shift_equality_detects_moved_bump(r19):
    NL = r19.kernel.scaled(r19.N)
    t1 = r19.Tj[0]
    a = r19.d + 1
    bump = frame(2, a).translate(r19.v[a - 1]).translate([r19.N * x for x in r19.w[0]])
    assert bump.issubset(t1)
    moved = t1.difference(bump).union(bump.translate((0, 1)))
    assert not shift_equal(moved, r19.T, NL, 60)
    assert shift_equal(t1, r19.T, NL, 60)


def test_fills_torus_only_on_the_grid():
    # T's co-tiles through 0 on (Z/cN)^2 are exactly the image of N Z^2
    R = build_rigid(2, 1)
    N = R.N
    for c in (2, 3):
        torus = Lattice(2, [(c * N, 0), (0, c * N)])
        inst = build_instance(QuotientGroup(Lattice(2)), torus, [R.T])
        res = solve(inst, "all", require_origin=True)
        assert res.count == 1
        grid = sorted((N * a, N * b) for a in range(c) for b in range(c))
        assert list(res.solutions[0].base[0]) == grid


def test_trivial_kernel_variants_partition_the_grid():
    # r = 0: T_1 = T_2 = T, so every split of the grid image into two parts works
    R = build_rigid(2, 2)
    N = R.N
    inst = build_instance(QuotientGroup(Lattice(2)), Lattice(2, [(2 * N, 0), (0, 2 * N)]), R.Tj)
    res = solve(inst, "all", require_origin=True)
    grid = {(N * a, N * b) for a in range(2) for b in range(2)}
    assert res.count == 2 ** len(grid)
    for sol in res.solutions:
        a, b = set(sol.base[0]), set(sol.base[1])
        assert a.isdisjoint(b) and a | b == grid
