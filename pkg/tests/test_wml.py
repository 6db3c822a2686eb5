"""Window movies, splicing, and pumping on hand-built path systems.

The fixed scenarios are small enough that every movie and every spliced
assembly was written out by hand first: a repeating column for the basic
shorten/lengthen pair, a zig-zag for record ordering, and a seed row with
a descending column for the collision case.  The randomized trials mirror
the soundness contract: whatever cuts are found, the library either hands
back a replay-validated assembly or raises, never an unverified guess.
"""

import random

import pytest

from tileforge.core import (
    Assembly,
    AssemblySequence,
    Direction,
    Glue,
    TileSystem,
    TileType,
)
from tileforge.wml import (
    CollisionDuringPump,
    MovieMismatch,
    PumpingParameters,
    Window,
    find_pumpable,
    greedy_replay,
    pump,
    splice,
    window_movie,
)


def column_system(height):
    """Single repeating column above a one-tile base, grown to `height`."""
    up = Glue("up", 1)
    base = TileType("base", north=up)
    col = TileType("col", north=up, south=up)
    s = TileSystem(
        tiles=frozenset({base, col}),
        seed=Assembly({(0, 0): base}),
        temperature=1,
    )
    steps = tuple(((0, y), col) for y in range(1, height))
    return s, AssemblySequence(system=s, steps=steps)


def row_system():
    """1x3 row growing east; only the leading faces carry glue."""
    r = Glue("r", 1)
    t0 = TileType("t0", east=r)
    mid = TileType("mid", west=r, east=r)
    end = TileType("end", west=r)
    s = TileSystem(
        tiles=frozenset({t0, mid, end}),
        seed=Assembly({(0, 0): t0}),
        temperature=1,
    )
    return s, AssemblySequence(
        system=s, steps=(((1, 0), mid), ((2, 0), end))
    )


def unique_glue_path(length):
    """Straight path east with a fresh glue at every step: movies never
    repeat anywhere along it."""
    glues = [Glue(f"u{i}", 1) for i in range(length)]
    tiles = [TileType("p0", east=glues[0])]
    for i in range(1, length):
        tiles.append(TileType(f"p{i}", west=glues[i - 1], east=glues[i]))
    s = TileSystem(
        tiles=frozenset(tiles),
        seed=Assembly({(0, 0): tiles[0]}),
        temperature=1,
    )
    steps = tuple(((i, 0), tiles[i]) for i in range(1, length))
    return s, AssemblySequence(system=s, steps=steps)


def crash_system():
    """Seed row with a column rising from its middle, an arm east along
    the top, and a column descending back toward the row."""
    up = Glue("gup", 1)
    arm = Glue("arm", 1)
    down = Glue("bdn", 1)
    rg = Glue("row", 1)
    green = TileType("green", north=up, east=rg, west=rg)
    gray = TileType("gray", north=up, south=up)
    cap = TileType("cap", south=up, east=arm)
    armt = TileType("armt", west=arm, east=arm)
    hook = TileType("hook", west=arm, south=down)
    blue = TileType("blue", north=down, south=down)
    s = TileSystem(
        tiles=frozenset({green, gray, cap, armt, hook, blue}),
        seed=Assembly({(x, 0): green for x in range(-3, 4)}),
        temperature=1,
    )
    steps = (
        [((0, y), gray) for y in range(1, 8)]
        + [((0, 8), cap), ((1, 8), armt), ((2, 8), armt), ((3, 8), hook)]
        + [((3, y), blue) for y in range(7, 3, -1)]
    )
    return s, AssemblySequence(system=s, steps=tuple(steps))


def test_window_edge_sets():
    v = Window.vertical(2, 0, 1)
    assert v.edges == frozenset({((1, 0), (2, 0)), ((1, 1), (2, 1))})
    h = Window.horizontal(0, -1, 0)
    assert h.edges == frozenset({((-1, -1), (-1, 0)), ((0, -1), (0, 0))})


def test_window_translate_moves_coord_and_span():
    v = Window.vertical(2, 0, 1)
    assert v.translate(3, -1) == Window.vertical(5, -1, 0)
    h = Window.horizontal(4, 2, 5)
    assert h.translate(1, 2) == Window.horizontal(6, 3, 6)


def test_window_rejects_bad_axis_and_span():
    with pytest.raises(ValueError):
        Window("d", 0, (0, 1))
    with pytest.raises(ValueError):
        Window.vertical(0, 2, 1)


def test_movie_empty_for_disjoint_window():
    _, seq = row_system()
    assert len(window_movie(seq, Window.vertical(9, 0, 0))) == 0


def test_movie_single_record_for_row_cut():
    _, seq = row_system()
    movie = window_movie(seq, Window.vertical(2, 0, 0))
    assert len(movie) == 1
    (rec,) = movie.records
    assert rec.vertex == (1, 0)
    assert rec.glue == Glue("r", 1)
    assert rec.orientation == (1, 0)


def test_movie_dedupes_matching_far_side_glue():
    # both column faces present 'up' across the cut; one record suffices
    _, seq = column_system(6)
    movie = window_movie(seq, Window.horizontal(3, 0, 0))
    assert [(r.vertex, r.orientation) for r in movie.records] == [
        ((0, 2), (0, 1))
    ]


def test_zigzag_movie_alternates_orientations():
    a, b, c, d, e, f, g = (Glue(x, 1) for x in "abcdefg")
    tiles = {
        (0, 0): TileType("s0", east=a),
        (1, 0): TileType("r0", west=a, north=b),
        (1, 1): TileType("r1", south=b, west=c),
        (0, 1): TileType("l1", east=c, north=d),
        (0, 2): TileType("l2", south=d, east=e),
        (1, 2): TileType("r2", west=e, north=f),
        (1, 3): TileType("r3", south=f, west=g),
        (0, 3): TileType("l3", east=g),
    }
    s = TileSystem(
        tiles=frozenset(tiles.values()),
        seed=Assembly({(0, 0): tiles[(0, 0)]}),
        temperature=1,
    )
    order = [(1, 0), (1, 1), (0, 1), (0, 2), (1, 2), (1, 3), (0, 3)]
    seq = AssemblySequence(
        system=s, steps=tuple((loc, tiles[loc]) for loc in order)
    )
    movie = window_movie(seq, Window.vertical(1, 0, 3))
    assert [(r.vertex, r.glue.label, r.orientation) for r in movie.records] == [
        ((0, 0), "a", (1, 0)),
        ((1, 1), "c", (-1, 0)),
        ((0, 2), "e", (1, 0)),
        ((1, 3), "g", (-1, 0)),
    ]


def test_self_splice_is_identity():
    _, seq = column_system(9)
    w = Window.horizontal(4, 0, 0)
    left, right = splice(seq, w, seq, w)
    assert left == seq.replay()
    assert right == seq.replay()


def test_splice_shortens_and_lengthens_column():
    _, seq = column_system(9)
    short, long_ = splice(
        seq, Window.horizontal(3, 0, 0), seq, Window.horizontal(7, 0, 0)
    )
    assert short.domain == frozenset((0, y) for y in range(5))
    assert long_.domain == frozenset((0, y) for y in range(13))


def test_splice_rejects_mismatched_movies():
    _, seq = unique_glue_path(8)
    with pytest.raises(MovieMismatch):
        splice(seq, Window.vertical(2, 0, 0), seq, Window.vertical(5, 0, 0))


def test_splice_rejects_foreign_sequences():
    _, seq_a = column_system(6)
    _, seq_b = row_system()
    with pytest.raises(ValueError):
        splice(seq_a, Window.vertical(1, 0, 0), seq_b, Window.vertical(1, 0, 0))


def test_find_pumpable_trivial_path_none():
    _, seq = column_system(2)
    assert find_pumpable(seq, corridor_width=1) is None


def test_find_pumpable_aperiodic_none():
    _, seq = unique_glue_path(9)
    assert find_pumpable(seq, corridor_width=1) is None


def test_find_pumpable_rejects_bad_width():
    _, seq = column_system(5)
    with pytest.raises(ValueError):
        find_pumpable(seq, corridor_width=0)
    with pytest.raises(ValueError):
        # a height-5 column is 1 wide, stated width must cover it
        _, wide = row_system()
        find_pumpable(wide, corridor_width=0)


def test_pump_column_extends_by_periods():
    s, seq = column_system(10)
    cuts = find_pumpable(seq, corridor_width=1)
    assert cuts is not None
    c1, c2 = cuts
    pumped = pump(seq, c1, c2, 3)
    period = c2.coord - c1.coord
    assert pumped.domain == frozenset(
        (0, y) for y in range(10 + 3 * period)
    )
    assert greedy_replay(s, pumped) is not None


def test_pump_zero_copies_is_identity():
    _, seq = column_system(7)
    c1, c2 = find_pumpable(seq, corridor_width=1)
    assert pump(seq, c1, c2, 0) == seq.replay()


def test_pump_rejects_unordered_cuts():
    _, seq = column_system(7)
    c1, c2 = find_pumpable(seq, corridor_width=1)
    with pytest.raises(ValueError):
        pump(seq, c2, c1, 2)


def test_pump_collides_with_seed_row():
    # descending column pumped downward: three extra periods fit in the
    # gap, the fourth lands on the seed row
    s, seq = crash_system()
    c1 = Window.horizontal(7, 3, 3)
    c2 = Window.horizontal(6, 3, 3)
    pumped = pump(seq, c1, c2, 3)
    assert (3, 1) in pumped
    assert greedy_replay(s, pumped) is not None
    with pytest.raises(CollisionDuringPump) as err:
        pump(seq, c1, c2, 4)
    assert err.value.location == (3, 0)


def test_pump_narrow_cut_leaves_other_column_alone():
    s, seq = crash_system()
    pumped = pump(
        seq, Window.horizontal(7, 3, 3), Window.horizontal(6, 3, 3), 2
    )
    # the rising column and the arm are untouched
    for y in range(9):
        assert pumped.at((0, y)) is not None
    assert pumped.at((2, 8)) is not None
    # the descending column gained exactly two cells
    assert min(y for (x, y) in pumped.locations() if x == 3 and y > 0) == 2


def test_pumping_parameters_formula():
    from math import factorial

    pp = PumpingParameters.for_simulator(2, 1)
    assert pp.p == ((2 + 1) ** 6 * factorial(6) + 1) * 6 + 1 == 3149287
    assert PumpingParameters.for_simulator(0, 1).p == 4327
    big = PumpingParameters.for_simulator(5, 3)
    assert big.p == ((5 + 1) ** 18 * factorial(18) + 1) * 6 + 1
    with pytest.raises(ValueError):
        PumpingParameters.for_simulator(-1, 1)
    with pytest.raises(ValueError):
        PumpingParameters.for_simulator(3, 0)


def periodic_path(rng):
    """Random straight periodic path system and its growth sequence."""
    p = rng.choice([1, 2, 3])
    d = rng.choice(list(Direction))
    side = d.name.lower()
    back = d.opposite.name.lower()
    glues = [Glue(f"c{i}", 1) for i in range(p)]
    tiles = []
    for i in range(p):
        tiles.append(
            TileType(
                f"t{i}",
                **{side: glues[i], back: glues[(i - 1) % p]},
            )
        )
    base = TileType("b", **{side: glues[p - 1]})
    s = TileSystem(
        tiles=frozenset(tiles + [base]),
        seed=Assembly({(0, 0): base}),
        temperature=1,
    )
    n = rng.randrange(3 * p + 2, 8 * p + 2)
    dx, dy = d.vector
    steps = tuple(
        ((dx * i, dy * i), tiles[(i - 1) % p]) for i in range(1, n)
    )
    return s, AssemblySequence(system=s, steps=steps)


def test_random_periodic_paths_splice_and_pump_soundly():
    rng = random.Random(61)
    found = 0
    for _ in range(25):
        s, seq = periodic_path(rng)
        cuts = find_pumpable(seq, corridor_width=1)
        if cuts is None:
            continue
        found += 1
        c1, c2 = cuts
        for out in splice(seq, c1, seq, c2):
            assert greedy_replay(s, out) is not None
        for k in (1, 5):
            pumped = pump(seq, c1, c2, k)
            assert greedy_replay(s, pumped) is not None
            assert len(pumped) > len(seq.replay())
    assert found >= 20
