"""Shared hypothesis strategies: random glue pools, tiles, assemblies, systems.

The pools keep the diagonal glue model honest by fixing one strength per
label up front, so generated tile sets never trip the consistency check.
"""

from hypothesis import strategies as st

from tileforge.core import Assembly, Glue, NULL_GLUE, TileSystem, TileType


@st.composite
def glue_pools(draw, max_labels=4, strengths=(1, 2)):
    n = draw(st.integers(min_value=1, max_value=max_labels))
    pool = []
    for i in range(n):
        s = draw(st.sampled_from(strengths))
        pool.append(Glue(f"g{i}", s))
    return pool


@st.composite
def tiles_from_pool(draw, pool, name):
    side = st.sampled_from(pool + [NULL_GLUE])
    return TileType(
        name,
        north=draw(side),
        east=draw(side),
        south=draw(side),
        west=draw(side),
    )


@st.composite
def random_assemblies(draw, max_tiles=9, box=4):
    """Arbitrary placements in a small box; connectivity not guaranteed."""
    pool = draw(glue_pools())
    n_types = draw(st.integers(min_value=1, max_value=3))
    types = [draw(tiles_from_pool(pool, f"t{i}")) for i in range(n_types)]
    coords = [(x, y) for x in range(box) for y in range(box)]
    chosen = draw(
        st.lists(st.sampled_from(coords), min_size=1, max_size=max_tiles, unique=True)
    )
    cells = {loc: draw(st.sampled_from(types)) for loc in chosen}
    return Assembly(cells)


@st.composite
def connected_random_assemblies(draw, max_tiles=9):
    """Random-walk placements, connected in the grid graph by construction."""
    pool = draw(glue_pools())
    n_types = draw(st.integers(min_value=1, max_value=3))
    types = [draw(tiles_from_pool(pool, f"t{i}")) for i in range(n_types)]
    n = draw(st.integers(min_value=1, max_value=max_tiles))
    cells = {(0, 0): draw(st.sampled_from(types))}
    while len(cells) < n:
        base = draw(st.sampled_from(sorted(cells)))
        dx, dy = draw(st.sampled_from([(0, 1), (1, 0), (0, -1), (-1, 0)]))
        loc = (base[0] + dx, base[1] + dy)
        if loc not in cells:
            cells[loc] = draw(st.sampled_from(types))
    return Assembly(cells)


@st.composite
def small_systems(draw, max_types=4):
    """Single-tile-seed systems with a shared glue pool; growth may stall."""
    tau = draw(st.integers(min_value=1, max_value=2))
    pool = draw(glue_pools(strengths=(1, tau)))
    n_types = draw(st.integers(min_value=1, max_value=max_types))
    types = [draw(tiles_from_pool(pool, f"t{i}")) for i in range(n_types)]
    seed = Assembly({(0, 0): types[0]})
    return TileSystem(types, seed, tau, name="random")
