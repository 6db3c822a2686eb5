"""Compile any tile system into a single-tile-seed system at scale 4.

Each seed tile becomes a 4x4 block.  The inner 2x2 square of every block,
plus two connector cells per spanning-tree edge, carries a single chain of
uniquely-glued tiles (the core path) that starts at the new seed tile in
the origin block and threads every block before anything else can happen.
The twelve boundary cells of each block form a ring; splicing the rings of
tree-adjacent blocks at their shared side yields one closed walk around
the whole structure (the perimeter path), which grows only after the core
path ends and whose tiles expose the seed's outward-facing glues.

Tiles outside the seed structure are one classifier tile per minimal glue
set of each source tile, placed at a fixed in-block position, plus shared
three-stage paths per (glue, direction) that carry a glue's arrival into
the neighbouring block.  Arrival strengths mirror the source glue, so a
full-strength glue claims the neighbour's classifier cell by itself while
weaker glues must cooperate, exactly as in the source system.  Every cell
such a path can occupy inside a still-growing seed block is a ring cell,
and the construction places rescue glues (and two corner-fill tiles) so
the perimeter walk can always continue past the intrusion.
"""

from dataclasses import dataclass
from enum import Enum

from tileforge.core import (
    Assembly,
    DIRECTIONS,
    Direction,
    Glue,
    NULL_GLUE,
    TileSystem,
    TileType,
)
from tileforge.simrel import SimulationInstance, TableClassifier


class MalformedSeed(Exception):
    """The seed violates an assumption the compiler depends on."""


class TemplateGap(Exception):
    """No template fits a spanning-tree vertex; internal invariant."""


class OriginCase(Enum):
    SINGLE = "single"
    N = "n"
    E = "e"
    NE = "ne"


def origin_location(seed: Assembly):
    """Westernmost cell of the southernmost row."""
    if len(seed) == 0:
        raise MalformedSeed("empty seed")
    return min(seed.locations(), key=lambda loc: (loc[1], loc[0]))


def classify_origin(seed: Assembly) -> OriginCase:
    if len(seed) == 1:
        return OriginCase.SINGLE
    x, y = origin_location(seed)
    north = (x, y + 1) in seed
    east = (x + 1, y) in seed
    if north and east:
        return OriginCase.NE
    if north:
        return OriginCase.N
    if east:
        return OriginCase.E
    raise MalformedSeed("origin tile is isolated from the rest of the seed")


@dataclass(frozen=True)
class SpanningTree:
    root: tuple
    parent: dict  # vertex -> parent vertex, root excluded

    def vertices(self):
        return sorted([self.root] + list(self.parent))

    def children(self, v):
        """Children of v in the fixed N, E, S, W probe order."""
        out = []
        for d in DIRECTIONS:
            u = d.step(v)
            if self.parent.get(u) == v:
                out.append(u)
        return out


def spanning_tree(seed: Assembly) -> SpanningTree:
    """Depth-first tree over the seed's cells, probing N, E, S, W."""
    root = origin_location(seed)
    parent = {}
    seen = {root}

    def visit(v):
        for d in DIRECTIONS:
            u = d.step(v)
            if u in seed and u not in seen:
                seen.add(u)
                parent[u] = v
                visit(u)

    visit(root)
    if len(seen) != len(seed):
        raise MalformedSeed("seed is not connected")
    return SpanningTree(root=root, parent=parent)


# block-local geometry: core corners counter-clockwise from the southwest,
# the boundary ring counter-clockwise from the southwest corner, and the
# two ring cells each tree edge borrows as core connectors
CORE_CCW = ((1, 1), (2, 1), (2, 2), (1, 2))
SIDE_OF = (Direction.SOUTH, Direction.EAST, Direction.NORTH, Direction.WEST)
ENTER_INDEX = {
    Direction.EAST: 0,
    Direction.NORTH: 1,
    Direction.WEST: 2,
    Direction.SOUTH: 3,
}
CONNECTORS = {
    Direction.SOUTH: {"exit": (1, 0), "child_in": (1, 3), "child_out": (2, 3), "back": (2, 0)},
    Direction.EAST: {"exit": (3, 1), "child_in": (0, 1), "child_out": (0, 2), "back": (3, 2)},
    Direction.NORTH: {"exit": (2, 3), "child_in": (2, 0), "child_out": (1, 0), "back": (1, 3)},
    Direction.WEST: {"exit": (0, 2), "child_in": (3, 2), "child_out": (3, 1), "back": (0, 1)},
}
RING_CCW = (
    (0, 0), (1, 0), (2, 0), (3, 0),
    (3, 1), (3, 2), (3, 3),
    (2, 3), (1, 3), (0, 3),
    (0, 2), (0, 1),
)
CORNERS = {(0, 0), (3, 0), (3, 3), (0, 3)}
# middle ring cells per side, and the core cell backing each middle
SIDE_MIDDLES = {
    Direction.SOUTH: ((1, 0), (2, 0)),
    Direction.EAST: ((3, 1), (3, 2)),
    Direction.NORTH: ((2, 3), (1, 3)),
    Direction.WEST: ((0, 2), (0, 1)),
}
SUPPORT_CORE = {
    (1, 0): (1, 1), (2, 0): (2, 1),
    (3, 1): (2, 1), (3, 2): (2, 2),
    (2, 3): (2, 2), (1, 3): (1, 2),
    (0, 2): (1, 2), (0, 1): (1, 1),
}
# crossing the splice at a tree edge: leaving this corner of the near
# block lands on that corner of the far block
SEW = {
    Direction.EAST: ((3, 0), (0, 0)),
    Direction.NORTH: ((3, 3), (3, 0)),
    Direction.WEST: ((0, 3), (3, 3)),
    Direction.SOUTH: ((0, 0), (0, 3)),
}
# designated exposure cell per outward side, doubling as a stage position
EXPOSURE_CELL = {
    Direction.EAST: (3, 2),
    Direction.NORTH: (2, 3),
    Direction.WEST: (0, 2),
    Direction.SOUTH: (2, 0),
}
C_CELL = (2, 2)


def _tree_sides(tree: SpanningTree, block):
    """Directions of tree edges incident to block."""
    out = set()
    p = tree.parent.get(block)
    for d in DIRECTIONS:
        u = d.step(block)
        if u == p or tree.parent.get(u) == block:
            out.add(d)
    return out


def core_tour(tree: SpanningTree):
    """The full core path as (block, cell) pairs, seed tile first.

    Each block's four core cells are walked counter-clockwise; at a tree
    edge the walk detours through two connector cells into the child,
    tours the whole subtree, and comes back through the other pair.
    """
    out = []

    def walk(block, enter_idx):
        for step in range(4):
            idx = (enter_idx + step) % 4
            out.append((block, CORE_CCW[idx]))
            if step == 3:
                break
            d = SIDE_OF[idx]
            child = d.step(block)
            if tree.parent.get(child) != block:
                continue
            conn = CONNECTORS[d]
            out.append((block, conn["exit"]))
            out.append((child, conn["child_in"]))
            walk(child, ENTER_INDEX[d])
            out.append((child, conn["child_out"]))
            out.append((block, conn["back"]))

    walk(tree.root, 0)
    return out


def perimeter_walk(tree: SpanningTree):
    """The spliced boundary ring as (block, cell) pairs.

    Starts at the origin block's west-side cell bound to the core path's
    final tile and proceeds counter-clockwise, jumping across each tree
    edge where that side's middle cells were taken by core connectors.
    """
    consumed = {}
    for block in tree.vertices():
        consumed[block] = {
            cell
            for d in _tree_sides(tree, block)
            for cell in SIDE_MIDDLES[d]
        }
    start = (tree.root, (0, 2))
    walk = [start]
    current = start
    while True:
        block, cell = current
        idx = RING_CCW.index(cell)
        nxt = RING_CCW[(idx + 1) % 12]
        if nxt in consumed[block]:
            for d, (here, there) in SEW.items():
                if cell == here and nxt in SIDE_MIDDLES[d]:
                    current = (d.step(block), there)
                    break
            else:
                raise TemplateGap(f"ring breaks at {block} {cell}")
        else:
            current = (block, nxt)
        if current == start:
            break
        walk.append(current)
    return walk


@dataclass(frozen=True)
class SupertileTemplate4:
    block: tuple
    template_id: str  # origin_* or a..e
    rotation: int  # degrees counter-clockwise from the reference pose
    roles: dict  # cell -> "core" | "perimeter"
    core_order: tuple  # this block's core cells in tour order
    perimeter_order: tuple  # this block's ring cells in walk order


# reference poses: a = dead end open west, b = straight west-east,
# c = corner west-north, d = tee open everywhere but south, e = cross
_TEMPLATE_POSES = {
    "a": frozenset({Direction.WEST}),
    "b": frozenset({Direction.WEST, Direction.EAST}),
    "c": frozenset({Direction.WEST, Direction.NORTH}),
    "d": frozenset({Direction.WEST, Direction.NORTH, Direction.EAST}),
    "e": frozenset(DIRECTIONS),
}
_ROT = {
    Direction.WEST: [Direction.WEST, Direction.SOUTH, Direction.EAST, Direction.NORTH],
    Direction.SOUTH: [Direction.SOUTH, Direction.EAST, Direction.NORTH, Direction.WEST],
    Direction.EAST: [Direction.EAST, Direction.NORTH, Direction.WEST, Direction.SOUTH],
    Direction.NORTH: [Direction.NORTH, Direction.WEST, Direction.SOUTH, Direction.EAST],
}


def _match_template(sides: frozenset):
    for tid, pose in sorted(_TEMPLATE_POSES.items()):
        if len(pose) != len(sides):
            continue
        for k in range(4):
            if frozenset(_ROT[d][k] for d in pose) == sides:
                return tid, 90 * k
    raise TemplateGap(f"no template covers sides {sorted(d.name for d in sides)}")


def assign_templates4(tree: SpanningTree) -> dict:
    """One positioned template per block of the spanning tree."""
    tour = core_tour(tree)
    walk = perimeter_walk(tree)
    assignment = {}
    for block in tree.vertices():
        sides = _tree_sides(tree, block)
        if block == tree.root:
            if Direction.WEST in sides or Direction.SOUTH in sides:
                raise TemplateGap("origin block has a west or south tree edge")
            tid = {
                frozenset(): "origin_single",
                frozenset({Direction.NORTH}): "origin_n",
                frozenset({Direction.EAST}): "origin_e",
                frozenset({Direction.NORTH, Direction.EAST}): "origin_ne",
            }[frozenset(sides)]
            rot = 0
        else:
            tid, rot = _match_template(frozenset(sides))
        core_cells = tuple(c for b, c in tour if b == block)
        ring_cells = tuple(c for b, c in walk if b == block)
        roles = {c: "core" for c in core_cells}
        roles.update({c: "perimeter" for c in ring_cells})
        if len(roles) != 16:
            raise TemplateGap(f"block {block} roles cover {len(roles)} cells")
        assignment[block] = SupertileTemplate4(
            block=block,
            template_id=tid,
            rotation=rot,
            roles=roles,
            core_order=core_cells,
            perimeter_order=ring_cells,
        )
    return assignment


def _rep_strength(strength, tau):
    """Simulator-side strength of a source glue: temperature-1 glues all
    act at full strength, otherwise strengths cap at tau."""
    if tau == 1:
        return 2
    return min(strength, tau)


def _io_glue(glue, pointing, tau):
    return Glue(f"io~{glue.strength}~{pointing.name[0]}~{glue.label}", _rep_strength(glue.strength, tau))


def _path_glue(kind, glue, d, tau4):
    return Glue(f"{kind}~{glue.strength}~{d.name[0]}~{glue.label}", tau4)


def _direction_between(a, b):
    dx, dy = b[0] - a[0], b[1] - a[1]
    for d in DIRECTIONS:
        if d.value == (dx, dy):
            return d
    raise TemplateGap(f"cells {a} and {b} are not adjacent")


def _global_cell(block, cell):
    return (4 * block[0] + cell[0], 4 * block[1] + cell[1])


def _seed_structure(seed: Assembly, tree: SpanningTree, tau):
    """Side maps, exposure demands, and naming for the seed blocks."""
    tau4 = max(2, tau)
    tour = core_tour(tree)
    walk = perimeter_walk(tree)
    sides = {spot: {} for spot in tour}
    for spot in walk:
        sides[spot] = {}

    def put(spot, d, glue):
        held = sides[spot].setdefault(d, glue)
        if held != glue:
            raise TemplateGap(f"glue clash at {spot} {d.name}")

    for k in range(len(tour) - 1):
        u, v = tour[k], tour[k + 1]
        d = _direction_between(_global_cell(*u), _global_cell(*v))
        g = Glue(f"c4~{k}", tau4)
        put(u, d, g)
        put(v, d.opposite, g)

    # the perimeter walk hangs off the core path's final tile
    yellow = walk[0]
    g = Glue("prm~start", tau4)
    put(tour[-1], Direction.WEST, g)
    put(yellow, Direction.EAST, g)

    p = Glue("p", 1)
    for k in range(1, len(walk)):
        prev, cur = walk[k - 1], walk[k]
        d = _direction_between(_global_cell(*prev), _global_cell(*cur))
        (bx, by), cell = cur
        if cell in CORNERS:
            g = Glue(f"crn~{bx}~{by}~{cell[0]}~{cell[1]}", tau4)
            put(prev, d, g)
            put(cur, d.opposite, g)
        else:
            put(prev, d, p)
            put(cur, d.opposite, p)
    # every non-corner ring cell except the first (already bound at full
    # strength to the core path's last tile) leans on its backing core tile
    for cur in walk[1:]:
        (bx, by), cell = cur
        if cell in CORNERS:
            continue
        core = SUPPORT_CORE[cell]
        d = _direction_between(core, cell)
        g = Glue(f"sup~{bx}~{by}~{cell[0]}~{cell[1]}", tau4 - 1)
        put(((bx, by), core), d, g)
        put(cur, d.opposite, g)

    demands = set()
    for block in tree.vertices():
        tile = seed.at(block)
        for d in DIRECTIONS:
            if d.step(block) in seed:
                continue
            glue = tile.side(d)
            if glue.is_null:
                continue
            demands.add((glue, d))
            kind = "m1" if d in (Direction.EAST, Direction.NORTH) else "m2"
            put((block, EXPOSURE_CELL[d]), d, _path_glue(kind, glue, d, tau4))
    return sides, demands


def emit_seed_tiles4(seed: Assembly, assignment: dict, tau: int = 2):
    """One uniquely-named tile per cell of every seed block."""
    tree = spanning_tree(seed)
    sides, _ = _seed_structure(seed, tree, tau)
    return [t for _, t in _instantiate_seed_tiles(sides)]


def _instantiate_seed_tiles(sides):
    out = []
    for (block, cell) in sorted(sides):
        glues = sides[(block, cell)]
        name = f"s4~{block[0]}~{block[1]}~{cell[0]}~{cell[1]}"
        out.append(
            (
                (block, cell),
                TileType(
                    name,
                    north=glues.get(Direction.NORTH, NULL_GLUE),
                    east=glues.get(Direction.EAST, NULL_GLUE),
                    south=glues.get(Direction.SOUTH, NULL_GLUE),
                    west=glues.get(Direction.WEST, NULL_GLUE),
                ),
            )
        )
    return out


@dataclass(frozen=True)
class MinimalGlueSet:
    entries: tuple  # ((Direction, Glue), ...) sorted by direction name

    @property
    def directions(self):
        return frozenset(d for d, _ in self.entries)


def minimal_glue_sets(t: TileType, tau: int):
    """Inclusion-minimal side subsets whose capped strengths reach tau."""
    present = [
        (d, t.side(d)) for d in DIRECTIONS if not t.side(d).is_null
    ]
    qualifying = []
    for mask in range(1, 1 << len(present)):
        chosen = [present[i] for i in range(len(present)) if mask >> i & 1]
        if sum(min(g.strength, tau) for _, g in chosen) >= tau:
            qualifying.append(frozenset(d for d, _ in chosen))
    minimal = [
        s for s in qualifying if not any(q < s for q in qualifying)
    ]
    out = []
    for s in sorted(minimal, key=lambda s: sorted(d.name for d in s)):
        entries = tuple(
            sorted(((d, t.side(d)) for d in s), key=lambda e: e[0].name)
        )
        out.append(MinimalGlueSet(entries=entries))
    return out


@dataclass(frozen=True)
class IOVariant:
    tile: TileType  # directional-glue version
    base: TileType
    inputs: frozenset  # input Directions


def _io_expansion(tiles, tau):
    out = []
    for base in sorted(tiles, key=lambda t: t.name):
        for k, mset in enumerate(minimal_glue_sets(base, tau)):
            glues = {}
            for d in DIRECTIONS:
                g = base.side(d)
                if g.is_null:
                    continue
                pointing = d.opposite if d in mset.directions else d
                glues[d] = _io_glue(g, pointing, tau)
            out.append(
                IOVariant(
                    tile=TileType(
                        f"{base.name}~v{k}",
                        north=glues.get(Direction.NORTH, NULL_GLUE),
                        east=glues.get(Direction.EAST, NULL_GLUE),
                        south=glues.get(Direction.SOUTH, NULL_GLUE),
                        west=glues.get(Direction.WEST, NULL_GLUE),
                    ),
                    base=base,
                    inputs=mset.directions,
                )
            )
    return out


def expand_io(tiles, tau: int):
    """Directional-glue variants, one per minimal glue set per tile.

    Input sides carry their glue pointing inward (the label names the
    travel direction), remaining glued sides point outward; matching pairs
    are always one of each, so nothing assembled from these can rebuild
    seed-structure tiles outside the seed."""
    return [v.tile for v in _io_expansion(tiles, tau)]


def _parse_io(label):
    kind, strength, pointing, base = label.split("~", 3)
    d = {"N": Direction.NORTH, "E": Direction.EAST, "S": Direction.SOUTH, "W": Direction.WEST}[pointing]
    return kind, int(strength), d, base


def _variant_io_sides(tile: TileType):
    """(inputs, outputs) as {Direction: source Glue} read off the labels."""
    ins, outs = {}, {}
    for d in DIRECTIONS:
        g = tile.side(d)
        if g.is_null:
            continue
        kind, strength, pointing, base = _parse_io(g.label)
        source = Glue(base, strength)
        if pointing == d:
            outs[d] = source
        elif pointing == d.opposite:
            ins[d] = source
        else:
            raise TemplateGap(f"glue {g.label} is sideways on {d.name}")
    return ins, outs


def emit_supertile_tiles4(tio, tau: int = 2, extra_demands=frozenset()):
    """Classifier tiles plus the shared arrival paths they rely on.

    Per variant: the tile that claims the block's classifier cell, its
    input sides kept at arrival strength and its output sides re-glued at
    full strength to launch a three-stage path toward the neighbouring
    classifier cell.  Paths are shared per (glue, direction).  North paths
    carry a corner-fill hanging east of their second stage and west paths
    one hanging north of their third, covering the two ring corners an
    intruding path can orphan; the second stage of an east path and the
    third of a south path carry the rescue `p` their ring successor needs.
    """
    tau4 = max(2, tau)
    c_tiles = []
    demands = set(extra_demands)
    for tile in tio:
        ins, outs = _variant_io_sides(tile)
        glues = {}
        for d, g in ins.items():
            glues[d] = tile.side(d)
        for d, g in outs.items():
            glues[d] = _path_glue("go", g, d, tau4)
            demands.add((g, d))
        c_tiles.append(
            TileType(
                f"C~{tile.name}",
                north=glues.get(Direction.NORTH, NULL_GLUE),
                east=glues.get(Direction.EAST, NULL_GLUE),
                south=glues.get(Direction.SOUTH, NULL_GLUE),
                west=glues.get(Direction.WEST, NULL_GLUE),
            )
        )
    p = Glue("p", 1)
    path_tiles = []
    for glue, d in sorted(
        demands, key=lambda item: (item[0].label, item[0].strength, item[1].name)
    ):
        go = _path_glue("go", glue, d, tau4)
        m1 = _path_glue("m1", glue, d, tau4)
        m2 = _path_glue("m2", glue, d, tau4)
        arrive = _io_glue(glue, d, tau)
        tag = f"{d.name[0]}~{glue.strength}~{glue.label}"
        stage1 = {d.opposite: go, d: m1}
        stage2 = {d.opposite: m1, d: m2}
        stage3 = {d.opposite: m2, d: arrive}
        cf = None
        if d is Direction.NORTH:
            bind = _path_glue("cf", glue, d, tau4)
            stage2[Direction.EAST] = bind
            cf = {Direction.WEST: bind, Direction.NORTH: p}
        if d is Direction.WEST:
            bind = _path_glue("cf", glue, d, tau4)
            stage3[Direction.NORTH] = bind
            cf = {Direction.SOUTH: bind, Direction.WEST: p}
        if d is Direction.EAST:
            stage2[Direction.SOUTH] = p
        if d is Direction.SOUTH:
            stage3[Direction.WEST] = p

        def build(name, spec):
            return TileType(
                name,
                north=spec.get(Direction.NORTH, NULL_GLUE),
                east=spec.get(Direction.EAST, NULL_GLUE),
                south=spec.get(Direction.SOUTH, NULL_GLUE),
                west=spec.get(Direction.WEST, NULL_GLUE),
            )

        path_tiles.append(build(f"f1~{tag}", stage1))
        path_tiles.append(build(f"f2~{tag}", stage2))
        path_tiles.append(build(f"f3~{tag}", stage3))
        if cf is not None:
            path_tiles.append(build(f"cf~{tag}", cf))
    return c_tiles + path_tiles


def tile_bound4(s_count: int, g_count: int, t_count: int) -> int:
    return 28 * s_count + 16 * g_count + 6 * t_count


@dataclass(frozen=True)
class GeneratedSystem:
    system: TileSystem
    classifier: TableClassifier
    stats: dict
    provenance: dict  # tile -> (source description, role)
    declared_cheating_fuzz: frozenset


def simulation_instance(source: TileSystem, generated: GeneratedSystem) -> SimulationInstance:
    return SimulationInstance(
        simulated=source,
        simulator=generated.system,
        m=generated.stats["m"],
        classifier=generated.classifier,
        declared_cheating_fuzz=generated.declared_cheating_fuzz,
    )


def transform_scale4(s: TileSystem) -> GeneratedSystem:
    """The whole compilation: seed structure, IO expansion, paths, and the
    block classifier, with the emitted count checked against the bound."""
    tau = s.temperature
    tau4 = max(2, tau)
    tree = spanning_tree(s.seed)
    assignment = assign_templates4(tree)
    sides, exposure_demands = _seed_structure(s.seed, tree, tau)
    placed = _instantiate_seed_tiles(sides)

    variants = _io_expansion(s.tiles, tau)
    others = emit_supertile_tiles4(
        [v.tile for v in variants], tau, extra_demands=exposure_demands
    )

    entries = []
    provenance = {}
    for (block, cell), tile in placed:
        entries.append(((cell, tile), s.seed.at(block)))
        role = assignment[block].roles[cell]
        provenance[tile] = (f"seed block {block}", role)
    c_by_name = {f"C~{v.tile.name}": v for v in variants}
    for tile in others:
        v = c_by_name.get(tile.name)
        if v is not None:
            entries.append(((C_CELL, tile), v.base))
            provenance[tile] = (f"tile {v.base.name}", "classifier")
        else:
            provenance[tile] = (tile.name.split("~", 1)[1], "arrival path")
    classifier = TableClassifier.from_entries(4, entries)

    seed_tiles = [t for _, t in placed]
    all_tiles = seed_tiles + others
    root_cell = _global_cell(tree.root, CORE_CCW[0])
    seed_tile = dict(placed)[(tree.root, CORE_CCW[0])]
    system = TileSystem(
        tiles=frozenset(all_tiles),
        seed=Assembly({root_cell: seed_tile}),
        temperature=tau4,
        name=f"{s.name}~s4" if s.name else "s4",
    )

    glue_pool = set()
    for t in set(s.tiles) | {s.seed.at(loc) for loc in s.seed.locations()}:
        for d in DIRECTIONS:
            g = t.side(d)
            if not g.is_null:
                glue_pool.add((g.label, g.strength))
    stats = {
        "m": 4,
        "s": len(s.seed),
        "t": len(s.tiles),
        "g": len(glue_pool),
        "emitted": len(all_tiles),
        "bound": tile_bound4(len(s.seed), len(glue_pool), len(s.tiles)),
    }
    if stats["emitted"] > stats["bound"]:
        raise TemplateGap(
            f"emitted {stats['emitted']} tiles, over the bound {stats['bound']}"
        )
    return GeneratedSystem(
        system=system,
        classifier=classifier,
        stats=stats,
        provenance=provenance,
        declared_cheating_fuzz=frozenset(),
    )
