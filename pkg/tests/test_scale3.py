"""Scale-3 compiler: corridor plans, crossing templates, boundary walks,
and end-to-end audits.

Layouts for one- and two-block seeds are hand-derived from the block
geometry (core chain entering at the block's southwest corner, centre
cell always on the chain, boundary walk grown outward from its root) and
frozen here; larger seeds are checked structurally and by replaying the
designed placement order tile by tile.
"""

import pytest
from hypothesis import given, settings

from tileforge.core import (
    Assembly,
    DIRECTIONS,
    Direction,
    Glue,
    TileSystem,
    TileType,
    attachment_strength,
    enumerate_producible,
)
from tileforge.scale3 import (
    C_CELL3,
    assign_templates3,
    combine_noncyclic,
    emit_seed_tiles3,
    plan_edge_removal,
    spanning_tree3,
    tile_bound3,
    transform_scale3,
)
from tileforge.scale4 import simulation_instance
from tileforge.analysis import detect_regions
from tileforge.simrel import (
    FuzzClass,
    check_seed_first,
    classify_fuzz,
    represent,
)

from strategies import connected_random_assemblies


def _blob(*locs):
    t = TileType("blob")
    return Assembly({loc: t for loc in locs})


def _global3(block, cell):
    return (3 * block[0] + cell[0], 3 * block[1] + cell[1])


def _adjacent(a, b):
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1


def _reglue(seed):
    """Promote an assembly of identical tiles into a stable system by
    regluing neighbours pairwise with unique full-strength bonds."""
    cells = sorted(seed.locations())
    bond = {}
    for loc in cells:
        for d in (Direction.NORTH, Direction.EAST):
            nb = d.step(loc)
            if nb in seed:
                bond[(loc, d)] = Glue(f"b~{loc[0]}~{loc[1]}~{d.name[0]}", 2)
    tiles = {}
    for loc in cells:
        glues = {}
        for d in DIRECTIONS:
            nb = d.step(loc)
            if nb not in seed:
                continue
            key = (loc, d) if d in (Direction.NORTH, Direction.EAST) else (nb, d.opposite)
            glues[d.name.lower()] = bond[key]
        tiles[loc] = TileType(f"s~{loc[0]}~{loc[1]}", **glues)
    return TileSystem(list(tiles.values()), Assembly(tiles), 2, name="reglued")


def _plan(seed):
    return plan_edge_removal(seed, combine_noncyclic(seed, detect_regions(seed)))


def _assignment(system):
    plan = _plan(system.seed)
    tree = spanning_tree3(system.seed, plan.removed_edges)
    return tree, assign_templates3(system.seed, tree, plan, system=system)


def _tour(assignment):
    origin = next(b for b, t in assignment.items() if t.parent_dir is None)
    cells = []

    def walk(b):
        t = assignment[b]
        pieces = iter(t.pieces)
        cells.extend(_global3(b, c) for c in next(pieces))
        for d in t.child_dirs:
            walk(d.step(b))
            cells.extend(_global3(b, c) for c in next(pieces))

    walk(origin)
    return cells


def _replay(source):
    """Place the designed structure one tile at a time and return the
    generated output plus the completed structure assembly."""
    out = transform_scale3(source)
    tree, assignment = _assignment(source)
    by_cell = {
        _global3(b, loc): t
        for (b, loc), t in emit_seed_tiles3(source.seed, assignment, source.temperature)
    }
    order = list(_tour(assignment))
    origin = tree.root
    order += [n.cell for n in assignment[origin].perimeter]
    assert len(order) == len(by_cell)
    assert len(set(order)) == len(order)
    tau = out.system.temperature
    cur = {order[0]: by_cell[order[0]]}
    for cell in order[1:]:
        strength = attachment_strength(out.system, Assembly(cur), cell, by_cell[cell])
        assert strength >= tau, (cell, strength)
        cur[cell] = by_cell[cell]
    return out, Assembly(cur)


def _audit_fuzz(inst, assemblies, declared):
    for a in assemblies:
        _, per = classify_fuzz(inst, a)
        for block, cls in per.items():
            assert cls is not FuzzClass.DIAGONAL, (a, block)
            if cls is FuzzClass.CHEATING:
                for (x, y) in a.locations():
                    if (x // 3, y // 3) != block:
                        continue
                    off = (x - 3 * block[0], y - 3 * block[1])
                    assert (block, off) in declared, (block, off)


RING = [(i, j) for i in range(3) for j in range(3) if (i, j) != (1, 1)]


def _ring_system(inward=False):
    g = Glue("g", 2)
    tiles = {}
    for (i, j) in RING:
        sides = {}
        for d in DIRECTIONS:
            if d.step((i, j)) in RING:
                sides[d.name.lower()] = g
        if inward and (i, j) == (0, 1):
            sides["east"] = Glue("inw", 2)
        tiles[(i, j)] = TileType(f"R{i}{j}", **sides)
    return TileSystem(list(tiles.values()), Assembly(tiles), 2, name="ring")


class TestRegionPlan:
    def test_solid_blob_needs_no_removal(self):
        plan = _plan(_blob((0, 0), (1, 0), (0, 1), (1, 1)))
        assert plan.removed_edges == frozenset()
        assert plan.M == frozenset()

    def test_ring_removes_one_edge(self):
        plan = _plan(_blob(*RING))
        assert plan.removed_edges == frozenset({((0, 2), (1, 2))})
        assert plan.M == frozenset({(1, 2)})


class TestSpanningTree3:
    def test_pair(self):
        tree = spanning_tree3(_blob((0, 0), (1, 0)))
        assert tree.root == (0, 0)
        assert tree.parent == {(1, 0): (0, 0)}

    def test_cross_probe_order(self):
        tree = spanning_tree3(_blob((0, 0), (0, 1), (1, 1), (-1, 1), (0, 2)))
        assert tree.children((0, 1)) == [(0, 2), (1, 1), (-1, 1)]

    def test_ring_respects_removed_edge(self):
        plan = _plan(_blob(*RING))
        tree = spanning_tree3(_blob(*RING), plan.removed_edges)
        assert tree.parent == {
            (0, 1): (0, 0),
            (0, 2): (0, 1),
            (1, 0): (0, 0),
            (2, 0): (1, 0),
            (2, 1): (2, 0),
            (2, 2): (2, 1),
            (1, 2): (2, 2),
        }


class TestTemplates3:
    def test_horizontal_domino(self):
        x = Glue("x", 2)
        a, b = TileType("A", east=x), TileType("B", west=x)
        src = TileSystem([a, b], Assembly({(0, 0): a, (1, 0): b}), 2)
        _, asg = _assignment(src)
        assert (asg[(0, 0)].template_id, asg[(0, 0)].rotation) == ("origin_e", 0)
        assert (asg[(1, 0)].template_id, asg[(1, 0)].rotation) == ("a", 0)
        assert asg[(0, 0)].pieces == (
            ((0, 0), (0, 1), (0, 2), (1, 2), (2, 2), (2, 1)),
            ((2, 0), (1, 0), (1, 1)),
        )
        assert asg[(0, 0)].end_cell == (1, 1)

    def test_vertical_domino(self):
        x = Glue("x", 2)
        a, b = TileType("A", north=x), TileType("B", south=x)
        src = TileSystem([a, b], Assembly({(0, 0): a, (0, 1): b}), 2)
        _, asg = _assignment(src)
        assert (asg[(0, 0)].template_id, asg[(0, 0)].rotation) == ("origin_n", 0)
        assert (asg[(0, 1)].template_id, asg[(0, 1)].rotation) == ("a", 270)

    def test_single_block_walk_rings_the_seed(self):
        k = Glue("k", 2)
        t = TileType("X", north=k, east=k, south=k, west=k)
        src = TileSystem([t], Assembly({(0, 0): t}), 2)
        tree, asg = _assignment(src)
        tpl = asg[(0, 0)]
        assert tpl.template_id == "origin_single"
        assert tpl.pieces == (((0, 0), (0, 1), (1, 1)),)
        walk = [n.cell for n in tpl.perimeter]
        assert walk == [
            (1, 0), (1, -1), (2, 0), (3, 0), (3, 1), (3, 2), (2, 2),
            (2, 3), (1, 3), (0, 3), (0, 2), (-1, 2), (-1, 1),
        ]
        arrivals = [(n.cell, n.io_dir) for n in tpl.perimeter if n.io_dir]
        assert arrivals == [
            ((1, -1), Direction.SOUTH),
            ((3, 1), Direction.EAST),
            ((1, 3), Direction.NORTH),
            ((-1, 1), Direction.WEST),
        ]

    def test_east_exposure_walks_east_only(self):
        k = Glue("k", 2)
        src = TileSystem(
            [TileType("X", east=k), TileType("Y", west=k)],
            Assembly({(0, 0): TileType("X", east=k)}),
            2,
        )
        _, asg = _assignment(src)
        walk = [n.cell for n in asg[(0, 0)].perimeter]
        assert walk == [(1, 0), (2, 0), (2, 1), (3, 1)]
        (arrival,) = [n for n in asg[(0, 0)].perimeter if n.io_dir]
        assert (arrival.cell, arrival.io_dir) == ((3, 1), Direction.EAST)

    def test_bent_seed(self):
        v2, h2, e2, n1 = Glue("v", 2), Glue("h", 2), Glue("e", 2), Glue("n", 1)
        src = TileSystem(
            [
                TileType("T00", north=v2, east=e2),
                TileType("T01", south=v2, east=h2),
                TileType("T11", west=h2),
                TileType("V", west=e2, north=n1),
            ],
            Assembly({
                (0, 0): TileType("T00", north=v2, east=e2),
                (0, 1): TileType("T01", south=v2, east=h2),
                (1, 1): TileType("T11", west=h2),
            }),
            2,
        )
        _, asg = _assignment(src)
        ids = {b: (t.template_id, t.rotation) for b, t in asg.items()}
        assert ids == {
            (0, 0): ("origin_n", 0),
            (0, 1): ("d", 270),
            (1, 1): ("a", 0),
        }
        walk = [n.cell for n in asg[(0, 0)].perimeter]
        assert walk == [(1, 0), (2, 0), (2, 1), (3, 1)]

    def test_ring_layout(self):
        src = _ring_system()
        _, asg = _assignment(src)
        ids = {b: (t.template_id, t.rotation) for b, t in sorted(asg.items())}
        assert ids == {
            (0, 0): ("origin_ne", 0),
            (0, 1): ("b", 270),
            (0, 2): ("a", 270),
            (1, 0): ("b", 0),
            (1, 2): ("a", 180),
            (2, 0): ("c", 0),
            (2, 1): ("b", 270),
            (2, 2): ("c", 270),
        }
        m_templates = [t for t in asg.values() if t.m_block]
        assert len(m_templates) == 1
        assert m_templates[0].block == (1, 2)
        assert m_templates[0].roles[(0, 0)] == "corridor"

    def test_dense_crossings_fall_back_to_one_path(self):
        # a centre block with four tree edges cannot host the per-block
        # pieces, so the whole core becomes one snake
        src = _reglue(_blob((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)))
        tree, asg = _assignment(src)
        assert {t.template_id for t in asg.values()} == {"free"}
        origin = tree.root
        (path,) = asg[origin].pieces
        assert len(path) == 21
        for b in asg:
            assert asg[b].roles[C_CELL3] == "core"

    @settings(max_examples=25, deadline=None)
    @given(connected_random_assemblies(max_tiles=9))
    def test_tour_structure(self, seed):
        plan = _plan(seed)
        tree = spanning_tree3(seed, plan.removed_edges)
        asg = assign_templates3(seed, tree, plan)
        tour = _tour(asg)
        assert tour[0] == _global3(tree.root, (0, 0))
        assert len(set(tour)) == len(tour)
        assert all(_adjacent(a, b) for a, b in zip(tour, tour[1:]))
        centres = [c for c in tour if c in {_global3(b, C_CELL3) for b in asg}]
        assert len(centres) == len(asg)
        for b, t in asg.items():
            assert t.roles[C_CELL3] == "core"
        if all(t.template_id != "free" for t in asg.values()):
            # visits-and-returns: one run through a block per piece
            runs = {}
            prev = None
            for cell in tour:
                b = (cell[0] // 3, cell[1] // 3)
                if b != prev:
                    runs[b] = runs.get(b, 0) + 1
                prev = b
            for b, t in asg.items():
                assert runs[b] == len(t.pieces)


class TestSeedStructure3:
    def test_chain_glues_count_and_names(self):
        x = Glue("x", 2)
        a, b = TileType("A", east=x), TileType("B", west=x)
        src = TileSystem([a, b], Assembly({(0, 0): a, (1, 0): b}), 2)
        _, asg = _assignment(src)
        placed = emit_seed_tiles3(src.seed, asg, 2)
        assert len(placed) == 13
        names = {t.name for _, t in placed}
        assert len(names) == 13
        assert all(n.startswith("s3~") for n in names)
        chain = {
            g.label
            for _, t in placed
            for _, g in t.sides()
            if not g.is_null and g.label.startswith("c3~")
        }
        assert chain == {f"c3~{i}" for i in range(12)}

    def test_walk_glues_and_arrival(self):
        p = TileType("P", north=Glue("q", 2))
        q = TileType("Q", south=Glue("q", 2))
        src = TileSystem([p, q], Assembly({(0, 0): p}), 2)
        tree, asg = _assignment(src)
        walk = [n.cell for n in asg[tree.root].perimeter]
        assert walk == [(1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (1, 3)]
        placed = emit_seed_tiles3(src.seed, asg, 2)
        labels = [
            g.label
            for _, t in placed
            for _, g in t.sides()
            if not g.is_null
        ]
        assert labels.count("prm~0") == 2  # one glue, two facing sides
        assert sum(1 for l in set(labels) if l.startswith("pr~")) == 5
        presenters = [
            t
            for _, t in placed
            if any(g.label.startswith("io~") for _, g in t.sides() if not g.is_null)
        ]
        assert len(presenters) == 1


class TestBound3:
    def test_examples(self):
        assert tile_bound3(1, 0, 1) == 26
        assert tile_bound3(0, 0, 0) == 0
        assert tile_bound3(4, 2, 3) == 130


class TestTransform3:
    def test_inert_domino_terminalizes_to_seed_image(self):
        x = Glue("x", 2)
        a, b = TileType("A", east=x), TileType("B", west=x)
        source = TileSystem([a, b], Assembly({(0, 0): a, (1, 0): b}), 2, name="domino")
        out = transform_scale3(source)
        assert out.stats == {
            "m": 3, "s": 2, "t": 2, "g": 1, "emitted": 15, "bound": 68,
        }
        assert out.declared_cheating_fuzz == frozenset()
        assert len(out.system.seed) == 1
        rep = enumerate_producible(out.system, max_tiles=64, max_states=50_000)
        assert rep.complete
        assert len(rep.terminal) == 1
        term = next(iter(rep.terminal))
        assert len(term) == 13
        inst = simulation_instance(source, out)
        assert represent(inst, term) == source.seed
        assert bool(check_seed_first(inst, 4, 40))

    def test_growth_crosses_the_boundary(self):
        k = Glue("k", 2)
        x, y = TileType("X", east=k), TileType("Y", west=k)
        source = TileSystem([x, y], Assembly({(0, 0): x}), 2, name="beam")
        out = transform_scale3(source)
        rep = enumerate_producible(out.system, max_tiles=15, max_states=50_000)
        assert rep.complete
        inst = simulation_instance(source, out)
        term = max(rep.terminal, key=len)
        img = represent(inst, term)
        assert img == Assembly({(0, 0): x, (1, 0): y})
        v = check_seed_first(inst, 3, 15)
        assert bool(v), v

    def test_unfaced_walk_cells_are_declared(self):
        src = _ring_system(inward=True)
        out = transform_scale3(src)
        assert out.stats["emitted"] == 91
        assert out.stats["bound"] == 240
        # the cavity arrival is reachable only around the seed's west rim,
        # through blocks no seed glue faces
        assert sorted(out.declared_cheating_fuzz) == [
            ((-1, 0), (2, 2)),
            ((-1, 1), (2, 0)),
            ((-1, 1), (2, 1)),
            ((-1, 1), (2, 2)),
            ((-1, 2), (2, 0)),
            ((-1, 2), (2, 1)),
            ((-1, 2), (2, 2)),
        ]
        rep = enumerate_producible(out.system, max_tiles=66, max_states=50_000)
        assert rep.complete
        inst = simulation_instance(src, out)
        _audit_fuzz(inst, rep.assemblies, out.declared_cheating_fuzz)
        assert bool(check_seed_first(inst, 9, 66))

    def test_faced_walk_declares_nothing(self):
        p = TileType("P", north=Glue("q", 2))
        q = TileType("Q", south=Glue("q", 2))
        source = TileSystem([p, q], Assembly({(0, 0): p}), 2, name="north")
        out = transform_scale3(source)
        assert out.declared_cheating_fuzz == frozenset()
        rep = enumerate_producible(out.system, max_tiles=13, max_states=50_000)
        assert rep.complete
        inst = simulation_instance(source, out)
        _audit_fuzz(inst, rep.assemblies, out.declared_cheating_fuzz)
        assert bool(check_seed_first(inst, 2, 13))

    def test_ring_seed_completes(self):
        src = _ring_system()
        out = transform_scale3(src)
        assert out.stats["emitted"] == 71
        rep = enumerate_producible(out.system, max_tiles=120, max_states=50_000)
        assert rep.complete and len(rep.terminal) == 1
        inst = simulation_instance(src, out)
        assert represent(inst, next(iter(rep.terminal))) == src.seed
        assert bool(check_seed_first(inst, 9, 120))

    def test_free_snake_end_to_end(self):
        src = _reglue(_blob((0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)))
        out, structure = _replay(src)
        assert out.stats["emitted"] <= out.stats["bound"]
        rep = enumerate_producible(out.system, max_tiles=30, max_states=50_000)
        assert rep.complete and len(rep.terminal) == 1
        assert next(iter(rep.terminal)) == structure
        inst = simulation_instance(src, out)
        assert represent(inst, structure) == src.seed
        assert bool(check_seed_first(inst, 6, 30))

    def test_provenance_and_classifier_shape(self):
        src = _ring_system(inward=True)
        out = transform_scale3(src)
        roles = {role for _, role in out.provenance.values()}
        assert {"core", "boundary", "classifier", "arrival path"} <= roles
        assert out.classifier.m == 3

    @settings(max_examples=15, deadline=None)
    @given(connected_random_assemblies(max_tiles=8))
    def test_random_seeds_replay_within_budget(self, seed):
        source = _reglue(seed)
        out, structure = _replay(source)
        assert out.stats["emitted"] <= out.stats["bound"]
        assert len(out.system.seed) == 1
        inst = simulation_instance(source, out)
        img = represent(inst, structure)
        assert img == source.seed
