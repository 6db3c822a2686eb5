"""Compile any tile system into a single-tile-seed system at scale 3.

Each seed tile becomes a 3x3 block.  A single chain of uniquely-glued
tiles (the core path) starts at the new seed tile in the origin block's
southwest cell and threads every block along a spanning tree of the seed:
it crosses into a child through the middle cells of the shared side and
returns through a corner pair, covers every block's centre cell on the
way, and ends back in the origin block.  Corner pairs are picked per tree
edge by a small constraint solver, since the corners a block can spare
depend on which of its sides carry crossings.

After the core path ends, a second tree of uniquely-glued tiles (the
boundary walk) hangs off the final core tile and runs along block corner
cells, which no classifier or arrival tile can ever occupy.  Its leaves
sit next to the centre cells of blocks that face an outward seed glue and
present that glue's arrival directly, so growth outside the seed starts
only once the whole seed structure is in place.  Boundary cells in blocks
no seed glue points into are declared as tolerated cheating fuzz.

A cavity in the seed's complement would be sealed off from the boundary
walk, so the compiler first deletes seed adjacencies along a vertical
chain of blocks above the cavity: the spanning tree then never crosses
those boundaries, the freed west columns of the chain blocks stay clear
of core cells, and the walk descends through them into the cavity.
Cavities pinched off only by diagonally-touching seed tiles instead merge
with the neighbouring region and are entered through the pinch corner.

Tiles outside the seed structure are one classifier tile per minimal glue
set of each source tile at the block centre, plus shared two-stage paths
per (glue, direction) that carry a glue's arrival into the neighbouring
block's centre-adjacent cell.  Arrival strengths mirror the source glue,
as at scale 4, and the two machineries never compete for a cell: centre
crosses belong to classification, corners to the seed structure.
"""

import heapq
from dataclasses import dataclass
from itertools import islice
from typing import Optional

from tileforge.analysis import RegionReport, detect_regions
from tileforge.core import (
    Assembly,
    DIRECTIONS,
    Direction,
    Glue,
    NULL_GLUE,
    TileSystem,
    TileType,
    interaction_strength,
)
from tileforge.scale4 import (
    GeneratedSystem,
    MalformedSeed,
    SpanningTree,
    TemplateGap,
    _direction_between,
    _io_expansion,
    _io_glue,
    _path_glue,
    origin_location,
    _variant_io_sides,
)
from tileforge.simrel import TableClassifier

C_CELL3 = (1, 1)
CORNERS3 = frozenset({(0, 0), (2, 0), (0, 2), (2, 2)})
MIDDLE_OF = {
    Direction.SOUTH: (1, 0),
    Direction.EAST: (2, 1),
    Direction.NORTH: (1, 2),
    Direction.WEST: (0, 1),
}
MIDDLE_DIR = {cell: d for d, cell in MIDDLE_OF.items()}
# per-side (low, high) crossing corners; one shared pick per tree edge
# keeps the two claimed cells adjacent across the block boundary
CLAIM = {
    Direction.SOUTH: ((0, 0), (2, 0)),
    Direction.EAST: ((2, 0), (2, 2)),
    Direction.NORTH: ((0, 2), (2, 2)),
    Direction.WEST: ((0, 0), (0, 2)),
}
# counter-clockwise successor; probe and visit order start after the
# parent direction, so the origin (parent treated as west) probes S,E,N,W
RHO = {
    Direction.WEST: Direction.SOUTH,
    Direction.SOUTH: Direction.EAST,
    Direction.EAST: Direction.NORTH,
    Direction.NORTH: Direction.WEST,
}
CORRIDOR = ((0, 0), (0, 1), (0, 2))

_END_PREFERENCE = (C_CELL3, (1, 0), (0, 1), (2, 1), (1, 2))
_ROOT_PREFERENCE = ((1, 0), (0, 1), (2, 1), (1, 2))


def _glob(block, cell):
    return (3 * block[0] + cell[0], 3 * block[1] + cell[1])


def _split(cell):
    b = (cell[0] // 3, cell[1] // 3)
    return b, (cell[0] - 3 * b[0], cell[1] - 3 * b[1])


def _ccw_order(parent_dir):
    a = RHO[parent_dir]
    b = RHO[a]
    c = RHO[b]
    return (a, b, c, parent_dir)


def _norm_edge(a, b):
    return tuple(sorted((a, b)))


def combine_noncyclic(seed: Assembly, regions: RegionReport) -> RegionReport:
    """Merge every non-cyclic cavity with the region across its pinch.

    A pinch is a diagonally-touching seed pair whose two shared orthogonal
    neighbours lie in different regions; the boundary walk can slip
    through the seed corner cell between them, so the two regions count
    as one.  Merging into free space drops the cavity; merging two
    cavities leaves a non-cyclic union.  Repeats to a fixed point.
    """
    sigma = frozenset(seed.locations())
    cavities = [set(c) for c in regions.cavities]
    classes = list(regions.cavity_class)
    free = set(regions.free_space)

    def pinch_partner(cav):
        for p in sorted(sigma):
            for dq in ((1, 1), (1, -1)):
                q = (p[0] + dq[0], p[1] + dq[1])
                if q not in sigma:
                    continue
                commons = ((p[0] + dq[0], p[1]), (p[0], p[1] + dq[1]))
                for a, b in (commons, commons[::-1]):
                    if a not in cav or b in cav:
                        continue
                    if b in free:
                        return ("free", None)
                    for j, other in enumerate(cavities):
                        if b in other and other is not cav:
                            return ("cavity", j)
        return None

    changed = True
    while changed:
        changed = False
        for i in range(len(cavities)):
            if classes[i] != "non-cyclic":
                continue
            hit = pinch_partner(cavities[i])
            if hit is None:
                continue
            kind, j = hit
            if kind == "free":
                free |= cavities[i]
                del cavities[i], classes[i]
            else:
                cavities[i] |= cavities[j]
                classes[i] = "non-cyclic"
                del cavities[j], classes[j]
            changed = True
            break

    order = sorted(range(len(cavities)), key=lambda k: min(cavities[k]))
    return RegionReport(
        cavities=tuple(frozenset(cavities[k]) for k in order),
        free_space=frozenset(free),
        cavity_class=tuple(classes[k] for k in order),
        window=regions.window,
    )


@dataclass(frozen=True)
class EdgeRemovalPlan:
    """Seed adjacencies the spanning tree must not use, the blocks whose
    west columns become corridor, and which cavities got merged when a
    corridor ran into another region on the way up."""

    removed_edges: frozenset  # of ((west block), (east block)) pairs
    M: frozenset  # east endpoint of every removed edge
    merge_log: tuple


def plan_edge_removal(seed: Assembly, regions: RegionReport) -> EdgeRemovalPlan:
    """One vertical chain of removed west-east adjacencies per cavity.

    Starting above the cavity's northwest cell, step north while both the
    block and its west neighbour are seed, removing the adjacency between
    them; the chain stops where the column exits into a non-seed block
    (corridor continues straight up) or the west side opens into another
    region (the corridor is entered sideways).  Running into another
    cavity merges the two and restarts from the union's northwest.
    """
    sigma = frozenset(seed.locations())
    cavities = [set(c) for c in regions.cavities]
    removed = set()
    m_blocks = set()
    log = []

    def region_at(cell):
        for k, cav in enumerate(cavities):
            if cell in cav:
                return k
        return None

    guard = 0
    while cavities:
        guard += 1
        if guard > 4 * (len(sigma) + len(regions.cavities) + 1):
            raise TemplateGap("cavity corridor planning did not settle")
        cavities.sort(key=lambda c: min((-y, x) for (x, y) in c))
        cav = cavities.pop(0)
        i, j = min(cav, key=lambda c: (-c[1], c[0]))
        y = j + 1
        while True:
            cur = (i, y)
            if cur not in sigma:
                k = region_at(cur)
                if k is not None:
                    log.append(("exit-up", (i, j), cur))
                    cavities.append(cav | cavities.pop(k))
                break
            west = (i - 1, y)
            if west not in sigma:
                k = region_at(west)
                if k is not None:
                    log.append(("open-west", (i, j), west))
                    cavities.append(cav | cavities.pop(k))
                break
            removed.add((west, cur))
            m_blocks.add(cur)
            y += 1
    return EdgeRemovalPlan(
        removed_edges=frozenset(removed),
        M=frozenset(m_blocks),
        merge_log=tuple(log),
    )


def spanning_tree3(seed: Assembly, removed_edges=frozenset()) -> SpanningTree:
    """Depth-first tree over the seed minus removed adjacencies, probing
    counter-clockwise from just past the parent direction."""
    root = origin_location(seed)
    removed = {_norm_edge(*e) for e in removed_edges}
    parent = {}
    seen = {root}

    def visit(v, parent_dir):
        for d in _ccw_order(parent_dir):
            u = d.step(v)
            if u in seed and u not in seen and _norm_edge(v, u) not in removed:
                seen.add(u)
                parent[u] = v
                visit(u, d.opposite)

    visit(root, Direction.WEST)
    if len(seen) != len(seed):
        raise MalformedSeed("seed is not connected after edge removal")
    return SpanningTree(root=root, parent=parent)


@dataclass(frozen=True)
class PerimeterNode:
    """One boundary-walk tile: where it sits, which placed tile it hangs
    off, and the arrival glue it presents toward a block centre, if any."""

    cell: tuple  # global
    parent: tuple  # global cell of the tile this one binds to
    io_dir: Optional[Direction] = None
    io_glue: Optional[Glue] = None


@dataclass(frozen=True)
class Scale3Template:
    block: tuple
    template_id: str  # origin_*, a..h, or connector c1..c5
    rotation: int  # degrees counter-clockwise from the reference pose
    m_block: bool
    parent_dir: Optional[Direction]  # None at the origin
    child_dirs: tuple  # children in counter-clockwise visit order
    roles: dict  # cell -> "core" | "corridor" | "boundary" | "open"
    pieces: tuple  # per-visit core cell runs, in visit order
    end_cell: Optional[tuple]  # origin only: where the core path stops
    perimeter: tuple  # origin only: PerimeterNodes in growth order


# reference poses after rotating the parent side to west: letters by the
# child-direction set, connectors by the full side set of a corridor block
_LETTERS = {
    frozenset(): "a",
    frozenset({Direction.EAST}): "b",
    frozenset({Direction.NORTH}): "c",
    frozenset({Direction.SOUTH}): "d",
    frozenset({Direction.NORTH, Direction.EAST}): "e",
    frozenset({Direction.EAST, Direction.SOUTH}): "f",
    frozenset({Direction.NORTH, Direction.SOUTH}): "g",
    frozenset({Direction.NORTH, Direction.EAST, Direction.SOUTH}): "h",
}
_CONNECTORS = {
    frozenset({Direction.EAST}): ("a", 180),
    frozenset({Direction.NORTH}): ("c1", 0),
    frozenset({Direction.SOUTH}): ("c2", 0),
    frozenset({Direction.NORTH, Direction.SOUTH}): ("c3", 0),
    frozenset({Direction.NORTH, Direction.EAST}): ("c4", 0),
    frozenset({Direction.EAST, Direction.SOUTH}): ("c5", 0),
}


def _rotation_to_west(parent_dir):
    k = 0
    d = parent_dir
    while d is not Direction.WEST:
        d = RHO[d]
        k += 1
    return k


def _canon(parent_dir, child_dirs):
    k = _rotation_to_west(parent_dir)
    out = set()
    for c in child_dirs:
        d = c
        for _ in range(k):
            d = RHO[d]
        out.add(d)
    return frozenset(out), 90 * k


def _solve_crossings(edge_list, incident, m_set):
    """Yield corner picks (0 low, 1 high) per tree edge, all distinct
    within each block, corridor columns untouched.  Lexicographic order."""
    n = len(edge_list)
    banned = [[False, False] for _ in range(n)]
    for block, pairs in incident.items():
        if block not in m_set:
            continue
        for idx, d in pairs:
            for pick in (0, 1):
                if CLAIM[d][pick][0] == 0:
                    banned[idx][pick] = True
    conflicts = []  # ((i, pi), (j, pj)) that claim one corner twice
    for block, pairs in incident.items():
        for a in range(len(pairs)):
            for b in range(a + 1, len(pairs)):
                i, di = pairs[a]
                j, dj = pairs[b]
                for pi in (0, 1):
                    for pj in (0, 1):
                        if CLAIM[di][pi] == CLAIM[dj][pj]:
                            conflicts.append(((i, pi), (j, pj)))

    assign = [None] * n

    def ok(idx, pick):
        if banned[idx][pick]:
            return False
        for (i, pi), (j, pj) in conflicts:
            if i == idx and pi == pick and assign[j] == pj:
                return False
            if j == idx and pj == pick and assign[i] == pi:
                return False
        return True

    def solve(idx):
        if idx == n:
            yield tuple(assign)
            return
        for pick in (0, 1):
            if ok(idx, pick):
                assign[idx] = pick
                yield from solve(idx + 1)
                assign[idx] = None

    yield from solve(0)


def _simple_paths(entry, target, allowed, blocked):
    out = []

    def dfs(cur, acc):
        if cur == target:
            out.append(tuple(acc))
            return
        for dx, dy in ((0, -1), (-1, 0), (1, 0), (0, 1)):
            nxt = (cur[0] + dx, cur[1] + dy)
            if nxt in allowed and nxt not in blocked and nxt not in acc:
                acc.append(nxt)
                dfs(nxt, acc)
                acc.pop()

    if entry == target:
        return [(entry,)]
    dfs(entry, [entry])
    return out


def _route_block(piece_specs, m_block):
    """Vertex-disjoint cell runs between consecutive portals, covering the
    centre, preferring routes that leave corner cells free."""
    cells = {(i, j) for i in range(3) for j in range(3)}
    if m_block:
        cells -= set(CORRIDOR)
    portals = [c for pair in piece_specs for c in pair]
    if len(set(portals)) != len(portals):
        return None
    best = [None]
    seen = [0]

    def rec(k, used, acc):
        if seen[0] > 4000:
            return
        if k == len(piece_specs):
            flat = [c for p in acc for c in p]
            if C_CELL3 not in flat:
                return
            seen[0] += 1
            spare = sum(1 for c in flat if c in CORNERS3 and c not in portals)
            key = (spare, tuple(flat))
            if best[0] is None or key < best[0][0]:
                best[0] = (key, tuple(tuple(p) for p in acc))
            return
        entry, exit_ = piece_specs[k]
        future = {c for pair in piece_specs[k + 1:] for c in pair}
        for path in _simple_paths(entry, exit_, cells, used | future):
            rec(k + 1, used | set(path), acc + [path])

    rec(0, set(), [])
    return best[0][1] if best[0] else None


def _has_exposures(seed):
    for b in seed.locations():
        t = seed.at(b)
        for d in DIRECTIONS:
            if d.step(b) not in seed and not t.side(d).is_null:
                return True
    return False


def _growth_reach(system):
    """Source cells any producible assembly could ever occupy, as a sound
    over-approximation.

    Each empty cell is admitted once its sides could jointly bind at
    temperature, letting every side pick its own best-case tile pair, and
    growth that touches the surveyed rim is assumed to wander anywhere
    beyond it.  The result may include unreachable cells but never misses
    a reachable one, so a cell outside it is guaranteed inert.
    """
    seed = system.seed
    tau = system.temperature
    tiles = tuple(system.tiles)
    occupied = frozenset(seed.locations())
    if not tiles:
        return occupied
    xs = sorted(x for x, _ in occupied)
    ys = sorted(y for _, y in occupied)
    x0, x1 = xs[0] - 3, xs[-1] + 3
    y0, y1 = ys[0] - 3, ys[-1] + 3
    box = [
        (x, y)
        for x in range(x0, x1 + 1)
        for y in range(y0, y1 + 1)
        if (x, y) not in occupied
    ]
    rim = {(x, y) for (x, y) in box if x in (x0, x1) or y in (y0, y1)}
    pair = {
        d: max(
            (
                interaction_strength(t.side(d), u.side(d.opposite))
                for t in tiles
                for u in tiles
            ),
            default=0,
        )
        for d in DIRECTIONS
    }

    def against(g, d):
        return max((interaction_strength(t.side(d), g) for t in tiles), default=0)

    reach = set(occupied)
    escaped = False
    changed = True
    while changed:
        changed = False
        if not escaped and any(c in reach for c in rim):
            escaped = True
            changed = True
        for cell in box:
            if cell in reach:
                continue
            total = 0
            for d in DIRECTIONS:
                nb = d.step(cell)
                if nb in occupied:
                    total += against(seed.at(nb).side(d.opposite), d)
                elif nb in reach:
                    total += pair[d]
                elif escaped and not (x0 <= nb[0] <= x1 and y0 <= nb[1] <= y1):
                    total += pair[d]
            if total >= tau:
                reach.add(cell)
                changed = True
    return frozenset(reach)


def _plan_perimeter(seed, core, root_global, end_global, reach, out_dirs=None):
    """Grow the boundary tree from its root toward every arrival cell.

    Cells the walk may use: block corners of the seed and of blocks a seed
    tile faces orthogonally, arrival cells backed by a live seed glue, and
    centre-adjacent cells both of whose flanking blocks are seed or can
    never see growth (``reach`` is the growable-cell over-approximation).
    A centre-adjacent cell is also safe when no tile ever launches growth
    in the direction that would land a relay tile on it, which ``out_dirs``
    narrows when the caller knows the demand directions.
    The last class matters because a centre-adjacent cell next to a block
    that may resolve can be claimed by that block's relay tiles before the
    walk arrives; next to a permanently inert block it cannot.  Arrival
    cells cost extra so they end up as leaves where possible, and cells in
    blocks no seed glue faces cost extra so the declared-fuzz list stays
    as short as routing allows.
    """
    sigma = frozenset(seed.locations())
    huggers = _arrival_cells(seed)
    halo = {d.step(b) for b in sigma for d in DIRECTIONS} - sigma
    unfaced = {b for b in halo if not _block_faced(seed, b)}
    if out_dirs is None:
        out_dirs = frozenset(DIRECTIONS)

    def legal(cell):
        if cell in core:
            return False
        if cell == root_global:
            return True
        b, loc = _split(cell)
        if loc == C_CELL3:
            return False
        if b not in sigma and b not in halo:
            return False
        if loc in CORNERS3:
            # relay tiles only ever sit next to a centre, never on a corner
            return True
        d = MIDDLE_DIR[loc]
        across = d.step(b)
        if across in sigma and not seed.at(across).side(d.opposite).is_null:
            return True
        host_ok = b in sigma or b not in reach
        across_ok = (
            across in sigma
            or across not in reach
            or d.opposite not in out_dirs
        )
        return host_ok and across_ok

    parent = {root_global: None}
    pending = {c for c in huggers if c != root_global}
    while pending:
        dist = {c: 0 for c in parent}
        done = set()
        pred = {}
        heap = [(0, c) for c in sorted(parent)]
        heapq.heapify(heap)
        target = None
        while heap:
            dcur, cell = heapq.heappop(heap)
            if cell in done:
                continue
            done.add(cell)
            if cell in pending:
                target = cell
                break
            for d in DIRECTIONS:
                nb = d.step(cell)
                if not legal(nb) or nb in done:
                    continue
                w = dcur + (
                    5 if nb in huggers else 3 if _split(nb)[0] in unfaced else 1
                )
                if w < dist.get(nb, 1 << 30):
                    dist[nb] = w
                    pred[nb] = cell
                    heapq.heappush(heap, (w, nb))
        if target is None:
            raise TemplateGap(
                f"arrival cell {min(pending)} is unreachable for the boundary walk"
            )
        path = [target]
        while path[-1] not in parent:
            path.append(pred[path[-1]])
        anchor = path[-1]
        for cell in reversed(path[:-1]):
            parent[cell] = anchor
            anchor = cell
        pending -= set(path)

    kids = {}
    for c, p in parent.items():
        if p is not None:
            kids.setdefault(p, []).append(c)
    for v in kids.values():
        v.sort()
    nodes = []

    def emit(cell, pcell):
        info = huggers.get(cell)
        nodes.append(
            PerimeterNode(
                cell=cell,
                parent=pcell,
                io_dir=info[0] if info else None,
                io_glue=info[1] if info else None,
            )
        )
        for k in kids.get(cell, ()):
            emit(k, cell)

    emit(root_global, end_global)
    claimed_in = frozenset(c for c in parent if _split(c)[0] in sigma)
    return tuple(nodes), claimed_in


def _piece_specs(block, origin, parent_dir, child_dirs, picks, edge_idx, end_local, swaps):
    """Portal pairs for each core piece of one block.

    An edge normally crosses outward over the facing middles and returns
    over its claimed corner pair; a swapped edge does the reverse.  Both
    ends of an edge share the swap bit, so the crossing cells stay
    adjacent either way.
    """

    def ports(d):
        i = edge_idx[(block, d)]
        middle, corner = MIDDLE_OF[d], CLAIM[d][picks[i]]
        return (corner, middle) if swaps.get(i) else (middle, corner)

    specs = []
    cur = (0, 0) if block == origin else ports(parent_dir)[0]
    for d in child_dirs:
        out, back = ports(d)
        specs.append((cur, out))
        cur = back
    if block == origin:
        specs.append((cur, end_local))
    else:
        specs.append((cur, ports(parent_dir)[1]))
    return specs


def _arrival_cells(seed):
    """Map each arrival cell to the direction and seed glue it presents."""
    sigma = frozenset(seed.locations())
    out = {}
    for b in sorted(sigma):
        t = seed.at(b)
        for d in DIRECTIONS:
            nb = d.step(b)
            if nb in sigma:
                continue
            g = t.side(d)
            if g.is_null:
                continue
            cx, cy = _glob(nb, C_CELL3)
            out[(cx - d.value[0], cy - d.value[1])] = (d, g)
    return out


def _free_core_paths(seed, tree, reach):
    """Simple chains through every block centre, routed without block
    confinement.

    A block whose four sides all carry tree edges cannot host the piece
    templates (eight distinct portal cells plus a covered centre exhaust
    the block, and no claim matching keeps the short pieces adjacent), so
    dense trees fall back to a free snake.  Chain tiles are placed before
    the boundary root, hence before any relay tile can exist, so the only
    cells the chain must avoid are centres outside the seed, arrival
    cells, and centre-adjacent cells whose host or facing block may
    resolve.
    """
    sigma = frozenset(seed.locations())
    halo = {d.step(b) for b in sigma for d in DIRECTIONS} - sigma
    huggers = _arrival_cells(seed)
    origin = tree.root
    waypoints = [_glob(origin, (0, 0))]

    def visit(b, pd):
        waypoints.append(_glob(b, C_CELL3))
        for d in _ccw_order(pd):
            nb = d.step(b)
            if tree.parent.get(nb) == b:
                visit(nb, d.opposite)

    visit(origin, Direction.WEST)

    def ok_halo(cell):
        b, loc = _split(cell)
        if b in sigma:
            return True
        if b not in halo:
            return False
        if loc == C_CELL3:
            return False
        if loc in CORNERS3:
            return True
        if cell in huggers:
            return False
        d = MIDDLE_DIR[loc]
        across = d.step(b)
        return b not in reach and (across in sigma or across not in reach)

    def ok_sigma(cell):
        return _split(cell)[0] in sigma

    def solutions(ok, budget):
        def solve(i, used, acc):
            if budget[0] <= 0:
                return
            if i == len(waypoints) - 1:
                yield list(acc)
                return
            src, dst = waypoints[i], waypoints[i + 1]
            future = set(waypoints[i + 2:])
            count = [0]

            def paths(cell, walked, seen):
                if budget[0] <= 0 or count[0] >= 80:
                    return
                budget[0] -= 1
                if cell == dst:
                    count[0] += 1
                    yield list(walked)
                    return
                nbs = sorted(
                    (d.step(cell) for d in DIRECTIONS),
                    key=lambda c: (
                        _split(c)[0] not in sigma,
                        abs(c[0] - dst[0]) + abs(c[1] - dst[1]),
                        c,
                    ),
                )
                for nb in nbs:
                    if nb in seen or nb in used or nb in future:
                        continue
                    if nb != dst and not ok(nb):
                        continue
                    walked.append(nb)
                    seen.add(nb)
                    yield from paths(nb, walked, seen)
                    seen.discard(nb)
                    walked.pop()

            for leg in paths(src, [], {src}):
                yield from solve(i + 1, used | set(leg), acc + leg)

        if not ok(waypoints[0]):
            return
        yield from solve(0, set(waypoints[:1]), list(waypoints[:1]))

    # seed-confined snakes leave the whole halo to the boundary walk, so
    # they come first; halo-assisted routing is the last resort
    yield from islice(solutions(ok_sigma, [60_000]), 16)
    yield from islice(solutions(ok_halo, [200_000]), 16)


def _assign_free(seed, tree, plan, reach, need_root, out_dirs=None):
    """Template set for a free-snake core; None when no snake or no root
    placement works out."""
    origin = tree.root
    path, nodes, claimed_in = None, (), frozenset()
    for cand in _free_core_paths(seed, tree, reach):
        if not need_root:
            path = cand
            break
        core = frozenset(cand)
        end = cand[-1]
        for d in DIRECTIONS:
            r = d.step(end)
            if r in core or _split(r)[1] == C_CELL3:
                continue
            try:
                nodes, claimed_in = _plan_perimeter(
                    seed, core, r, end, reach, out_dirs
                )
            except TemplateGap:
                continue
            path = cand
            break
        if path is not None:
            break
    if path is None:
        return None
    boundary_local = {}
    for cell in claimed_in:
        b, loc = _split(cell)
        boundary_local.setdefault(b, set()).add(loc)
    core_local = {}
    for cell in path:
        b, loc = _split(cell)
        core_local.setdefault(b, set()).add(loc)
    ox, oy = origin
    out = {}
    for b in tree.vertices():
        roles = {(i, j): "open" for i in range(3) for j in range(3)}
        if b in plan.M:
            for c in CORRIDOR:
                roles[c] = "corridor"
        for loc in boundary_local.get(b, ()):
            roles[loc] = "boundary"
        for loc in core_local.get(b, ()):
            roles[loc] = "core"
        pieces = ()
        if b == origin:
            pieces = (tuple((x - 3 * ox, y - 3 * oy) for (x, y) in path),)
        out[b] = Scale3Template(
            block=b,
            template_id="free",
            rotation=0,
            m_block=b in plan.M,
            parent_dir=(
                None if b == origin else _direction_between(b, tree.parent[b])
            ),
            child_dirs=(),
            roles=roles,
            pieces=pieces,
            end_cell=None,
            perimeter=nodes if b == origin else (),
        )
    return out


def assign_templates3(
    seed: Assembly,
    tree: SpanningTree,
    plan: EdgeRemovalPlan,
    system: TileSystem | None = None,
) -> dict:
    """One positioned template per block: crossing picks, routed core
    pieces, the origin's end cell, and the full boundary program.

    Pass the full ``system`` so boundary planning knows which neighbouring
    cells growth can ever touch; with only a seed the planner assumes the
    seed is inert, which is exact for glueless sources only.
    """
    origin = tree.root
    blocks = tree.vertices()
    children = {b: set() for b in blocks}
    for c, p in tree.parent.items():
        children[p].add(c)
    parent_dir = {
        b: None if b == origin else _direction_between(b, tree.parent[b])
        for b in blocks
    }
    child_dirs = {
        b: tuple(
            d
            for d in _ccw_order(parent_dir[b] or Direction.WEST)
            if d.step(b) in children[b]
        )
        for b in blocks
    }
    edge_list = sorted(
        (tree.parent[c], c, _direction_between(tree.parent[c], c))
        for c in tree.parent
    )
    incident = {}
    edge_idx = {}
    for idx, (p, c, d) in enumerate(edge_list):
        incident.setdefault(p, []).append((idx, d))
        incident.setdefault(c, []).append((idx, d.opposite))
        edge_idx[(p, d)] = idx
        edge_idx[(c, d.opposite)] = idx
    tree_sides = {
        b: frozenset(d for _, d in incident.get(b, ())) for b in blocks
    }
    if Direction.WEST in tree_sides[origin] or Direction.SOUTH in tree_sides[origin]:
        raise TemplateGap("origin block has a west or south tree edge")
    need_root = _has_exposures(seed)
    reach = (
        _growth_reach(system)
        if system is not None
        else frozenset(seed.locations())
    )
    out_dirs = None
    if system is not None:
        out_dirs = frozenset(
            d
            for v in _io_expansion(system.tiles, system.temperature)
            for d in _variant_io_sides(v.tile)[1]
        )

    block_edges = {b: sorted(i for i, _ in incident.get(b, ())) for b in blocks}
    closes_at = {}
    for b in blocks:
        if block_edges[b]:
            closes_at.setdefault(block_edges[b][-1], []).append(b)

    last_error = None
    for end_local in _END_PREFERENCE:
        if end_local != C_CELL3 and MIDDLE_DIR[end_local] in tree_sides[origin]:
            continue
        for picks in islice(_solve_crossings(edge_list, incident, plan.M), 128):
            route_cache = {}

            def block_route(b, bits):
                combo = tuple(bits[i] for i in block_edges[b])
                key = (b, combo)
                if key not in route_cache:
                    swaps = dict(zip(block_edges[b], combo))
                    specs = _piece_specs(
                        b,
                        origin,
                        parent_dir[b],
                        child_dirs[b],
                        picks,
                        edge_idx,
                        end_local,
                        swaps,
                    )
                    route_cache[key] = _route_block(specs, m_block=b in plan.M)
                return route_cache[key]

            def swap_solutions(i, bits):
                # flip outbound and return lanes per edge; all-normal first
                if i == len(edge_list):
                    yield dict(bits)
                    return
                for v in (False, True):
                    bits[i] = v
                    if all(block_route(b, bits) is not None for b in closes_at.get(i, ())):
                        yield from swap_solutions(i + 1, bits)
                    del bits[i]

            for bits in islice(swap_solutions(0, {}), 64):
                routed = {b: block_route(b, bits) for b in blocks}
                if any(r is None for r in routed.values()):
                    continue
                root_global = None
                if need_root:
                    if end_local == C_CELL3:
                        used = {c for piece in routed[origin] for c in piece}
                        root_local = next(
                            (
                                m
                                for m in _ROOT_PREFERENCE
                                if m not in used
                                and MIDDLE_DIR[m] not in tree_sides[origin]
                            ),
                            None,
                        )
                        if root_local is None:
                            continue
                        root_global = _glob(origin, root_local)
                    else:
                        d = MIDDLE_DIR[end_local]
                        root_global = d.step(_glob(origin, end_local))
                core_globals = frozenset(
                    _glob(b, c) for b in blocks for piece in routed[b] for c in piece
                )
                try:
                    if need_root:
                        nodes, claimed_in = _plan_perimeter(
                            seed,
                            core_globals,
                            root_global,
                            _glob(origin, end_local),
                            reach,
                            out_dirs,
                        )
                    else:
                        nodes, claimed_in = (), frozenset()
                except TemplateGap as e:
                    last_error = e
                    continue
                return _build_templates(
                    blocks,
                    origin,
                    plan,
                    parent_dir,
                    child_dirs,
                    tree_sides,
                    routed,
                    end_local,
                    nodes,
                    claimed_in,
                )
    free = _assign_free(seed, tree, plan, reach, need_root, out_dirs)
    if free is not None:
        return free
    if last_error is not None:
        raise TemplateGap(f"no feasible layout: {last_error}")
    raise TemplateGap("no feasible crossing assignment or core routing")


def _build_templates(
    blocks,
    origin,
    plan,
    parent_dir,
    child_dirs,
    tree_sides,
    routed,
    end_local,
    nodes,
    claimed_in,
):
    boundary_local = {}
    for cell in claimed_in:
        b, loc = _split(cell)
        boundary_local.setdefault(b, set()).add(loc)
    out = {}
    for b in blocks:
        if b == origin:
            tid = {
                frozenset(): "origin_single",
                frozenset({Direction.NORTH}): "origin_n",
                frozenset({Direction.EAST}): "origin_e",
                frozenset({Direction.NORTH, Direction.EAST}): "origin_ne",
            }[frozenset(child_dirs[b])]
            rot = 0
        elif b in plan.M:
            try:
                tid, rot = _CONNECTORS[tree_sides[b]]
            except KeyError:
                raise TemplateGap(
                    f"corridor block {b} carries sides "
                    f"{sorted(d.name for d in tree_sides[b])}"
                )
        else:
            canon, rot = _canon(parent_dir[b], child_dirs[b])
            tid = _LETTERS[canon]
        roles = {}
        for i in range(3):
            for j in range(3):
                roles[(i, j)] = "open"
        if b in plan.M:
            for c in CORRIDOR:
                roles[c] = "corridor"
        for loc in boundary_local.get(b, ()):
            roles[loc] = "boundary"
        for piece in routed[b]:
            for c in piece:
                roles[c] = "core"
        out[b] = Scale3Template(
            block=b,
            template_id=tid,
            rotation=rot,
            m_block=b in plan.M,
            parent_dir=parent_dir[b],
            child_dirs=child_dirs[b],
            roles=roles,
            pieces=routed[b],
            end_cell=end_local if b == origin else None,
            perimeter=nodes if b == origin else (),
        )
    return out


def _seed_structure3(seed, assignment, tau):
    """Global side maps for every seed-structure tile: the core chain, the
    boundary tree, and the arrival glues its leaves present."""
    tau3 = max(2, tau)
    origin = next(b for b, t in assignment.items() if t.parent_dir is None)
    tour = []

    def walk(b):
        t = assignment[b]
        pieces = iter(t.pieces)
        tour.extend(_glob(b, c) for c in next(pieces))
        for d in t.child_dirs:
            walk(d.step(b))
            tour.extend(_glob(b, c) for c in next(pieces))

    walk(origin)
    sides = {}

    def put(cell, d, glue):
        held = sides.setdefault(cell, {}).setdefault(d, glue)
        if held != glue:
            raise TemplateGap(f"glue clash at {cell} {d.name}")

    for k in range(len(tour) - 1):
        d = _direction_between(tour[k], tour[k + 1])
        g = Glue(f"c3~{k}", tau3)
        put(tour[k], d, g)
        put(tour[k + 1], d.opposite, g)

    for idx, node in enumerate(assignment[origin].perimeter):
        d = _direction_between(node.parent, node.cell)
        if idx == 0:
            g = Glue("prm~0", tau3)
        else:
            g = Glue(f"pr~{node.cell[0]}~{node.cell[1]}", tau3)
        put(node.parent, d, g)
        put(node.cell, d.opposite, g)
        if node.io_dir is not None:
            put(node.cell, node.io_dir, _io_glue(node.io_glue, node.io_dir, tau))

    meta = {}
    for cell in sides:
        b, loc = _split(cell)
        t = assignment.get(b)
        role = t.roles.get(loc, "boundary") if t is not None else "boundary"
        meta[cell] = (b, loc, role)
    return sides, meta


def emit_seed_tiles3(seed: Assembly, assignment: dict, tau: int = 2):
    """One uniquely-named tile per planned cell, in global cell order."""
    sides, meta = _seed_structure3(seed, assignment, tau)
    out = []
    for cell in sorted(sides):
        glues = sides[cell]
        b, loc, _ = meta[cell]
        name = f"s3~{b[0]}~{b[1]}~{loc[0]}~{loc[1]}"
        out.append(
            (
                (b, loc),
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


def emit_supertile_tiles3(tio, tau: int = 2):
    """Classifier tiles plus the shared two-stage arrival paths.

    Identical in spirit to the scale-4 emitter, but a 3x3 block leaves
    exactly two cells between neighbouring centre cells, so each (glue,
    direction) needs one launch stage and one arrival stage and no
    corner-fill: every cell these paths touch is a centre-adjacent cell,
    which the seed structure never relies on.
    """
    tau3 = max(2, tau)
    c_tiles = []
    demands = set()
    for tile in tio:
        ins, outs = _variant_io_sides(tile)
        glues = {}
        for d in ins:
            glues[d] = tile.side(d)
        for d, g in outs.items():
            glues[d] = _path_glue("go", g, d, tau3)
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
    path_tiles = []
    for glue, d in sorted(
        demands, key=lambda item: (item[0].label, item[0].strength, item[1].name)
    ):
        go = _path_glue("go", glue, d, tau3)
        m1 = _path_glue("m1", glue, d, tau3)
        arrive = _io_glue(glue, d, tau)
        tag = f"{d.name[0]}~{glue.strength}~{glue.label}"

        def build(name, spec):
            return TileType(
                name,
                north=spec.get(Direction.NORTH, NULL_GLUE),
                east=spec.get(Direction.EAST, NULL_GLUE),
                south=spec.get(Direction.SOUTH, NULL_GLUE),
                west=spec.get(Direction.WEST, NULL_GLUE),
            )

        path_tiles.append(build(f"f1~{tag}", {d.opposite: go, d: m1}))
        path_tiles.append(build(f"f2~{tag}", {d.opposite: m1, d: arrive}))
    return c_tiles + path_tiles


def tile_bound3(s_count: int, g_count: int, t_count: int) -> int:
    return 20 * s_count + 16 * g_count + 6 * t_count


def _block_faced(seed, block):
    for d in DIRECTIONS:
        nb = d.step(block)
        if nb in seed and not seed.at(nb).side(d.opposite).is_null:
            return True
    return False


def transform_scale3(s: TileSystem) -> GeneratedSystem:
    """The whole compilation: regions and corridors, crossing picks and
    core routing, the boundary walk, IO expansion, arrival paths, and the
    block classifier, with the emitted count checked against the bound."""
    tau = s.temperature
    tau3 = max(2, tau)
    regions = combine_noncyclic(s.seed, detect_regions(s.seed))
    plan = plan_edge_removal(s.seed, regions)
    tree = spanning_tree3(s.seed, plan.removed_edges)
    assignment = assign_templates3(s.seed, tree, plan, system=s)
    placed = emit_seed_tiles3(s.seed, assignment, tau)

    variants = _io_expansion(s.tiles, tau)
    others = emit_supertile_tiles3([v.tile for v in variants], tau)

    sigma = frozenset(s.seed.locations())
    entries = []
    provenance = {}
    declared = set()
    for (b, loc), tile in placed:
        if b in sigma:
            entries.append(((loc, tile), s.seed.at(b)))
            provenance[tile] = (f"seed block {b}", assignment[b].roles[loc])
        else:
            provenance[tile] = (f"outside block {b}", "boundary")
            if not _block_faced(s.seed, b):
                declared.add((b, loc))
    c_by_name = {f"C~{v.tile.name}": v for v in variants}
    for tile in others:
        v = c_by_name.get(tile.name)
        if v is not None:
            entries.append(((C_CELL3, tile), v.base))
            provenance[tile] = (f"tile {v.base.name}", "classifier")
        else:
            provenance[tile] = (tile.name.split("~", 1)[1], "arrival path")
    classifier = TableClassifier.from_entries(3, entries)

    seed_tiles = [t for _, t in placed]
    all_tiles = seed_tiles + others
    by_spot = dict(placed)
    root_tile = by_spot[(tree.root, (0, 0))]
    system = TileSystem(
        tiles=frozenset(all_tiles),
        seed=Assembly({_glob(tree.root, (0, 0)): root_tile}),
        temperature=tau3,
        name=f"{s.name}~s3" if s.name else "s3",
    )

    glue_pool = set()
    for t in set(s.tiles) | {s.seed.at(loc) for loc in s.seed.locations()}:
        for d in DIRECTIONS:
            g = t.side(d)
            if not g.is_null:
                glue_pool.add((g.label, g.strength))
    stats = {
        "m": 3,
        "s": len(s.seed),
        "t": len(s.tiles),
        "g": len(glue_pool),
        "emitted": len(all_tiles),
        "bound": tile_bound3(len(s.seed), len(glue_pool), len(s.tiles)),
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
        declared_cheating_fuzz=frozenset(declared),
    )
