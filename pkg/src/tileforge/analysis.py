"""Order-sensitive analyses: dependence paths, strict dependence, blocking,
and cavity structure of seed shapes.

A dependence path certifies that growth flowed from one location to another
through a chain of load-bearing bonds laid down in placement order.  Strict
dependence asks whether any growth into a region can precede growth in
another.  Blocking finds locations whose occupant denies a differently-typed
tile that the surrounding assembly would otherwise support.  All three are
bounded searches over the exploration DAG and honest about truncation.

The region analysis is geometry only: it partitions the complement of a seed
into free space and cavities, and classifies each cavity by whether the
seed's bonds form a cycle around it using only tiles hugging the cavity
(Chebyshev distance 1).  Enclosure is tested explicitly by walking the
corner lattice: a bond between two tiles is a wall crossing the dual step
between the two corners beside it, and a cavity is enclosed exactly when no
corner walk escapes to infinity without crossing a wall.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from tileforge.core import (
    Assembly,
    AssemblySequence,
    Coord,
    DIRECTIONS,
    ExplorationReport,
    TileSystem,
    TileType,
    Verdict,
    binding_graph,
    enumerate_producible,
    interaction_strength,
)


def validate_path(path) -> tuple:
    """A path is a list of pairwise-distinct, consecutively 4-adjacent cells."""
    path = tuple(path)
    if len(set(path)) != len(path):
        raise ValueError("path locations must be pairwise distinct")
    for a, b in zip(path, path[1:]):
        if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
            raise ValueError(f"path cells {a} and {b} are not adjacent")
    return path


@dataclass(frozen=True)
class DependenceWitness:
    """A path whose every step was placed later than, and bonded onto, the
    previous one.  Seed tiles carry step index -1 (they were never placed)."""

    sequence: AssemblySequence
    path: tuple
    step_indices: tuple


@dataclass(frozen=True)
class BlockingWitness:
    """A location whose tile denies a different tile type that the
    neighbours, bound without the blocker's help, would support.

    `advisory` marks witnesses where every supporting neighbour strictly
    depends on the blocked location within the same bound, so an actual
    replacement could never be assembled; the definition counts these as
    blocking all the same.
    """

    blocked_location: Coord
    blocker: TileType
    alternative: TileType
    sequence: AssemblySequence
    advisory: bool = False

    def triple(self):
        return (self.blocked_location, self.blocker.name, self.alternative.name)


@dataclass(frozen=True)
class RegionReport:
    """Complement structure of a seed: finite cavities vs infinite free space.

    `free_space` lists the free-space cells inside the probed window (the
    component continues to infinity beyond it).  `cavity_class` holds
    "cyclic" or "non-cyclic" per cavity, index-aligned with `cavities`.
    """

    cavities: tuple  # of frozenset of Coord
    free_space: frozenset
    cavity_class: tuple  # of str
    window: tuple  # (x0, y0, x1, y1) inclusive probe window


def _placement_record(seq: AssemblySequence):
    """Replay once, recording per location: placement index (-1 for seed
    tiles) and, per attached tile, which neighbour bonds were load-bearing."""
    sys = seq.system
    placed_at = {loc: -1 for loc in sys.seed.locations()}
    load_bearing: dict[Coord, set] = {}
    a = sys.seed
    for k, (loc, tile) in enumerate(seq.steps):
        contrib = {}
        for d in DIRECTIONS:
            nb = a.at(d.step(loc))
            if nb is not None:
                c = interaction_strength(tile.side(d), nb.side(d.opposite))
                if c:
                    contrib[d.step(loc)] = c
        total = sum(contrib.values())
        load_bearing[loc] = {
            nb for nb, c in contrib.items() if total - c < sys.temperature
        }
        a = a.with_tile(loc, tile)
        placed_at[loc] = k
    return a, placed_at, load_bearing


def dependence_path(
    seq: AssemblySequence, l1: Coord, l2: Coord
) -> Optional[DependenceWitness]:
    """A dependence path from l1 to l2 in this particular sequence, if any.

    Edges run from a tile to a later-placed neighbour that needed the bond
    between them to reach temperature.  Directional: l1 to l2 says nothing
    about l2 to l1.
    """
    final, placed_at, load_bearing = _placement_record(seq)
    if l1 not in final or l2 not in final:
        raise ValueError("endpoints must be placed in the final assembly")
    if l1 == l2:
        return DependenceWitness(seq, (l1,), (placed_at[l1],))
    # successors[u] = tiles that bonded onto u when attaching
    successors: dict[Coord, list] = {}
    for v, needed in load_bearing.items():
        for u in needed:
            if placed_at[u] < placed_at[v]:
                successors.setdefault(u, []).append(v)
    prev = {l1: None}
    queue = deque([l1])
    while queue:
        u = queue.popleft()
        if u == l2:
            path = []
            while u is not None:
                path.append(u)
                u = prev[u]
            path.reverse()
            return DependenceWitness(
                seq, tuple(path), tuple(placed_at[p] for p in path)
            )
        for v in sorted(successors.get(u, ())):
            if v not in prev:
                prev[v] = u
                queue.append(v)
    return None


def strictly_depends(
    s: TileSystem,
    L1,
    L2,
    bound: int,
    max_states: Optional[int] = None,
    report: Optional[ExplorationReport] = None,
) -> Verdict:
    """Must every placement into L2 be preceded by one into L1?

    A violation is any bounded-producible assembly occupying L2 but not L1:
    every placement history of such an assembly places the L2 tile with L1
    still empty.  With no violation, the verdict holds unless some truncated
    assembly is still L1-free (its unexplored growth might reach L2 first).
    """
    L1, L2 = frozenset(L1), frozenset(L2)
    if report is None:
        report = enumerate_producible(s, bound, max_states)
    for a in sorted(report.assemblies, key=lambda x: (len(x), x.sort_token())):
        dom = a.domain
        if dom & L2 and not (dom & L1):
            return Verdict.failed(
                report.sequence_to(a), "assembly reaches L2 with L1 still empty"
            )
    for a in report.truncated:
        if not (a.domain & L1):
            return Verdict.inconclusive(
                "an assembly without L1 tiles was truncated before a decision"
            )
    return Verdict.passed("every bounded assembly touching L2 also touches L1")


def _edge_did_not_need(parent: Assembly, loc: Coord, tile: TileType, tau: int, probe: Coord) -> bool:
    """Did attaching `tile` at `loc` into `parent` stay at temperature
    without any bond to `probe`?  True outright when probe was empty."""
    total = 0
    probe_contrib = 0
    for d in DIRECTIONS:
        nb_loc = d.step(loc)
        nb = parent.at(nb_loc)
        if nb is None:
            continue
        c = interaction_strength(tile.side(d), nb.side(d.opposite))
        total += c
        if nb_loc == probe:
            probe_contrib = c
    return total - probe_contrib >= tau


def _clean_histories(report: ExplorationReport, b: Assembly, loc: Coord):
    """Which neighbours of `loc` can attach without ever needing its bonds,
    within a single placement history of `b`?

    Search over (sub-assembly of b, clean-neighbour flags): a neighbour is
    clean if it is a seed tile or its attachment step kept temperature with
    the `loc` bond zeroed; one placed needing `loc` stays dirty in that
    history.  Returns the reachable flag sets at `b` plus a function
    rebuilding a witness sequence for any of them.
    """
    s = report.system
    tau = s.temperature
    nb_locs = frozenset(d.step(loc) for d in DIRECTIONS if d.step(loc) in b)
    seed = s.seed
    start = (seed, frozenset(n for n in nb_locs if n in seed))
    parents = {start: None}
    stack = [start]
    found = {}
    b_key = b.key
    while stack:
        state = stack.pop()
        a, flags = state
        if a == b:
            found.setdefault(flags, state)
            continue
        for (step_loc, tile), child in report.edges.get(a, ()):
            if not (child.key <= b_key):
                continue
            if step_loc in nb_locs and _edge_did_not_need(
                a, step_loc, tile, tau, loc
            ):
                nxt = (child, flags | {step_loc})
            else:
                nxt = (child, flags)
            if nxt not in parents:
                parents[nxt] = (state, (step_loc, tile))
                stack.append(nxt)

    def sequence_for(flags: frozenset) -> AssemblySequence:
        steps = []
        cur = found[flags]
        while parents[cur] is not None:
            cur, step = parents[cur]
            steps.append(step)
        steps.reverse()
        return AssemblySequence(system=s, steps=tuple(steps))

    return set(found), sequence_for


def detect_blocking(
    s: TileSystem, bound: int, max_states: Optional[int] = None
) -> list:
    """All blocking witnesses discoverable within the exploration bound.

    Sound but incomplete: the unbounded question reduces from the halting
    problem, so growth past the bound may hide further witnesses.  One
    witness is returned per distinct (location, blocker, alternative)
    triple.

    A witness requires a single placement history in which some set of
    neighbours of the blocked location all attached without needing its
    bonds (seed tiles qualify outright) and the alternative tile type
    reaches temperature on those neighbours alone; the returned sequence is
    such a history.  Histories extend monotonically, so any triple realized
    in a bounded assembly is realized in an unexpanded leaf of the
    exploration: only those are scanned.
    """
    report = enumerate_producible(s, bound, max_states)
    tau = s.temperature
    witnesses: dict[tuple, BlockingWitness] = {}
    dependence_memo: dict[tuple, bool] = {}

    def depends_on(nb_loc: Coord, blocked: Coord) -> bool:
        key = (nb_loc, blocked)
        if key not in dependence_memo:
            v = strictly_depends(s, {blocked}, {nb_loc}, bound, report=report)
            dependence_memo[key] = v.status == Verdict.PASS
        return dependence_memo[key]

    leaves = report.terminal | report.truncated
    for b in sorted(leaves, key=lambda a: (len(a), a.sort_token())):
        histories_memo: dict[Coord, tuple] = {}
        for loc, blocker in sorted(b.items(), key=lambda kv: kv[0]):
            neighbours = {
                d: b.at(d.step(loc)) for d in DIRECTIONS if d.step(loc) in b
            }
            if not neighbours:
                continue
            for alt in s.tiles:
                if alt == blocker:
                    continue
                if (loc, blocker.name, alt.name) in witnesses:
                    continue
                # cheap necessary condition before the history search
                upper = sum(
                    interaction_strength(alt.side(d), nb.side(d.opposite))
                    for d, nb in neighbours.items()
                )
                if upper < tau:
                    continue
                if loc not in histories_memo:
                    histories_memo[loc] = _clean_histories(report, b, loc)
                flag_sets, sequence_for = histories_memo[loc]
                best = None
                for flags in sorted(flag_sets, key=lambda f: (len(f), sorted(f))):
                    strength = sum(
                        interaction_strength(alt.side(d), nb.side(d.opposite))
                        for d, nb in neighbours.items()
                        if d.step(loc) in flags
                    )
                    if strength >= tau:
                        best = flags
                        break
                if best is None:
                    continue
                independent = sum(
                    interaction_strength(alt.side(d), nb.side(d.opposite))
                    for d, nb in neighbours.items()
                    if d.step(loc) in best and not depends_on(d.step(loc), loc)
                )
                witnesses[(loc, blocker.name, alt.name)] = BlockingWitness(
                    blocked_location=loc,
                    blocker=blocker,
                    alternative=alt,
                    sequence=sequence_for(best),
                    advisory=independent < tau,
                )
    return sorted(
        witnesses.values(),
        key=lambda w: (w.blocked_location, w.blocker.name, w.alternative.name),
    )


def detect_regions(seed: Assembly) -> RegionReport:
    """Partition the complement around a seed into cavities and free space.

    Probes the bounding box plus a margin of one, whose border ring is
    all-empty and connected, so exactly one component is free space and
    every other component is a finite cavity.
    """
    if len(seed) == 0:
        raise ValueError("empty seed")
    if not seed.is_connected():
        raise ValueError("seed must be connected")
    x0, y0, x1, y1 = seed.bounding_box()
    x0, y0, x1, y1 = x0 - 1, y0 - 1, x1 + 1, y1 + 1
    empty = {
        (x, y)
        for x in range(x0, x1 + 1)
        for y in range(y0, y1 + 1)
        if (x, y) not in seed
    }
    components = []
    unseen = set(empty)
    while unseen:
        start = unseen.pop()
        comp = {start}
        stack = [start]
        while stack:
            c = stack.pop()
            for d in DIRECTIONS:
                nb = d.step(c)
                if nb in unseen:
                    unseen.remove(nb)
                    comp.add(nb)
                    stack.append(nb)
        components.append(frozenset(comp))
    border = lambda comp: any(
        c[0] in (x0, x1) or c[1] in (y0, y1) for c in comp
    )
    free = [c for c in components if border(c)]
    cavities = sorted(
        (c for c in components if not border(c)), key=lambda c: min(c)
    )
    assert len(free) == 1, "margin ring should join all outer components"
    classes = tuple(
        "cyclic" if _cavity_enclosed_by_local_bonds(seed, cav) else "non-cyclic"
        for cav in cavities
    )
    return RegionReport(
        cavities=tuple(cavities),
        free_space=free[0],
        cavity_class=classes,
        window=(x0, y0, x1, y1),
    )


def _cavity_enclosed_by_local_bonds(seed: Assembly, cavity: frozenset) -> bool:
    """True iff the bonds among seed tiles within Chebyshev distance 1 of
    the cavity form a cycle enclosing it.

    Test by separation on the corner lattice: corner (x, y) names the point
    between cells (x,y),(x+1,y),(x,y+1),(x+1,y+1).  A horizontal bond
    between (x,y) and (x+1,y) walls off the vertical corner step from
    (x, y-1) to (x, y); a vertical bond walls off the horizontal step.  The
    cavity is enclosed iff a corner of one of its cells cannot reach the
    window exterior without crossing a wall: the walls then contain a cycle
    around the cavity, and conversely any enclosing cycle separates.
    """
    ring = {
        v
        for v in seed.locations()
        if any(
            max(abs(v[0] - c[0]), abs(v[1] - c[1])) <= 1 for c in cavity
        )
    }
    bonds = [
        (u, v)
        for (u, v), _ in binding_graph(seed).edges
        if u in ring and v in ring
    ]
    blocked_steps = set()
    for (ux, uy), (vx, vy) in bonds:
        if uy == vy:  # horizontal bond, blocks a vertical corner step
            x = min(ux, vx)
            blocked_steps.add(((x, uy - 1), (x, uy)))
            blocked_steps.add(((x, uy), (x, uy - 1)))
        else:  # vertical bond, blocks a horizontal corner step
            y = min(uy, vy)
            blocked_steps.add(((ux - 1, y), (ux, y)))
            blocked_steps.add(((ux, y), (ux - 1, y)))
    x0, y0, x1, y1 = seed.bounding_box()
    # corner-lattice window, one beyond the cell window
    cx0, cy0, cx1, cy1 = x0 - 2, y0 - 2, x1 + 1, y1 + 1
    start = min(cavity)  # its SW corner is (x-1, y-1)
    start_corner = (start[0] - 1, start[1] - 1)
    seen = {start_corner}
    stack = [start_corner]
    while stack:
        c = stack.pop()
        if c[0] <= cx0 or c[0] >= cx1 or c[1] <= cy0 or c[1] >= cy1:
            return False  # walls never reach the margin: escaped
        for d in DIRECTIONS:
            nb = d.step(c)
            if nb in seen or (c, nb) in blocked_steps:
                continue
            seen.add(nb)
            stack.append(nb)
    return True
