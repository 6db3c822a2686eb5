"""Square tiles on the integer plane, temperature-tau attachment dynamics.

A tile type is a unit square with a glue on each of its four sides.  Two
adjacent tiles interact when their abutting glue labels match exactly; the
interaction contributes that label's strength.  An assembly is a finite
partial placement of tile types on Z^2.  At temperature tau, a tile may
attach at an empty location when the strengths of its interactions with
already-placed neighbours sum to at least tau, and an assembly is tau-stable
when every cut of its binding graph severs bonds of total strength at least
tau.

Glues are diagonal: a label binds only to itself, with one fixed strength.
Tile sets that assign two different strengths to one label are rejected.

Assemblies are compared by exact placements (no translation quotient), since
seeds pin every system to absolute coordinates.  Everything here is a value:
attachment returns a new assembly, exploration returns an immutable report.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Optional

import networkx as nx

Coord = tuple[int, int]


class Direction(Enum):
    # Declaration order N, E, S, W is meaningful: deterministic traversals
    # (frontier ordering, spanning trees) visit children in this order.
    NORTH = (0, 1)
    EAST = (1, 0)
    SOUTH = (0, -1)
    WEST = (-1, 0)

    @property
    def vector(self) -> Coord:
        return self.value

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]

    def step(self, loc: Coord) -> Coord:
        dx, dy = self.value
        return (loc[0] + dx, loc[1] + dy)

    def __repr__(self) -> str:
        return self.name


_OPPOSITE = {
    Direction.NORTH: Direction.SOUTH,
    Direction.SOUTH: Direction.NORTH,
    Direction.EAST: Direction.WEST,
    Direction.WEST: Direction.EAST,
}

DIRECTIONS = (Direction.NORTH, Direction.EAST, Direction.SOUTH, Direction.WEST)


class GlueConflictError(ValueError):
    """One glue label carries two different strengths in the same context."""


@dataclass(frozen=True, slots=True)
class Glue:
    label: str
    strength: int

    def __post_init__(self) -> None:
        if self.strength < 0:
            raise ValueError(f"negative glue strength: {self.strength}")
        # strength 0 is reserved for the null glue and vice versa
        if (self.strength == 0) != (self.label == ""):
            raise ValueError(
                f"glue ({self.label!r}, {self.strength}): strength 0 iff empty label"
            )

    @property
    def is_null(self) -> bool:
        return self.strength == 0

    def __repr__(self) -> str:
        if self.is_null:
            return "Glue(null)"
        return f"Glue({self.label!r}, {self.strength})"


NULL_GLUE = Glue("", 0)


def interaction_strength(a: Glue, b: Glue) -> int:
    """Strength contributed by two abutting glues.

    Matching non-null labels interact with the label's strength; anything
    else contributes 0.  A label carrying two strengths is a malformed tile
    set, not a non-interaction.
    """
    if a.is_null or b.is_null:
        return 0
    if a.label != b.label:
        return 0
    if a.strength != b.strength:
        raise GlueConflictError(
            f"label {a.label!r} declared with strengths {a.strength} and {b.strength}"
        )
    return a.strength


@dataclass(frozen=True, slots=True)
class TileType:
    """Unit square with one glue per side.  Omitted sides get the null glue."""

    name: str
    north: Glue = NULL_GLUE
    east: Glue = NULL_GLUE
    south: Glue = NULL_GLUE
    west: Glue = NULL_GLUE

    def side(self, d: Direction) -> Glue:
        if d is Direction.NORTH:
            return self.north
        if d is Direction.EAST:
            return self.east
        if d is Direction.SOUTH:
            return self.south
        return self.west

    def sides(self) -> Iterator[tuple[Direction, Glue]]:
        yield Direction.NORTH, self.north
        yield Direction.EAST, self.east
        yield Direction.SOUTH, self.south
        yield Direction.WEST, self.west

    def __repr__(self) -> str:
        return f"TileType({self.name!r})"


class Assembly:
    """Immutable finite placement map Z^2 -> TileType.

    Identity is the exact placement set: two assemblies are equal when they
    put equal tile types at equal coordinates.  The canonical key doubles as
    the hash-consing token during exploration.
    """

    __slots__ = ("_cells", "_key", "_hash")

    def __init__(self, placements: Mapping[Coord, TileType]):
        self._cells = dict(placements)
        self._key: Optional[frozenset] = None
        self._hash: Optional[int] = None

    @classmethod
    def _adopt(cls, cells: dict) -> "Assembly":
        # internal fast path: takes ownership of `cells`, caller must not mutate
        a = object.__new__(cls)
        a._cells = cells
        a._key = None
        a._hash = None
        return a

    @property
    def placements(self) -> Mapping[Coord, TileType]:
        return self._cells

    @property
    def key(self) -> frozenset:
        if self._key is None:
            self._key = frozenset(
                (x, y, t) for (x, y), t in self._cells.items()
            )
        return self._key

    def __len__(self) -> int:
        return len(self._cells)

    def __contains__(self, loc: Coord) -> bool:
        return loc in self._cells

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Assembly):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.key)
        return self._hash

    def __repr__(self) -> str:
        return f"Assembly({len(self._cells)} tiles)"

    def at(self, loc: Coord) -> Optional[TileType]:
        return self._cells.get(loc)

    @property
    def domain(self) -> frozenset:
        return frozenset(self._cells)

    def locations(self) -> Iterator[Coord]:
        return iter(self._cells)

    def items(self) -> Iterator[tuple[Coord, TileType]]:
        return iter(self._cells.items())

    def with_tile(self, loc: Coord, tile: TileType) -> "Assembly":
        if loc in self._cells:
            raise ValueError(f"location {loc} already occupied")
        cells = dict(self._cells)
        cells[loc] = tile
        return Assembly._adopt(cells)

    def minus(self, gamma: "Assembly") -> "Assembly":
        """The assembly without any tiles at locations occupied in gamma."""
        cells = {loc: t for loc, t in self._cells.items() if loc not in gamma._cells}
        return Assembly._adopt(cells)

    def restricted_to(self, locations: Iterable[Coord]) -> "Assembly":
        keep = set(locations)
        return Assembly._adopt(
            {loc: t for loc, t in self._cells.items() if loc in keep}
        )

    def translate(self, dx: int, dy: int) -> "Assembly":
        return Assembly._adopt(
            {(x + dx, y + dy): t for (x, y), t in self._cells.items()}
        )

    def is_connected(self) -> bool:
        """Connectivity in the grid graph (bonds not required)."""
        if not self._cells:
            return True
        start = next(iter(self._cells))
        seen = {start}
        stack = [start]
        while stack:
            loc = stack.pop()
            for d in DIRECTIONS:
                nb = d.step(loc)
                if nb in self._cells and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == len(self._cells)

    def sort_token(self) -> tuple:
        """Canonical tuple for deterministic ordering among assemblies."""
        return tuple(
            sorted((x, y, t.name) for (x, y), t in self._cells.items())
        )

    def bounding_box(self) -> tuple[int, int, int, int]:
        if not self._cells:
            raise ValueError("empty assembly has no bounding box")
        xs = [x for x, _ in self._cells]
        ys = [y for _, y in self._cells]
        return min(xs), min(ys), max(xs), max(ys)


@dataclass(frozen=True)
class BindingGraph:
    """Vertices are occupied coordinates; edges are positive-strength bonds."""

    vertices: frozenset
    edges: tuple  # ((coord_a, coord_b), strength), coord_a < coord_b, sorted

    def strength_between(self, a: Coord, b: Coord) -> int:
        lo, hi = (a, b) if a < b else (b, a)
        for (u, v), s in self.edges:
            if (u, v) == (lo, hi):
                return s
        return 0

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for (u, v), s in self.edges:
            g.add_edge(u, v, weight=s)
        return g


def binding_graph(a: Assembly) -> BindingGraph:
    if len(a) == 0:
        raise ValueError("binding graph of an empty assembly")
    edges = []
    for loc, tile in a.items():
        # scan N and E only so each adjacent pair is considered once
        for d in (Direction.NORTH, Direction.EAST):
            nb = d.step(loc)
            other = a.at(nb)
            if other is None:
                continue
            s = interaction_strength(tile.side(d), other.side(d.opposite))
            if s > 0:
                lo, hi = (loc, nb) if loc < nb else (nb, loc)
                edges.append(((lo, hi), s))
    edges.sort()
    return BindingGraph(vertices=a.domain, edges=tuple(edges))


def is_tau_stable(a: Assembly, tau: int) -> bool:
    """True iff every cut of the binding graph has strength >= tau.

    Computed as a global minimum cut.  A disconnected assembly admits a cut
    of strength 0, so it is never stable; a single tile has no cuts at all.
    """
    if tau < 1:
        raise ValueError("temperature must be a positive integer")
    if len(a) == 0:
        raise ValueError("stability of an empty assembly")
    if len(a) == 1:
        return True
    g = binding_graph(a).to_networkx()
    if not nx.is_connected(g):
        return False
    cut_value, _ = nx.stoer_wagner(g)
    return cut_value >= tau


class TileSystem:
    """A tile set, a seed assembly, and a temperature.

    Construction validates the whole object: tau >= 1, a consistent diagonal
    glue table (one strength per label across all tiles and the seed), and a
    non-empty, connected, tau-stable seed drawn from the tile set.
    """

    __slots__ = ("name", "tiles", "seed", "temperature", "_by_name")

    def __init__(
        self,
        tiles: Iterable[TileType],
        seed: Assembly,
        temperature: int,
        name: str = "",
    ):
        tiles = tuple(tiles)
        if temperature < 1:
            raise ValueError("temperature must be a positive integer")
        by_name: dict[str, TileType] = {}
        for t in tiles:
            if t.name in by_name and by_name[t.name] != t:
                raise ValueError(f"two distinct tile types named {t.name!r}")
            by_name[t.name] = t
        strengths: dict[str, int] = {}
        for t in tiles:
            for _, g in t.sides():
                if g.is_null:
                    continue
                prev = strengths.setdefault(g.label, g.strength)
                if prev != g.strength:
                    raise GlueConflictError(
                        f"label {g.label!r} has strengths {prev} and {g.strength}"
                    )
        if len(seed) == 0:
            raise ValueError("seed assembly must be non-empty")
        for loc, t in seed.items():
            if by_name.get(t.name) != t:
                raise ValueError(f"seed tile at {loc} not in the tile set")
        if not seed.is_connected():
            raise ValueError("seed assembly must be connected")
        if not is_tau_stable(seed, temperature):
            raise ValueError("seed assembly must be tau-stable")
        self.name = name
        self.tiles = tuple(sorted(set(tiles), key=lambda t: t.name))
        self.seed = seed
        self.temperature = temperature
        self._by_name = by_name

    def tile(self, name: str) -> TileType:
        return self._by_name[name]

    def has_tile(self, name: str) -> bool:
        return name in self._by_name

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return (
            f"TileSystem({label} {len(self.tiles)} tiles, "
            f"|seed|={len(self.seed)}, tau={self.temperature})"
        )


class AttachmentError(Exception):
    """A tile cannot attach: the location is occupied or binding is too weak."""

    OCCUPIED = "occupied"
    INSUFFICIENT = "insufficient-strength"

    def __init__(self, reason: str, loc: Coord, tile: TileType):
        self.reason = reason
        self.location = loc
        self.tile = tile
        super().__init__(f"{reason} at {loc} for {tile.name!r}")


class BudgetExceeded(Exception):
    """Exploration hit a configured state-count ceiling before finishing."""

    def __init__(self, ceiling: int):
        self.ceiling = ceiling
        super().__init__(f"state-count ceiling of {ceiling} assemblies reached")


def attachment_strength(s: TileSystem, a: Assembly, loc: Coord, tile: TileType) -> int:
    total = 0
    for d in DIRECTIONS:
        nb = a.at(d.step(loc))
        if nb is not None:
            total += interaction_strength(tile.side(d), nb.side(d.opposite))
    return total


def frontier(s: TileSystem, a: Assembly) -> set:
    """All (empty location, tile type) pairs that can tau-stably attach."""
    out = set()
    candidates = set()
    for loc in a.locations():
        for d in DIRECTIONS:
            nb = d.step(loc)
            if nb not in a:
                candidates.add(nb)
    for loc in candidates:
        for tile in s.tiles:
            if attachment_strength(s, a, loc, tile) >= s.temperature:
                out.add((loc, tile))
    return out


def attach(a: Assembly, loc: Coord, t: TileType, s: TileSystem) -> Assembly:
    if loc in a:
        raise AttachmentError(AttachmentError.OCCUPIED, loc, t)
    if attachment_strength(s, a, loc, t) < s.temperature:
        raise AttachmentError(AttachmentError.INSUFFICIENT, loc, t)
    return a.with_tile(loc, t)


@dataclass(frozen=True)
class AssemblySequence:
    """An ordered placement history starting from the system's seed."""

    system: TileSystem
    steps: tuple  # of (Coord, TileType)

    def replay(self) -> Assembly:
        """Re-run every step, validating each against the frontier rule."""
        a = self.system.seed
        for loc, tile in self.steps:
            a = attach(a, loc, tile, self.system)
        return a

    def prefix_assemblies(self) -> Iterator[Assembly]:
        """Seed first, then the assembly after each step."""
        a = self.system.seed
        yield a
        for loc, tile in self.steps:
            a = attach(a, loc, tile, self.system)
            yield a

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class ExplorationReport:
    """Bounded breadth-first closure of a system under single-tile attachment.

    `assemblies` holds every distinct producible assembly discovered with at
    most `bound` tiles.  `terminal` is the subset whose frontier is empty;
    `truncated` is the subset that reached the size bound and was not
    expanded, so nothing can be said about what follows it.  The two never
    overlap.  `edges` records, for each expanded assembly, the attachments
    taken out of it and the resulting canonical assemblies; `parent_step`
    gives one shortest placement history per assembly for witness replay.
    """

    system: TileSystem
    assemblies: frozenset
    terminal: frozenset
    truncated: frozenset
    bound: int
    edges: Mapping  # Assembly -> tuple of ((Coord, TileType), Assembly)
    parent_step: Mapping  # Assembly -> (parent Assembly, (Coord, TileType))

    @property
    def complete(self) -> bool:
        """True when nothing was cut off: the report covers all of the
        system's producible assemblies, not just those within the bound."""
        return not self.truncated

    def sequence_to(self, a: Assembly) -> AssemblySequence:
        """A replayable placement history from the seed to `a`."""
        steps = []
        cur = a
        while True:
            entry = self.parent_step.get(cur)
            if entry is None:
                break
            parent, step = entry
            steps.append(step)
            cur = parent
        steps.reverse()
        return AssemblySequence(system=self.system, steps=tuple(steps))


def _frontier_map(s: TileSystem, a: Assembly) -> dict:
    """Frontier keyed by location, values sorted tuples of tile types."""
    out: dict[Coord, tuple] = {}
    candidates = set()
    for loc in a.locations():
        for d in DIRECTIONS:
            nb = d.step(loc)
            if nb not in a:
                candidates.add(nb)
    for loc in candidates:
        fits = tuple(
            t for t in s.tiles if attachment_strength(s, a, loc, t) >= s.temperature
        )
        if fits:
            out[loc] = fits
    return out


def _child_frontier_map(
    s: TileSystem, child: Assembly, parent_front: dict, placed: Coord
) -> dict:
    # only the four neighbours of the placed cell change their sums
    out = dict(parent_front)
    out.pop(placed, None)
    for d in DIRECTIONS:
        nb = d.step(placed)
        if nb in child:
            continue
        fits = tuple(
            t for t in s.tiles if attachment_strength(s, child, nb, t) >= s.temperature
        )
        if fits:
            out[nb] = fits
        else:
            out.pop(nb, None)
    return out


def enumerate_producible(
    s: TileSystem,
    max_tiles: int,
    max_states: Optional[int] = None,
) -> ExplorationReport:
    """All producible assemblies with at most `max_tiles` tiles.

    Breadth-first by assembly size, hash-consed on canonical placement sets.
    Assemblies that reach `max_tiles` are kept but flagged truncated rather
    than expanded.  If `max_states` is given and the number of distinct
    assemblies would exceed it, raises BudgetExceeded.
    """
    if max_tiles < len(s.seed):
        raise ValueError("size bound smaller than the seed")
    seed = s.seed
    visited: dict[Assembly, Assembly] = {seed: seed}
    edges: dict[Assembly, tuple] = {}
    parent_step: dict[Assembly, tuple] = {}
    terminal = []
    truncated = []
    queue = deque([(seed, _frontier_map(s, seed))])
    while queue:
        a, front = queue.popleft()
        if not front:
            # empty frontier is decisive even at the size bound
            terminal.append(a)
            edges[a] = ()
            continue
        if len(a) >= max_tiles:
            truncated.append(a)
            continue
        out = []
        for loc in sorted(front):
            for tile in front[loc]:
                child = a.with_tile(loc, tile)
                known = visited.get(child)
                if known is None:
                    if max_states is not None and len(visited) >= max_states:
                        raise BudgetExceeded(max_states)
                    visited[child] = child
                    parent_step[child] = (a, (loc, tile))
                    queue.append((child, _child_frontier_map(s, child, front, loc)))
                    known = child
                out.append(((loc, tile), known))
        edges[a] = tuple(out)
    return ExplorationReport(
        system=s,
        assemblies=frozenset(visited),
        terminal=frozenset(terminal),
        truncated=frozenset(truncated),
        bound=max_tiles,
        edges=edges,
        parent_step=parent_step,
    )


def producible_shapes(report: ExplorationReport) -> set:
    """Domains of every discovered assembly, as frozensets of coordinates."""
    return {a.domain for a in report.assemblies}


def terminal_shapes(report: ExplorationReport) -> set:
    """Domains of genuinely terminal assemblies; truncated ones are excluded."""
    return {a.domain for a in report.terminal}


@dataclass(frozen=True)
class Verdict:
    """Three-valued outcome of a bounded check.

    status is one of "pass", "fail", "inconclusive".  A fail carries a
    witness (shape depends on the check); an inconclusive carries the reason
    the bound got in the way.
    """

    status: str
    witness: object = None
    reason: str = ""

    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"

    @classmethod
    def passed(cls, reason: str = "") -> "Verdict":
        return cls(cls.PASS, None, reason)

    @classmethod
    def failed(cls, witness: object, reason: str = "") -> "Verdict":
        return cls(cls.FAIL, witness, reason)

    @classmethod
    def inconclusive(cls, reason: str) -> "Verdict":
        return cls(cls.INCONCLUSIVE, None, reason)

    def __bool__(self) -> bool:
        return self.status == self.PASS


def equivalent_modulo(
    sys_a: TileSystem,
    sys_b: TileSystem,
    gamma: Assembly,
    bound: int,
) -> Verdict:
    """Do the two systems produce the same assemblies outside gamma?

    Checks both inclusions of the production sets after subtracting gamma,
    over the size-bounded state spaces.  A missing image is a definite
    failure when the other side's exploration was exhaustive, or when the
    image is small enough that any preimage would have fit under the bound
    (a preimage can exceed the image by at most |gamma| tiles).  Otherwise
    truncation makes the outcome inconclusive.
    """
    if bound < max(len(sys_a.seed), len(sys_b.seed)):
        raise ValueError("bound smaller than a seed")
    rep_a = enumerate_producible(sys_a, bound)
    rep_b = enumerate_producible(sys_b, bound)
    gamma_size = len(gamma)

    def one_direction(rep_from, rep_to):
        images_to = {b.minus(gamma) for b in rep_to.assemblies}
        to_complete = not rep_to.truncated
        undecided = False
        for a in sorted(
            rep_from.assemblies, key=lambda x: (len(x), x.sort_token())
        ):
            img = a.minus(gamma)
            if img in images_to:
                continue
            if to_complete or len(img) + gamma_size <= bound:
                return Verdict.failed(
                    a, "produced on one side only (outside gamma)"
                ), False
            undecided = True
        return None, undecided

    fail, und_ab = one_direction(rep_a, rep_b)
    if fail is not None:
        return fail
    fail, und_ba = one_direction(rep_b, rep_a)
    if fail is not None:
        return fail
    if rep_a.truncated or rep_b.truncated or und_ab or und_ba:
        return Verdict.inconclusive("state space truncated before a decision")
    return Verdict.passed("both inclusions hold over the full state spaces")


def brute_force_stable(a: Assembly, tau: int) -> bool:
    """Stability by enumerating all 2-partitions of the tile locations.

    Exponential; intended as an oracle for small assemblies in tests and as
    the reference meaning of tau-stability.
    """
    locs = sorted(a.domain)
    n = len(locs)
    if n == 0:
        raise ValueError("stability of an empty assembly")
    if n == 1:
        return True
    bg = binding_graph(a)
    weight = {pair: s for pair, s in bg.edges}
    # fix locs[0] on one side; enumerate subsets of the rest for the other
    rest = locs[1:]
    for r in range(1, n):
        for combo in itertools.combinations(rest, r):
            side_b = set(combo)
            cut = 0
            for (u, v), sgth in weight.items():
                if (u in side_b) != (v in side_b):
                    cut += sgth
            if cut < tau:
                return False
    return True
