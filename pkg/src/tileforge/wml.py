"""Window movies: splicing and pumping assembly sequences across cuts.

A window is a cut through the plane; its movie is the ordered record of
glues presented across the cut as an assembly sequence plays out.  Two
sequences whose movies agree across translated windows can be spliced into
one another, and a single sequence that repeats its own movie along a
corridor can be pumped: the segment between the matching cuts repeats any
number of times.  Every assembly returned here is re-validated by replaying
an attachment order from the seed, so callers never receive an assembly
that is merely conjectured producible.

Window shapes are straight vertical or horizontal edge runs; the span may
be narrow, so a cut can sever a single path while leaving parallel
structure attached.  Which tiles sit on which side of a cut is decided by
connectivity: remove the cut edges from the assembly's adjacency graph and
take the components containing the seed as the near side.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Optional

from tileforge.core import (
    Assembly,
    AssemblySequence,
    Coord,
    DIRECTIONS,
    Glue,
    TileSystem,
    attachment_strength,
)


class MovieMismatch(Exception):
    """The two window movies disagree, so splicing is not licensed."""


class SpliceReplayError(Exception):
    """A spliced assembly failed replay validation; the windows do not
    actually cut the assemblies the way the splice assumed."""


@dataclass(frozen=True)
class CollisionDuringPump(Exception):
    """Pumped growth ran into an already-placed tile.  This is a finding,
    not a malfunction: blocked pumping is how crashing paths are shown."""

    location: Coord

    def __str__(self):
        return f"pumped growth collides at {self.location}"


def _edge(u: Coord, v: Coord) -> tuple:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Window:
    """A straight cut between two grid columns or rows.

    A vertical window at `coord` separates cells with x < coord from cells
    with x >= coord; `span` is the inclusive range of the other axis its
    edges cover.  `edges` holds the actual grid-graph edges of the cut.
    """

    axis: str  # "v" or "h"
    coord: int
    span: tuple  # inclusive (lo, hi)

    def __post_init__(self):
        if self.axis not in ("v", "h"):
            raise ValueError("axis must be 'v' or 'h'")
        if self.span[0] > self.span[1]:
            raise ValueError("empty span")

    @classmethod
    def vertical(cls, x: int, lo: int, hi: int) -> "Window":
        return cls("v", x, (lo, hi))

    @classmethod
    def horizontal(cls, y: int, lo: int, hi: int) -> "Window":
        return cls("h", y, (lo, hi))

    @property
    def edges(self) -> frozenset:
        lo, hi = self.span
        if self.axis == "v":
            return frozenset(
                _edge((self.coord - 1, t), (self.coord, t))
                for t in range(lo, hi + 1)
            )
        return frozenset(
            _edge((t, self.coord - 1), (t, self.coord))
            for t in range(lo, hi + 1)
        )

    def translate(self, dx: int, dy: int) -> "Window":
        along, across = (dy, dx) if self.axis == "v" else (dx, dy)
        return Window(
            self.axis,
            self.coord + across,
            (self.span[0] + along, self.span[1] + along),
        )


def _translation(a: Window, b: Window) -> Coord:
    """The vector c with b = a + c; raises if b is not a translate of a."""
    if a.axis != b.axis or (
        a.span[1] - a.span[0] != b.span[1] - b.span[0]
    ):
        raise ValueError("windows are not translates of each other")
    across = b.coord - a.coord
    along = b.span[0] - a.span[0]
    return (across, along) if a.axis == "v" else (along, across)


@dataclass(frozen=True)
class MovieRecord:
    """One glue appearance across the window: the cell whose tile presents
    it, the glue, and the unit vector from that cell across the cut."""

    vertex: Coord
    glue: Glue
    orientation: Coord

    def translate(self, dx: int, dy: int) -> "MovieRecord":
        return MovieRecord(
            (self.vertex[0] + dx, self.vertex[1] + dy),
            self.glue,
            self.orientation,
        )


@dataclass(frozen=True)
class WindowMovie:
    records: tuple

    def translate(self, dx: int, dy: int) -> "WindowMovie":
        return WindowMovie(tuple(r.translate(dx, dy) for r in self.records))

    def __len__(self):
        return len(self.records)


def window_movie(seq: AssemblySequence, w: Window) -> WindowMovie:
    """Glue records along `w` in placement order.

    A glue is recorded when it first appears at a cut edge; the matching
    glue arriving later on the far side of the same edge adds nothing.  A
    placement presenting several new glues at once lists them in
    lexicographic order of their orientation unit vectors; the seed's
    tiles all land at instant zero and are ordered by cell, then vector.
    """
    edge_set = w.edges
    seen = set()
    records = []

    def emitted(loc, tile):
        out = []
        for d in DIRECTIONS:
            edge = _edge(loc, d.step(loc))
            if edge in edge_set:
                glue = tile.side(d)
                if not glue.is_null and (edge, glue) not in seen:
                    seen.add((edge, glue))
                    out.append(MovieRecord(loc, glue, d.value))
        out.sort(key=lambda r: r.orientation)
        return out

    opening = []
    for loc, tile in sorted(seq.system.seed.items()):
        opening.extend(emitted(loc, tile))
    opening.sort(key=lambda r: (r.vertex, r.orientation))
    records.extend(opening)
    for loc, tile in seq.steps:
        records.extend(emitted(loc, tile))
    return WindowMovie(tuple(records))


def greedy_replay(
    s: TileSystem, target: Assembly
) -> Optional[AssemblySequence]:
    """Some valid placement order building `target` from the seed, or None.

    For a fixed target, attachment order is irrelevant: strengths only grow
    as neighbours arrive, so any maximal greedy order succeeds iff the
    target is producible.
    """
    for loc, tile in s.seed.items():
        if target.at(loc) != tile:
            return None
    remaining = {
        loc: t for loc, t in target.items() if loc not in s.seed
    }
    cur = s.seed
    steps = []
    while remaining:
        pick = None
        for loc in sorted(remaining):
            t = remaining[loc]
            if attachment_strength(s, cur, loc, t) >= s.temperature:
                pick = (loc, t)
                break
        if pick is None:
            return None
        cur = cur.with_tile(*pick)
        steps.append(pick)
        del remaining[pick[0]]
    return AssemblySequence(system=s, steps=tuple(steps))


def _halves(a: Assembly, w: Window, seed: Assembly):
    """Split `a` by `w` into (seed side, far side) cell dicts.

    Sides are connected components of the assembly's adjacency graph with
    the cut edges removed; the seed side is the union of components that
    hold seed cells.  Raises if the cut separates the seed from itself.
    """
    cut = w.edges
    comp: dict = {}
    for start in a.locations():
        if start in comp:
            continue
        comp[start] = start
        queue = [start]
        while queue:
            u = queue.pop()
            for d in DIRECTIONS:
                v = d.step(u)
                if v in comp or v not in a or _edge(u, v) in cut:
                    continue
                comp[v] = start
                queue.append(v)
    seed_comps = {comp[loc] for loc in seed.locations()}
    if len(seed_comps) > 1:
        raise ValueError("the window cuts through the seed")
    left, right = {}, {}
    for loc, t in a.items():
        (left if comp[loc] in seed_comps else right)[loc] = t
    return left, right


def _shift(cells: dict, dx: int, dy: int) -> dict:
    return {(x + dx, y + dy): t for (x, y), t in cells.items()}


def _merge(*parts: dict) -> dict:
    out: dict = {}
    for cells in parts:
        for loc, t in cells.items():
            if out.get(loc, t) != t:
                raise SpliceReplayError(
                    f"spliced halves disagree at {loc}"
                )
            out[loc] = t
    return out


def splice(
    seq_a: AssemblySequence,
    w: Window,
    seq_b: AssemblySequence,
    w_translated: Window,
) -> tuple:
    """Cross the two sequences over matching window movies.

    Returns the pair (seed half of a + far half of b pulled back, seed half
    of b + far half of a pushed forward).  Producibility in exact
    coordinates is translation-sensitive, so each output is normalized to
    keep its seed fixed; both are replay-validated before return.  For one
    periodic sequence cut at two matching heights this yields exactly the
    shortened and the lengthened version.
    """
    if seq_a.system != seq_b.system:
        raise ValueError("sequences come from different systems")
    s = seq_a.system
    c = _translation(w, w_translated)
    movie_a = window_movie(seq_a, w)
    movie_b = window_movie(seq_b, w_translated)
    if movie_b.translate(-c[0], -c[1]) != movie_a:
        raise MovieMismatch(
            f"{len(movie_a)} vs {len(movie_b)} records do not align"
        )
    alpha = seq_a.replay()
    beta = seq_b.replay()
    a_left, a_right = _halves(alpha, w, s.seed)
    b_left, b_right = _halves(beta, w_translated, s.seed)
    out = []
    for merged in (
        _merge(a_left, _shift(b_right, -c[0], -c[1])),
        _merge(b_left, _shift(a_right, c[0], c[1])),
    ):
        candidate = Assembly(merged)
        if greedy_replay(s, candidate) is None:
            raise SpliceReplayError(
                "spliced assembly does not replay from the seed"
            )
        out.append(candidate)
    return tuple(out)


def find_pumpable(
    seq: AssemblySequence, corridor_width: int
) -> Optional[tuple]:
    """Two cuts across the growth corridor with identical movies, if any.

    The corridor axis is taken to be the longer side of the grown bounding
    box, which must be no wider than `corridor_width` across.  Only
    straight cuts perpendicular to that axis are scanned; pairs with the
    seed strictly between them are skipped.  Returns (window nearer the
    seed, window farther out) or None.
    """
    if corridor_width < 1:
        raise ValueError("corridor width must be positive")
    if len(seq) < 2:
        return None
    final = seq.replay()
    xs = [x for x, _ in final.locations()]
    ys = [y for _, y in final.locations()]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if x1 - x0 >= y1 - y0:
        cuts = [Window.vertical(x, y0, y1) for x in range(x0 + 1, x1 + 1)]
        cross = y1 - y0 + 1
        axis_of = lambda loc: loc[0]
    else:
        cuts = [Window.horizontal(y, x0, x1) for y in range(y0 + 1, y1 + 1)]
        cross = x1 - x0 + 1
        axis_of = lambda loc: loc[1]
    if cross > corridor_width:
        raise ValueError(
            f"assembly is {cross} wide across the corridor axis,"
            f" over the stated width {corridor_width}"
        )
    seed = seq.system.seed
    movies = [window_movie(seq, w) for w in cuts]
    for i in range(len(cuts)):
        for j in range(i + 1, len(cuts)):
            c = _translation(cuts[i], cuts[j])
            if movies[j].translate(-c[0], -c[1]) != movies[i]:
                continue
            try:
                _, far_i = _halves(final, cuts[i], seed)
                _, far_j = _halves(final, cuts[j], seed)
            except ValueError:
                continue
            if set(far_j) < set(far_i):
                return cuts[i], cuts[j]
            if set(far_i) < set(far_j):
                return cuts[j], cuts[i]
    return None


def pump(
    seq: AssemblySequence, cut1: Window, cut2: Window, k: int
) -> Assembly:
    """Repeat the segment between the cuts `k` extra times.

    Everything on the seed side of `cut1` stays in place, k translated
    copies of the inter-cut segment are laid down marching in the
    cut1-to-cut2 direction, and the tail beyond `cut2` is reattached
    shifted out by k periods.  Any placement landing on a cell that stays
    raises CollisionDuringPump; the final assembly is replay-validated.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    s = seq.system
    c = _translation(cut1, cut2)
    movie_1 = window_movie(seq, cut1)
    movie_2 = window_movie(seq, cut2)
    if movie_2.translate(-c[0], -c[1]) != movie_1:
        raise MovieMismatch("cut movies do not align; nothing to pump")
    alpha = seq.replay()
    _, far_1 = _halves(alpha, cut1, s.seed)
    _, far_2 = _halves(alpha, cut2, s.seed)
    if not set(far_2) < set(far_1):
        raise ValueError("cut2 must lie beyond cut1, away from the seed")
    segment = {loc: t for loc, t in far_1.items() if loc not in far_2}
    out = {loc: t for loc, t in alpha.items() if loc not in far_2}
    tail = list(far_2.items())
    for j in range(1, k + 1):
        shift = (c[0] * j, c[1] * j)
        for (x, y), t in segment.items():
            loc = (x + shift[0], y + shift[1])
            if loc in out:
                raise CollisionDuringPump(loc)
            out[loc] = t
    shift = (c[0] * k, c[1] * k)
    for (x, y), t in tail:
        loc = (x + shift[0], y + shift[1])
        if loc in out:
            raise CollisionDuringPump(loc)
        out[loc] = t
    pumped = Assembly(out)
    if greedy_replay(s, pumped) is None:
        raise SpliceReplayError("pumped assembly does not replay")
    return pumped


@dataclass(frozen=True)
class PumpingParameters:
    """Path-pumping threshold for a simulator with `g` glue types at scale
    `m`: a one-tile-wide simulated path confined to a corridor of width 6m
    must repeat a window movie within length p."""

    g: int
    m: int
    p: int

    @classmethod
    def for_simulator(cls, g: int, m: int) -> "PumpingParameters":
        if g < 0 or m < 1:
            raise ValueError("need g >= 0 and m >= 1")
        p = ((g + 1) ** (6 * m) * factorial(6 * m) + 1) * 6 + 1
        return cls(g, m, p)
