"""Block representation and bounded checking of simulation relations.

One system simulates another at scale m by letting each m x m block of its
assemblies stand for a single tile.  A classifier turns blocks into simulated
tiles; lifting it cell-wise turns simulator assemblies into simulated ones.
On top of that representation sit seven relation checkers, from bare shape
agreement up to seed-first simulation.  All of them are bounded model checks:
both systems are explored breadth-first up to size bounds, obligations are
discharged against those state spaces, and every verdict is three-valued.  A
failure always carries a concrete discrepancy; a pass is only issued when
both explorations were exhaustive, otherwise the verdict is inconclusive.

Classifier sanity is a precondition, not a verdict: a classifier caught
assigning different tiles to nested blocks aborts the check with
ClassifierMonotonicityError, since every relation's meaning depends on block
assignments being stable under growth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from tileforge.core import (
    Assembly,
    Coord,
    DIRECTIONS,
    ExplorationReport,
    TileSystem,
    TileType,
    Verdict,
    attachment_strength,
    enumerate_producible,
)


class ClassifierMonotonicityError(Exception):
    """A block classifier changed its answer between nested blocks."""


@dataclass(frozen=True, slots=True)
class MBlock:
    """Partial m x m tile placement with offsets in {0..m-1} squared."""

    m: int
    cells: tuple  # sorted ((i, j), TileType)

    def __post_init__(self):
        for (i, j), _ in self.cells:
            if not (0 <= i < self.m and 0 <= j < self.m):
                raise ValueError(f"offset ({i}, {j}) outside scale {self.m}")

    def at(self, i: int, j: int) -> Optional[TileType]:
        for off, tile in self.cells:
            if off == (i, j):
                return tile
        return None

    @property
    def is_empty(self) -> bool:
        return not self.cells

    @property
    def domain(self) -> frozenset:
        return frozenset(off for off, _ in self.cells)

    def sub_block_of(self, other: "MBlock") -> bool:
        return self.m == other.m and set(self.cells) <= set(other.cells)


def mblock_at(a: Assembly, m: int, bx: int, by: int) -> MBlock:
    """The m-block of `a` at block coordinates (bx, by)."""
    if m < 1:
        raise ValueError("scale must be positive")
    cells = []
    for j in range(m):
        for i in range(m):
            t = a.at((m * bx + i, m * by + j))
            if t is not None:
                cells.append(((i, j), t))
    return MBlock(m, tuple(cells))


class IdentityClassifier:
    """Scale-1 classifier mapping each singleton block to its own tile."""

    m = 1
    audit_chains = False

    def classify(self, block: MBlock) -> Optional[TileType]:
        return block.at(0, 0)


@dataclass(frozen=True)
class TableClassifier:
    """Finite-resolution classifier: a block maps to tile `out` as soon as it
    contains some instant cell (offset, tile) of `out`.

    Monotone by construction: instants can only appear as a block grows, and
    two instants resolving one block to different tiles raise instead of
    guessing.  This is the form the seed compilers emit.
    """

    m: int
    table: tuple  # sorted (((i, j), TileType), TileType)
    audit_chains = False

    @classmethod
    def from_entries(cls, m: int, entries) -> "TableClassifier":
        rows = sorted(
            entries.items() if hasattr(entries, "items") else entries,
            key=lambda row: (row[0][0], row[0][1].name, row[1].name),
        )
        return cls(m, tuple(rows))

    def classify(self, block: MBlock) -> Optional[TileType]:
        outs = {}
        for (off, tile), out in self.table:
            if block.at(*off) == tile:
                outs.setdefault(out, (off, tile))
        if len(outs) > 1:
            raise ClassifierMonotonicityError(
                f"block resolves to {sorted(t.name for t in outs)}"
            )
        return next(iter(outs)) if outs else None


@dataclass(frozen=True)
class FunctionClassifier:
    """User-supplied classifier; sampled for monotonicity during checks."""

    m: int
    fn: Callable[[MBlock], Optional[TileType]]
    audit_chains: bool = True

    def classify(self, block: MBlock) -> Optional[TileType]:
        return self.fn(block)


def audit_classifier(classifier, blocks) -> None:
    """Spot-check monotonicity on removal chains of the given blocks.

    For each block, cells are removed one at a time (in two fixed orders);
    along the resulting chain of nested blocks the classification, once
    defined, must stay identical all the way up.  Full verification over all
    sub-blocks is exponential, so this is sampling, not proof.
    """
    for block in blocks:
        for order in (sorted(block.cells), sorted(block.cells, reverse=True)):
            chain = []
            for k in range(len(order) + 1):
                sub = MBlock(block.m, tuple(sorted(order[:k])))
                chain.append(classifier.classify(sub))
            defined = [
                (k, v) for k, v in enumerate(chain) if v is not None
            ]
            if not defined:
                continue
            first_k, first_v = defined[0]
            for k in range(first_k, len(chain)):
                if chain[k] != first_v:
                    raise ClassifierMonotonicityError(
                        f"classification changed from {first_v.name} along "
                        f"a growth chain at step {k}"
                    )


@dataclass(frozen=True)
class SimulationInstance:
    """Everything a relation check needs: the simulated system, the
    simulator, the scale, the block classifier, and which (block, offset)
    cells are allowed to hold cheating fuzz (none by default)."""

    simulated: TileSystem
    simulator: TileSystem
    m: int
    classifier: object
    declared_cheating_fuzz: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("scale must be positive")
        if getattr(self.classifier, "m", self.m) != self.m:
            raise ValueError("classifier scale disagrees with instance scale")


def identity_instance(system: TileSystem) -> SimulationInstance:
    """A system simulating itself at scale 1; the baseline every checker
    must accept."""
    return SimulationInstance(system, system, 1, IdentityClassifier())


def represent(inst: SimulationInstance, a: Assembly) -> Assembly:
    """Lift the block classifier over a whole assembly.

    Total: blocks the classifier declines map to empty space, so the result
    is just the partial assembly of resolved blocks (in block coordinates).
    """
    m = inst.m
    out = {}
    seen = set()
    for (x, y) in a.locations():
        b = (x // m, y // m)
        if b in seen:
            continue
        seen.add(b)
        t = inst.classifier.classify(mblock_at(a, m, *b))
        if t is not None:
            out[b] = t
    return Assembly(out)


class FuzzClass(Enum):
    LEGAL = "legal"
    DIAGONAL = "diagonal"
    CHEATING = "cheating"

    def __repr__(self):
        return self.name


def occupied_blocks(a: Assembly, m: int) -> set:
    return {(x // m, y // m) for (x, y) in a.locations()}


def _fuzz_blocks(image: Assembly, occupied: set) -> dict:
    """Classify every occupied block that does not resolve to a tile.

    Legal fuzz touches a mapped block whose simulated tile presents a glue
    toward it; cheating fuzz touches mapped blocks but no glue ever faces
    it; anything reachable only diagonally (or not at all) is diagonal
    fuzz.
    """
    out = {}
    for f in sorted(occupied):
        if f in image:
            continue
        orth = [(d, d.step(f)) for d in DIRECTIONS if d.step(f) in image]
        if orth:
            presents = any(
                not image.at(nb).side(d.opposite).is_null for d, nb in orth
            )
            out[f] = FuzzClass.LEGAL if presents else FuzzClass.CHEATING
        else:
            out[f] = FuzzClass.DIAGONAL
    return out


def classify_fuzz(inst: SimulationInstance, a: Assembly):
    """(clean, per-block fuzz classes) for one simulator assembly.

    `clean` is the no-diagonal-fuzz condition; whether cheating fuzz is
    tolerated is a property of the instance (its declared cell set) and is
    judged by the relation checkers, not here.
    """
    image = represent(inst, a)
    fuzz = _fuzz_blocks(image, occupied_blocks(a, inst.m))
    clean = all(c is not FuzzClass.DIAGONAL for c in fuzz.values())
    return clean, fuzz


@dataclass(frozen=True)
class Discrepancy:
    """One concrete reason a relation check failed, with enough payload to
    re-derive the failure (assemblies, blocks, tiles as applicable)."""

    kind: str
    details: tuple = ()

    def __repr__(self):
        return f"Discrepancy({self.kind!r})"


@dataclass
class CheckContext:
    """Shared bounded explorations of both systems plus the lifted images.

    `images` maps every explored simulator assembly to its represented
    assembly; `preimages` inverts that; `reverse_edges` inverts the
    simulator's attachment DAG for backward reachability.
    """

    inst: SimulationInstance
    report_simulated: ExplorationReport
    report_simulator: ExplorationReport
    images: dict
    preimages: dict
    reverse_edges: dict
    _fuzz_cache: dict = field(default_factory=dict)

    def fuzz_problem(self, a: Assembly) -> Optional[Discrepancy]:
        """First fuzz violation of `a`: diagonal fuzz, or cheating fuzz on
        a cell the instance did not declare."""
        if a in self._fuzz_cache:
            return self._fuzz_cache[a]
        inst = self.inst
        m = inst.m
        image = self.images[a]
        fuzz = _fuzz_blocks(image, occupied_blocks(a, m))
        problem = None
        for f in sorted(fuzz):
            if fuzz[f] is FuzzClass.DIAGONAL:
                problem = Discrepancy("diagonal-fuzz", (a, f))
                break
            if fuzz[f] is FuzzClass.CHEATING:
                for (x, y) in sorted(a.locations()):
                    if (x // m, y // m) != f:
                        continue
                    off = (x - m * f[0], y - m * f[1])
                    if (f, off) not in inst.declared_cheating_fuzz:
                        problem = Discrepancy(
                            "undeclared-cheating-fuzz", (a, f, off)
                        )
                        break
                if problem:
                    break
        self._fuzz_cache[a] = problem
        return problem


def build_context(
    inst: SimulationInstance,
    bound_simulated: int,
    bound_simulator: int,
    max_states: Optional[int] = None,
) -> CheckContext:
    """Explore both systems and lift every simulator assembly through the
    classifier, reclassifying only the touched block along each attachment
    edge.  Monotonicity violations surface here, either directly (a block's
    assignment changed) or via the sampled chain audit."""
    report_t = enumerate_producible(inst.simulated, bound_simulated, max_states)
    report_s = enumerate_producible(inst.simulator, bound_simulator, max_states)
    m = inst.m
    classifier = inst.classifier
    blocks_seen = set()
    image_cache: dict = {}

    def canon(d: dict) -> Assembly:
        key = frozenset(d.items())
        got = image_cache.get(key)
        if got is None:
            got = Assembly(dict(d))
            image_cache[key] = got
        return got

    def classify(a: Assembly, b: Coord) -> Optional[TileType]:
        block = mblock_at(a, m, *b)
        blocks_seen.add(block)
        return classifier.classify(block)

    images = {}
    for a in sorted(report_s.assemblies, key=len):
        entry = report_s.parent_step.get(a)
        if entry is None:
            d = {}
            for b in sorted(occupied_blocks(a, m)):
                t = classify(a, b)
                if t is not None:
                    d[b] = t
        else:
            parent, (loc, _) = entry
            d = dict(images[parent].placements)
            b = (loc[0] // m, loc[1] // m)
            t = classify(a, b)
            old = d.get(b)
            if old is not None and t != old:
                raise ClassifierMonotonicityError(
                    f"block {b} changed from "
                    f"{old.name} to {t.name if t else 'empty'} during growth"
                )
            if t is not None:
                d[b] = t
        images[a] = canon(d)

    if getattr(classifier, "audit_chains", False):
        audit_classifier(classifier, sorted(blocks_seen, key=lambda b: b.cells))

    preimages: dict = {}
    for a, img in images.items():
        preimages.setdefault(img, []).append(a)
    for v in preimages.values():
        v.sort(key=lambda x: (len(x), x.sort_token()))

    reverse: dict = {}
    for parent, steps in report_s.edges.items():
        for _, child in steps:
            reverse.setdefault(child, []).append(parent)

    return CheckContext(
        inst=inst,
        report_simulated=report_t,
        report_simulator=report_s,
        images=images,
        preimages=preimages,
        reverse_edges=reverse,
    )


def _ordered(assemblies):
    return sorted(assemblies, key=lambda a: (len(a), a.sort_token()))


def _sub_assembly(a: Assembly, b: Assembly) -> bool:
    return a.key <= b.key


def _finish(fail: Optional[Verdict], ctx: CheckContext, what: str) -> Verdict:
    if fail is not None:
        return fail
    if ctx.report_simulated.truncated or ctx.report_simulator.truncated:
        return Verdict.inconclusive(
            f"{what} holds on the explored states, but exploration was "
            "truncated"
        )
    return Verdict.passed(f"{what} verified over the full production sets")


def check_shape_simulation(
    inst: SimulationInstance,
    bound_simulated: int,
    bound_simulator: int,
    max_states: Optional[int] = None,
    ctx: Optional[CheckContext] = None,
) -> Verdict:
    """Terminal assemblies of the simulator must map cleanly onto exactly
    the terminal shapes of the simulated system."""
    ctx = ctx or build_context(inst, bound_simulated, bound_simulator, max_states)
    rt, rs = ctx.report_simulated, ctx.report_simulator
    term_shapes = {frozenset(a.domain) for a in rt.terminal}
    realized = set()
    for a in _ordered(rs.terminal):
        problem = ctx.fuzz_problem(a)
        if problem is not None:
            return Verdict.failed(problem, "terminal assembly maps uncleanly")
        shape = frozenset(ctx.images[a].domain)
        realized.add(shape)
        # exploration is exhaustive for every size within the bound, so a
        # missing small shape is missing for good
        if shape not in term_shapes and (rt.complete or len(shape) <= rt.bound):
            return Verdict.failed(
                Discrepancy("shape-not-simulated", (a, ctx.images[a])),
                "simulator terminal maps to a shape the simulated system "
                "never finishes with",
            )
    if rs.complete:
        for t in _ordered(rt.terminal):
            if frozenset(t.domain) not in realized:
                return Verdict.failed(
                    Discrepancy("shape-unrealized", (t,)),
                    "no simulator terminal maps to this terminal shape",
                )
    return _finish(None, ctx, "shape agreement")


def _producibility_failure(
    ctx: CheckContext, image: Assembly, source: Assembly, kind: str
) -> Optional[Discrepancy]:
    """Is `image` certainly outside the simulated production set?"""
    rt = ctx.report_simulated
    if image in rt.assemblies:
        return None
    if rt.complete or len(image) <= rt.bound:
        return Discrepancy(kind, (source, image))
    return None  # too large for the bound: unknown


def check_equiv_productions_modulo(
    inst: SimulationInstance,
    bound_simulated: int,
    bound_simulator: int,
    max_states: Optional[int] = None,
    ctx: Optional[CheckContext] = None,
) -> Verdict:
    """Production sets agree once sub-seed images are allowed: every
    simulator assembly maps into prod(simulated) or below its seed, every
    simulated producible is realized, terminal sets map onto terminal
    assemblies exactly, and all mapping is clean."""
    ctx = ctx or build_context(inst, bound_simulated, bound_simulator, max_states)
    rt, rs = ctx.report_simulated, ctx.report_simulator
    sigma = inst.simulated.seed

    for a in _ordered(rs.assemblies):
        problem = ctx.fuzz_problem(a)
        if problem is not None:
            return Verdict.failed(problem, "assembly maps uncleanly")

    for image in _ordered(ctx.preimages):
        if _sub_assembly(image, sigma):
            continue
        problem = _producibility_failure(
            ctx, image, ctx.preimages[image][0], "image-not-producible"
        )
        if problem is not None:
            return Verdict.failed(
                problem, "simulator reaches an image the simulated system "
                "cannot produce"
            )

    if rs.complete:
        for t in _ordered(rt.assemblies):
            if t not in ctx.preimages:
                return Verdict.failed(
                    Discrepancy("image-unrealized", (t,)),
                    "no simulator assembly maps to this producible assembly",
                )

    fail = _terminal_set_failure(ctx)
    if fail is not None:
        return fail
    return _finish(None, ctx, "production equivalence modulo the seed")


def _terminal_set_failure(ctx: CheckContext) -> Optional[Verdict]:
    """Shared condition: simulator terminals map exactly onto simulated
    terminal assemblies."""
    rt, rs = ctx.report_simulated, ctx.report_simulator
    realized = set()
    for a in _ordered(rs.terminal):
        image = ctx.images[a]
        realized.add(image)
        if image in rt.terminal:
            continue
        if image in rt.assemblies:
            return Verdict.failed(
                Discrepancy("terminal-image-not-terminal", (a, image)),
                "simulator halts on an image the simulated system can "
                "still grow",
            )
        if rt.complete or len(image) <= rt.bound:
            return Verdict.failed(
                Discrepancy("terminal-image-not-producible", (a, image)),
                "simulator halts on an image outside the simulated "
                "production set",
            )
    if rs.complete:
        for t in _ordered(rt.terminal):
            if t not in realized:
                return Verdict.failed(
                    Discrepancy("terminal-unrealized", (t,)),
                    "no simulator terminal maps to this terminal assembly",
                )
    return None


def _union_with_seed(image: Assembly, sigma: Assembly) -> Optional[Assembly]:
    """image with the simulated seed laid under it; None on a placement
    conflict (a seed location mapped to a different tile)."""
    d = dict(sigma.placements)
    for loc, tile in image.items():
        if d.get(loc, tile) != tile:
            return None
        d[loc] = tile
    return Assembly(d)


def check_equiv_productions_minus(
    inst: SimulationInstance,
    bound_simulated: int,
    bound_simulator: int,
    max_states: Optional[int] = None,
    ctx: Optional[CheckContext] = None,
) -> Verdict:
    """Production sets agree once the simulated seed is granted for free:
    seed locations may only ever map to their seed tiles, and images
    completed with the seed range over exactly prod(simulated)."""
    ctx = ctx or build_context(inst, bound_simulated, bound_simulator, max_states)
    rt, rs = ctx.report_simulated, ctx.report_simulator
    sigma = inst.simulated.seed

    for a in _ordered(rs.assemblies):
        problem = ctx.fuzz_problem(a)
        if problem is not None:
            return Verdict.failed(problem, "assembly maps uncleanly")

    unions = {}
    for image in _ordered(ctx.preimages):
        for loc in image.domain & sigma.domain:
            if image.at(loc) != sigma.at(loc):
                return Verdict.failed(
                    Discrepancy(
                        "seed-tile-mismatch",
                        (ctx.preimages[image][0], loc, image.at(loc)),
                    ),
                    "a seed location maps to the wrong tile",
                )
        u = _union_with_seed(image, sigma)
        unions[u] = image
        problem = _producibility_failure(
            ctx, u, ctx.preimages[image][0], "union-not-producible"
        )
        if problem is not None:
            return Verdict.failed(
                problem, "image plus seed is not producible in the "
                "simulated system"
            )

    if rs.complete:
        for t in _ordered(rt.assemblies):
            if t not in unions:
                return Verdict.failed(
                    Discrepancy("union-unrealized", (t,)),
                    "no simulator assembly's image plus seed equals this "
                    "producible assembly",
                )

    fail = _terminal_set_failure(ctx)
    if fail is not None:
        return fail
    return _finish(None, ctx, "production equivalence minus the seed")


def check_follows(
    inst: SimulationInstance,
    bound_simulated: int,
    bound_simulator: int,
    max_states: Optional[int] = None,
    ctx: Optional[CheckContext] = None,
) -> Verdict:
    """Every simulator attachment step, seen through the representation
    with the simulated seed granted, is a legal (possibly empty) growth of
    the simulated system."""
    ctx = ctx or build_context(inst, bound_simulated, bound_simulator, max_states)
    rs = ctx.report_simulator
    simulated = inst.simulated
    sigma = simulated.seed
    for parent in _ordered(rs.edges):
        img_parent = ctx.images[parent]
        for _, child in rs.edges[parent]:
            img_child = ctx.images[child]
            delta = img_child.key - img_parent.key
            if not delta:
                continue
            if len(delta) > 1 or not _sub_assembly(img_parent, img_child):
                raise ClassifierMonotonicityError(
                    "one attachment changed more than one block image"
                )
            ((bx, by, tile),) = delta
            loc = (bx, by)
            if loc in sigma:
                if sigma.at(loc) == tile:
                    continue
                return Verdict.failed(
                    Discrepancy("seed-conflict-step", (parent, child, loc, tile)),
                    "a step rewrites a seed location",
                )
            base = _union_with_seed(img_parent, sigma)
            if base is None or loc in base:
                return Verdict.failed(
                    Discrepancy("seed-conflict-step", (parent, child, loc, tile)),
                    "a step conflicts with the granted seed",
                )
            if attachment_strength(simulated, base, loc, tile) < simulated.temperature:
                return Verdict.failed(
                    Discrepancy("invalid-step", (parent, child, loc, tile)),
                    "a simulator step maps to an attachment the simulated "
                    "system does not allow",
                )
    if rs.truncated:
        return Verdict.inconclusive(
            "all explored steps are legal, but exploration was truncated"
        )
    return Verdict.passed("every simulator step maps to legal growth")


def check_models(
    inst: SimulationInstance,
    bound_simulated: int,
    bound_simulator: int,
    max_states: Optional[int] = None,
    ctx: Optional[CheckContext] = None,
) -> Verdict:
    """Dynamics are preserved: every producible simulated assembly has
    representatives, and from every representative each simulated
    follow-up remains reachable.

    The candidate set is taken to be all explored representatives, which
    settles the definition's second clause by reflexivity and makes the
    first clause the discriminating one: a representative from which some
    follow-up image is unreachable is a dead end and fails the check.
    Checking single attachment steps of the simulated system suffices,
    since multi-step reachability factors through them.
    """
    ctx = ctx or build_context(inst, bound_simulated, bound_simulator, max_states)
    rt, rs = ctx.report_simulated, ctx.report_simulator

    for alpha in _ordered(rt.assemblies):
        if alpha not in ctx.preimages and rs.complete:
            return Verdict.failed(
                Discrepancy("no-preimage", (alpha,)),
                "a producible simulated assembly has no representative",
            )

    backward: dict = {}

    def can_reach(beta: Assembly) -> set:
        """All simulator assemblies that grow into a representative of
        `beta` (multi-source backward closure over the attachment DAG)."""
        got = backward.get(beta)
        if got is None:
            seen = set(ctx.preimages.get(beta, ()))
            stack = list(seen)
            while stack:
                cur = stack.pop()
                for prev in ctx.reverse_edges.get(cur, ()):
                    if prev not in seen:
                        seen.add(prev)
                        stack.append(prev)
            backward[beta] = got = seen
        return got

    for alpha in _ordered(rt.edges):
        pis = ctx.preimages.get(alpha)
        if not pis:
            continue
        for _, beta in rt.edges[alpha]:
            reachers = can_reach(beta)
            for pi in pis:
                if pi not in reachers:
                    if rs.complete:
                        return Verdict.failed(
                            Discrepancy("stuck-preimage", (alpha, beta, pi)),
                            "a representative can no longer reach the next "
                            "simulated step",
                        )
                    break
    return _finish(None, ctx, "dynamics preservation")


def _combine(parts: list, what: str) -> Verdict:
    for name, v in parts:
        if v.status == Verdict.FAIL:
            return Verdict.failed(v.witness, f"{name}: {v.reason}")
    for name, v in parts:
        if v.status == Verdict.INCONCLUSIVE:
            return Verdict.inconclusive(f"{name}: {v.reason}")
    return Verdict.passed(f"{what}: " + "; ".join(name for name, _ in parts))


def check_seed_first(
    inst: SimulationInstance,
    bound_simulated: int,
    bound_simulator: int,
    max_states: Optional[int] = None,
    ctx: Optional[CheckContext] = None,
) -> Verdict:
    """Production equivalence modulo the seed, step legality, and dynamics
    preservation, over one shared pair of explorations."""
    ctx = ctx or build_context(inst, bound_simulated, bound_simulator, max_states)
    parts = [
        ("equiv-productions-modulo", check_equiv_productions_modulo(
            inst, bound_simulated, bound_simulator, ctx=ctx)),
        ("follows", check_follows(
            inst, bound_simulated, bound_simulator, ctx=ctx)),
        ("models", check_models(
            inst, bound_simulated, bound_simulator, ctx=ctx)),
    ]
    return _combine(parts, "seed-first simulation")


def check_seed_growth(
    inst: SimulationInstance,
    bound_simulated: int,
    bound_simulator: int,
    max_states: Optional[int] = None,
    ctx: Optional[CheckContext] = None,
) -> Verdict:
    """Production equivalence minus the seed, step legality, and dynamics
    preservation, over one shared pair of explorations."""
    ctx = ctx or build_context(inst, bound_simulated, bound_simulator, max_states)
    parts = [
        ("equiv-productions-minus", check_equiv_productions_minus(
            inst, bound_simulated, bound_simulator, ctx=ctx)),
        ("follows", check_follows(
            inst, bound_simulated, bound_simulator, ctx=ctx)),
        ("models", check_models(
            inst, bound_simulated, bound_simulator, ctx=ctx)),
    ]
    return _combine(parts, "seed-growth simulation")


def derived_implications(relation: str, verdict: Verdict) -> dict:
    """Verdicts that follow from a pass without re-running: seed-first
    implies seed-growth, and either implies shape simulation."""
    if verdict.status != Verdict.PASS:
        return {}
    out = {}
    if relation == "seed-first":
        out["seed-growth"] = Verdict.passed("implied by seed-first")
        out["shape"] = Verdict.passed("implied by seed-first")
    elif relation == "seed-growth":
        out["shape"] = Verdict.passed("implied by seed-growth")
    return out
