"""Tile self-assembly at temperature tau: dynamics, simulation checking, and
seed-structure compilers at scales 4 and 3."""

from tileforge.core import (
    Assembly,
    AssemblySequence,
    AttachmentError,
    BudgetExceeded,
    Direction,
    Glue,
    GlueConflictError,
    NULL_GLUE,
    TileSystem,
    TileType,
    Verdict,
    attach,
    binding_graph,
    enumerate_producible,
    equivalent_modulo,
    frontier,
    interaction_strength,
    is_tau_stable,
    producible_shapes,
    terminal_shapes,
)
from tileforge.wml import (
    CollisionDuringPump,
    MovieMismatch,
    MovieRecord,
    PumpingParameters,
    SpliceReplayError,
    Window,
    WindowMovie,
    find_pumpable,
    greedy_replay,
    pump,
    splice,
    window_movie,
)
from tileforge.scale4 import (
    GeneratedSystem,
    MalformedSeed,
    MinimalGlueSet,
    OriginCase,
    SpanningTree,
    SupertileTemplate4,
    TemplateGap,
    assign_templates4,
    classify_origin,
    core_tour,
    emit_seed_tiles4,
    emit_supertile_tiles4,
    expand_io,
    minimal_glue_sets,
    origin_location,
    perimeter_walk,
    simulation_instance,
    spanning_tree,
    tile_bound4,
    transform_scale4,
)
from tileforge.scale3 import (
    C_CELL3,
    EdgeRemovalPlan,
    PerimeterNode,
    Scale3Template,
    assign_templates3,
    combine_noncyclic,
    emit_seed_tiles3,
    emit_supertile_tiles3,
    plan_edge_removal,
    spanning_tree3,
    tile_bound3,
    transform_scale3,
)
from tileforge.simrel import (
    ClassifierMonotonicityError,
    Discrepancy,
    FunctionClassifier,
    FuzzClass,
    IdentityClassifier,
    MBlock,
    SimulationInstance,
    TableClassifier,
    build_context,
    check_equiv_productions_minus,
    check_equiv_productions_modulo,
    check_follows,
    check_models,
    check_seed_first,
    check_seed_growth,
    check_shape_simulation,
    classify_fuzz,
    identity_instance,
    mblock_at,
    represent,
)

__all__ = [
    "Assembly",
    "AssemblySequence",
    "AttachmentError",
    "BudgetExceeded",
    "Direction",
    "Glue",
    "GlueConflictError",
    "NULL_GLUE",
    "TileSystem",
    "TileType",
    "Verdict",
    "attach",
    "binding_graph",
    "enumerate_producible",
    "equivalent_modulo",
    "frontier",
    "interaction_strength",
    "is_tau_stable",
    "producible_shapes",
    "terminal_shapes",
    "ClassifierMonotonicityError",
    "Discrepancy",
    "FunctionClassifier",
    "FuzzClass",
    "IdentityClassifier",
    "MBlock",
    "SimulationInstance",
    "TableClassifier",
    "build_context",
    "check_equiv_productions_minus",
    "check_equiv_productions_modulo",
    "check_follows",
    "check_models",
    "check_seed_first",
    "check_seed_growth",
    "check_shape_simulation",
    "classify_fuzz",
    "identity_instance",
    "mblock_at",
    "represent",
    "CollisionDuringPump",
    "MovieMismatch",
    "MovieRecord",
    "PumpingParameters",
    "SpliceReplayError",
    "Window",
    "WindowMovie",
    "find_pumpable",
    "greedy_replay",
    "pump",
    "splice",
    "window_movie",
    "GeneratedSystem",
    "MalformedSeed",
    "MinimalGlueSet",
    "OriginCase",
    "SpanningTree",
    "SupertileTemplate4",
    "TemplateGap",
    "assign_templates4",
    "classify_origin",
    "core_tour",
    "emit_seed_tiles4",
    "emit_supertile_tiles4",
    "expand_io",
    "minimal_glue_sets",
    "origin_location",
    "perimeter_walk",
    "simulation_instance",
    "spanning_tree",
    "tile_bound4",
    "transform_scale4",
    "C_CELL3",
    "EdgeRemovalPlan",
    "PerimeterNode",
    "Scale3Template",
    "assign_templates3",
    "combine_noncyclic",
    "emit_seed_tiles3",
    "emit_supertile_tiles3",
    "plan_edge_removal",
    "spanning_tree3",
    "tile_bound3",
    "transform_scale3",
]
