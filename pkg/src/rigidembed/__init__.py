"""Minimally rigid graphs, their embedding counts, and real-count maximization."""

__version__ = "1.0.0"

from .graphs import (
    PLANE,
    SPACE,
    SPHERE,
    RigidGraph,
    classify_last_move,
    enumerate_minimally_rigid,
    is_globally_rigid_generic,
    maxwell_check,
)
from .systems import LengthAssignment, SphereSystemShape, build_sphere_system
from .solve import (
    SolutionSet,
    count_real,
    monodromy_solve,
    cm_monodromy_solve,
    parameter_homotopy,
    seed_realization,
)
from .cayley import (
    build_cm_system,
    check_side_conditions,
    embedding_side_report,
    find_cm_square_subsystems,
)
from .sampler import (
    CouplerSubgraph,
    SearchConfig,
    find_coupler_subgraphs,
    heuristic_starts,
    linear_search,
    sample_subgraph,
    stochastic_walk,
    trace_coupler_curve,
    tree_search,
)
from .bounds import GluingSpec, asymptotic_base, glued_lower_bound, preset
from .catalog import CatalogEntry, get_entry, load_catalog

__all__ = [
    "PLANE",
    "SPACE",
    "SPHERE",
    "RigidGraph",
    "LengthAssignment",
    "SphereSystemShape",
    "SolutionSet",
    "CatalogEntry",
    "CouplerSubgraph",
    "SearchConfig",
    "GluingSpec",
    "asymptotic_base",
    "build_cm_system",
    "build_sphere_system",
    "check_side_conditions",
    "classify_last_move",
    "cm_monodromy_solve",
    "count_real",
    "embedding_side_report",
    "enumerate_minimally_rigid",
    "find_cm_square_subsystems",
    "find_coupler_subgraphs",
    "get_entry",
    "glued_lower_bound",
    "heuristic_starts",
    "is_globally_rigid_generic",
    "linear_search",
    "load_catalog",
    "maxwell_check",
    "monodromy_solve",
    "parameter_homotopy",
    "preset",
    "sample_subgraph",
    "seed_realization",
    "stochastic_walk",
    "trace_coupler_curve",
    "tree_search",
]
