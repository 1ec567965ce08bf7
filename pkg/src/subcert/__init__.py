"""subcert: monotone submodular maximization under cardinality constraints
with instance-specific upper-bound certificates.

Solvers (greedy and friends) produce a value; the dual bounds produce a
provable cap on the unknown optimum; the ratio of the two is a per-instance
approximation guarantee usually far above the worst-case 1 − 1/e.
"""

from .bipartite import BipartiteGraph, GraphError
from .objectives import (
    Oracle,
    ShiftedOracle,
    additive_oracle,
    adversarial_instance,
    as_elements,
    check_oracle,
    counted,
    coverage_oracle,
    entropy_oracle,
    facility_location_oracle,
    movie_rec_oracle,
    movie_rec_power_oracle,
    revenue_oracle,
    shift,
    weighted_coverage_oracle,
)
from .maximizers import (
    EnumerationCapError,
    GreedyTrace,
    brute_force_opt,
    brute_force_schedule,
    greedy,
    local_search,
    random_greedy,
    sample_greedy,
)
from .dual_coverage import (
    CoveragePartition,
    additive_dual_bound,
    coverage_partition,
    dual_values,
    ell,
    exact_max_coverage,
    exact_min_cover,
    partition_dual_bound,
)
from .dual_submodular import (
    UpperBoundCert,
    ValuePartition,
    default_pivots,
    dual,
    method3,
)
from .benchmarks import (
    CurvatureEstimate,
    SharpnessProfile,
    curvature_exact,
    curvature_guarantee,
    curvature_heuristic,
    marginal_bound,
    sharpness_factor,
    sharpness_guarantee,
    topk_bound,
)
from .harness import (
    BoundReport,
    ExperimentConfig,
    emit,
    generate,
    load_bipartite,
    load_config,
    load_matrix,
    parse_objective,
    random_bipartite,
    run,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
