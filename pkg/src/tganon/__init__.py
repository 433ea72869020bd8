"""k-degree anonymization of temporal graphs.

Make every node of a multi-slice graph share its whole temporal degree
vector with at least k-1 others, repair the result so each slice is
realizable as a simple graph, and rebuild slices that stay close to the
original topology.
"""

from .anonymizer import (
    AnonymityGrouping,
    AnonymizationOutcome,
    AnonymizerConfig,
    assign_residual,
    degree_anonymization,
    exact_assignment,
    greedy_assignment,
    set_median,
)
from .constructor import build_slice, build_temporal, havel_hakimi_slice
from .graph_core import (
    EdgeListFormatError,
    TemporalGraph,
    degree_distance,
    degree_matrix,
    dump_temporal_edgelist,
    edge_edit_count,
    edit_distance_lower_bound,
    is_k_anonymous,
    load_temporal_edgelist,
    normalized_cost,
    read_temporal_edgelist,
    rebucket,
    write_temporal_edgelist,
)
from .metrics import (
    NonConvergenceError,
    cosine_similarity,
    pagerank,
    temporal_correlation,
    utility_report,
)
from .pipeline import PipelineResult, run_pipeline
from .realizability import (
    GroupDegreeProfile,
    enforce_realizability,
    fix_parity,
    is_realizable,
    repair_degree_matrix,
    repair_profile,
)
from .synthgen import generate

__version__ = "0.1.0"

__all__ = [
    "AnonymityGrouping",
    "AnonymizationOutcome",
    "AnonymizerConfig",
    "EdgeListFormatError",
    "GroupDegreeProfile",
    "NonConvergenceError",
    "PipelineResult",
    "TemporalGraph",
    "assign_residual",
    "build_slice",
    "build_temporal",
    "cosine_similarity",
    "degree_anonymization",
    "degree_distance",
    "degree_matrix",
    "dump_temporal_edgelist",
    "edge_edit_count",
    "edit_distance_lower_bound",
    "enforce_realizability",
    "exact_assignment",
    "fix_parity",
    "generate",
    "greedy_assignment",
    "havel_hakimi_slice",
    "is_k_anonymous",
    "is_realizable",
    "load_temporal_edgelist",
    "normalized_cost",
    "pagerank",
    "read_temporal_edgelist",
    "rebucket",
    "repair_degree_matrix",
    "repair_profile",
    "run_pipeline",
    "set_median",
    "temporal_correlation",
    "utility_report",
    "write_temporal_edgelist",
    "__version__",
]
