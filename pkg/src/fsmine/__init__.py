"""Frequent subgraph mining on a single labeled directed graph.

Candidates of size k are generated by merging frequent size-(k-1)
patterns; frequency is a greedy maximal-independent-set count whose
threshold interpolates between exactness and speed under a user slider.
Exact reference metrics are included for validation.
"""

from .canonical import (
    PATTERN_SIZE_CAP,
    CanonicalForm,
    SizeCapExceeded,
    apply_permutation,
    are_isomorphic,
    automorphism_group,
    canonical_form,
    canonical_key,
)
from .generation import (
    CoreGraph,
    CoreGroup,
    build_core_groups,
    core_graphs_of,
    find_automorphisms,
    generate_cliques,
    generate_new_patterns,
    is_clique,
    merge,
    remove_duplicates,
    seed_size2,
    size2_to_size3,
)
from .graphs import (
    DataGraph,
    FormatError,
    LabelTable,
    PatternGraph,
    articulation_vertices,
    extend_edge_labels,
    induced_pattern,
    is_connected,
    parse_lg,
    parse_pattern_lg,
    parse_snap_edges,
    serialize_lg,
)
from .matcher import (
    Embedding,
    MetricResult,
    count_mal,
    enumerate_all,
    is_valid_embedding,
    matching_order,
)
from .metrics import (
    EnumerationLimitError,
    MiningConfig,
    exact_mis,
    fractional_score,
    mni,
    tau,
)
from .miner import FrequentPattern, LevelStats, MiningReport, mine, size_bound

__all__ = [
    "PATTERN_SIZE_CAP",
    "CanonicalForm",
    "CoreGraph",
    "CoreGroup",
    "DataGraph",
    "Embedding",
    "EnumerationLimitError",
    "FormatError",
    "FrequentPattern",
    "LabelTable",
    "LevelStats",
    "MetricResult",
    "MiningConfig",
    "MiningReport",
    "PatternGraph",
    "SizeCapExceeded",
    "apply_permutation",
    "are_isomorphic",
    "articulation_vertices",
    "automorphism_group",
    "build_core_groups",
    "canonical_form",
    "canonical_key",
    "core_graphs_of",
    "count_mal",
    "enumerate_all",
    "exact_mis",
    "extend_edge_labels",
    "find_automorphisms",
    "fractional_score",
    "generate_cliques",
    "generate_new_patterns",
    "induced_pattern",
    "is_clique",
    "is_connected",
    "is_valid_embedding",
    "matching_order",
    "merge",
    "mine",
    "mni",
    "parse_lg",
    "parse_pattern_lg",
    "parse_snap_edges",
    "remove_duplicates",
    "seed_size2",
    "serialize_lg",
    "size2_to_size3",
    "size_bound",
    "tau",
]
