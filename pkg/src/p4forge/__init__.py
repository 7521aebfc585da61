"""Enumeration, recognition, exact counting and uniform sampling of graph
families with restricted induced four-vertex paths."""

from .graphs import (
    LabeledGraph,
    PartialInjection,
    are_isomorphic,
    blossom_quotient,
    complement,
    count_occurrences,
    graph_from_json,
    graph_to_json,
    induced_subgraph,
    substitute,
)
from .trees import (
    DecoratedTree,
    canonical_tree,
    graph_of,
    induced_subtree,
    is_prime,
    modular_partition,
    tree_from_sexp,
    tree_to_sexp,
)
from .families import (
    CLASS_IDS,
    ClassSpec,
    classify_prime_decoration,
    get_class,
    is_member,
    is_member_definitional,
)
from .series import (
    ClassSeriesBundle,
    CountSeries,
    PowerSeries,
    blossomed_prime_series,
    brute_force_class_count,
    class_bundle,
    graph_count,
    prime_series,
    solve_nonjoin_series,
)
from .asymptotics import (
    K_prime,
    SingularityReport,
    find_R,
    growth_constant_C,
    kappa,
    occ_series,
    singularity_report,
    verifies_condition_A,
)
from .patterns import (
    PatternAssignment,
    assignment_series,
    brute_force_pattern_count,
    enumerate_trees,
    expected_occurrences_exact,
    pattern_series,
    subtree_probability_exact,
)
from .sampler import (
    SamplerTables,
    build_tables,
    empirical_stats,
    sample_graph,
    sample_prime_decoration,
    sample_tree,
)

__version__ = "1.0.0"
