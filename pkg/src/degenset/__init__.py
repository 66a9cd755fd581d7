"""Weighted kappa-degenerate sets, partial incentives and their lower bounds."""

from .bounds import (
    BoundReport,
    UndefinedPotential,
    bound_alpha,
    bound_beta,
    claim1_rhs,
    claim1b_rhs,
    potential_h1,
    potential_h2,
)
from .census import duality_sweep, expectation_sweep
from .degeneracy import (
    DegenWitness,
    NotDegenerate,
    ThresholdProfile,
    check_degenerate,
    dual_threshold,
    is_degenerate,
    is_dynamic_monopoly,
    simulate_activation,
)
from .extremal import (
    CensusConfig,
    CensusSummary,
    ExtremalReport,
    enumerate_and_verify,
    theorem1_predicate,
    theorem2_predicate,
    verify_instance,
)
from .graph import (
    DuplicateEdgeWarning,
    Graph,
    GraphFormatError,
    Instance,
    InstanceError,
    encode_graph6,
    parse_edge_list,
    parse_graph6,
    validate_instance,
)
from .greedy import (
    ALPHA_SET,
    INCENTIVES,
    IncentiveAssignment,
    InvariantViolation,
    ReducedInstance,
    expectation_by_enumeration,
    greedy_degenerate_set,
    greedy_incentives,
    monte_carlo_estimate,
    reduce_initial,
    reduce_terminal,
)
from .oracle import OracleCapExceeded, exact_alpha, exact_beta, is_initial, is_terminal

__version__ = "0.1.0"
