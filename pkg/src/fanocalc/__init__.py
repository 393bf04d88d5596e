"""Exact basket calculus and birationality bounds for weak Q-Fano 3-folds."""

from .basket import (
    Basket,
    EmptyBasketError,
    FanoNumerics,
    InvalidPair,
    NonIntegralResult,
    OrbifoldPair,
    anti_plurigenus,
    cartier_index,
    deg_k3,
    format_rational,
    gamma,
    l_value,
    parse_rational,
    r_max,
    refine_k3_lower,
    sigma,
    sigma_prime,
    validate_basket,
)
from .claims import ClaimsReport, enumerative_claims_check
from .criteria import (
    INAPPLICABLE,
    CriterionParams,
    InvalidBeta,
    RationalBound,
    baseline_parameters,
    beta_bound,
    cmp_exceeds_sqrt,
    floor_add_sqrt,
    growth_min_m,
    n0_lower_bound,
    nonpencil_by_degree,
    nonpencil_by_slope,
    nonpencil_min_m,
    pencil_equality_analysis,
    plurigenus_lower_bound,
    sqrt_bound,
    two_system_bound,
)
from .geography import (
    BasketConstraints,
    NoAdmissibleBasket,
    PlurigenusFilter,
    UnboundedSearch,
    enumerate_baskets,
    min_positive_k3,
)
from .packing import (
    InitialCounts,
    PackingStep,
    descendants,
    dominates,
    domination_witness,
    initial_basket,
    initial_counts,
    prime_packings,
    unpack_pair,
)
from .replay import (
    Certificate,
    LedgerFormatError,
    Report,
    Scenario,
    VerificationFailure,
    certify_scenario,
    load_ledger,
    replay_ledger,
)
from .surd import QuadraticSurd

__version__ = "1.0.0"
