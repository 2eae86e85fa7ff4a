"""Anonymous, strategy-proof voting over subjective expected utility preferences.

A library and CLI for building the constant/simple/quasi-dictatorial/dyadic/
filtering voting factors, composing them over a partition of the state space,
and verifying anonymity, strategy-proofness, and range-unanimity with exact
rational arithmetic.
"""

from .axioms import (
    AchievableActs,
    AnonymityWitness,
    ManipulationWitness,
    RangeUnanimityWitness,
    SearchResult,
    VerificationReport,
    VerifyConfig,
    achievable_acts,
    check_anonymity,
    check_range_unanimity,
    replay_manipulation,
    search_manipulation,
    verify,
)
from .errors import (
    ConfigError,
    Diagnostic,
    DimensionMismatch,
    GenericityViolation,
    RealizationError,
    ResourceBudgetError,
    SuvoteError,
    ValidationError,
)
from .events import (
    Decomposition,
    Dipartition,
    FilterSeq,
    brute_force_decomposition,
    check_non_nested,
    dipartition_relation,
    find_top_triple,
    maximal_decomposition,
    validate_dipartition,
    validate_filter,
)
from .factors import (
    ConstantFactor,
    DyadicFactor,
    FilteringFactor,
    HTable,
    QuasiDictFactor,
    QuotaTable,
    SimpleFactor,
    evaluate_factor,
    factor_range,
    is_iso_filtering,
    validate_factor,
)
from .mechanism import (
    Cell,
    Mechanism,
    PairwiseMajority,
    evaluate_mechanism,
    evaluate_pairwise_majority,
    mechanism_range,
    validate_mechanism,
)
from .model import (
    Act,
    Belief,
    Event,
    FeasibilityMap,
    OutcomeSpace,
    Preference,
    Profile,
    StateSpace,
    Trilean,
    Valuation,
    check_genericity,
    concat,
    conditional_belief,
    eta,
    expected_utility,
    gen_profile,
    is_dominant,
    is_lexicographic,
    make_dominant,
    supporters,
    tau_top,
    theta_mix,
)
from .specfmt import ParseError, ParseResult, parse, serialize

__version__ = "0.1.0"
