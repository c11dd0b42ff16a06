"""String-problem oracles and their divide-and-conquer decompositions."""

from .costmodel import cost_model
from .kcs import (
    DecompositionCheck,
    MaxCriticalReport,
    SubproblemSignature,
    WitnessGraph,
    WitnessValidationError,
    all_witnesses,
    block_bounds,
    block_of,
    compatible,
    composite_brute,
    composite_decide,
    composite_dp,
    critical_block_hit,
    critical_count,
    critical_set,
    extremal_signature,
    kcs_decide,
    kcs_decompose_check,
    lcs_length,
    max_critical,
    minimal_p,
    minimal_p_linear,
    signature,
    validate_witness,
    witness_graph,
)
from .lis import (
    OracleInconsistencyError,
    classify_max_first,
    classify_min_last,
    lis_cross,
    lis_decide,
    lis_length,
    lis_recursion_holds,
    max_first,
    min_last,
)
from .minsub import (
    PrefixOccurrences,
    minsub_cross,
    minsub_cross_brute,
    minsub_decide,
    minsub_positions,
    minsub_recursion_decide,
    rotation_brute,
    rotation_decide,
    suffix_brute,
    suffix_decide,
)
from .querystring import STAR, QueryString, parse_symbols, read_all, removal_transform
from .regular import (
    regular_brute,
    regular_cross,
    regular_cross_brute,
    regular_decide,
    regular_recursion_holds,
)

__all__ = [
    "DecompositionCheck",
    "MaxCriticalReport",
    "OracleInconsistencyError",
    "PrefixOccurrences",
    "QueryString",
    "STAR",
    "SubproblemSignature",
    "WitnessGraph",
    "WitnessValidationError",
    "all_witnesses",
    "block_bounds",
    "block_of",
    "classify_max_first",
    "classify_min_last",
    "compatible",
    "composite_brute",
    "composite_decide",
    "composite_dp",
    "cost_model",
    "critical_block_hit",
    "critical_count",
    "critical_set",
    "extremal_signature",
    "kcs_decide",
    "kcs_decompose_check",
    "lcs_length",
    "lis_cross",
    "lis_decide",
    "lis_length",
    "lis_recursion_holds",
    "max_critical",
    "max_first",
    "min_last",
    "minimal_p",
    "minimal_p_linear",
    "minsub_cross",
    "minsub_cross_brute",
    "minsub_decide",
    "minsub_positions",
    "minsub_recursion_decide",
    "parse_symbols",
    "read_all",
    "regular_brute",
    "regular_cross",
    "regular_cross_brute",
    "regular_decide",
    "regular_recursion_holds",
    "removal_transform",
    "rotation_brute",
    "rotation_decide",
    "signature",
    "suffix_brute",
    "suffix_decide",
    "validate_witness",
    "witness_graph",
]
