"""
Computational tools for naraforge.
Exports the operations used by the stages and the CLI.
"""

from .hp_arith import (
    PrecisionReal,
    RootBracket,
    ContinuedFraction,
    Convergent,
    real_root_alpha,
    binet_coefficient_a,
    cf_expand,
    convergent_exceeding,
    nearest_int_distance,
)
from .narayana_seq import SequenceCache, narayana, narayana_range, binet_residual
from .repdigit import (
    DigitString,
    ConcatPattern,
    SearchHit,
    to_digits,
    maximal_runs,
    three_block_patterns,
    reconstruct,
    search_hits,
)
from .baker_bounds import (
    MatveevInstance,
    LinearFormSpec,
    InitialBoundReport,
    matveev_lower_bound,
    lemma2_digit_bounds,
    ell_bound,
    m_bound,
    resolve_recursive_bound,
    initial_n_bound,
)
from .dp_reduction import (
    ReductionCase,
    ReductionOutcome,
    StepReport,
    ReductionSummary,
    reduce_case,
    step1,
    step2,
    step3,
    full_reduction,
)

__all__ = [
    'PrecisionReal',
    'RootBracket',
    'ContinuedFraction',
    'Convergent',
    'real_root_alpha',
    'binet_coefficient_a',
    'cf_expand',
    'convergent_exceeding',
    'nearest_int_distance',
    'SequenceCache',
    'narayana',
    'narayana_range',
    'binet_residual',
    'DigitString',
    'ConcatPattern',
    'SearchHit',
    'to_digits',
    'maximal_runs',
    'three_block_patterns',
    'reconstruct',
    'search_hits',
    'MatveevInstance',
    'LinearFormSpec',
    'InitialBoundReport',
    'matveev_lower_bound',
    'lemma2_digit_bounds',
    'ell_bound',
    'm_bound',
    'resolve_recursive_bound',
    'initial_n_bound',
    'ReductionCase',
    'ReductionOutcome',
    'StepReport',
    'ReductionSummary',
    'reduce_case',
    'step1',
    'step2',
    'step3',
    'full_reduction',
]
