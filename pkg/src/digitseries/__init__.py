"""Digit-based sequences and the twisted series they define.

Series u(n) f(n) with exact rational terms are summed in ball arithmetic with
extrapolation over block partial sums. A catalog of closed-form identities
comes with a verifier.
"""

from .ball import Ball, ComplexBall
from .catalog import IdentityRecord, builtin_catalog, load_catalog, verify_identity
from .closed_forms import (
    SymbolicConstant,
    beta_numeric,
    beta_odd,
    euler_number,
    harmonic,
    paperfold_rhs,
    parse_constant,
    reduction_factor,
    shap_combination,
)
from .cyclo import CycloValue, parse_cyclo
from .digit_sequences import (
    DigitCounter,
    RecurrenceSeq,
    StrongMultSeq,
    digit_count,
    kronecker_minus_one,
    parse_sequence,
    partial_sum,
    recurrence_eval,
    strong_mult_eval,
)
from .errors import (
    DigitSeriesError,
    InadmissibleJob,
    NoConvergence,
    OverrideConflict,
    ParseError,
    PoleError,
    SignError,
    VerificationFailure,
)
from .rational_expr import RationalFn, analyze_decay, compose_affine, eval_exact, parse, rf_arith
from .summation import (
    SeriesJob,
    SumResult,
    eval_product,
    evaluate,
    sum_accelerated,
    sum_blocks,
    sum_direct,
    sum_log_term,
    tail_estimate,
)
from .terms import LinearTerm, LogTerm, parse_term

__version__ = "0.1.0"
