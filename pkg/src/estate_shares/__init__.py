"""Exact shares of an estate split between legitimate and illegitimate children."""

from .estate_model import (
    ConservationViolation,
    EstateError,
    FamilyComposition,
    FractionOutOfRange,
    LastLegitimateChild,
    MalformedRatio,
    Method,
    MethodNotApplicable,
    Mistress,
    NegativeCount,
    NoIllegitimateChild,
    OpCount,
    PreconditionError,
    Ratio,
    ShareBreakdown,
    SingleLine,
    TooLargeForOracle,
    ValidationError,
    ZeroFraction,
    ZeroLegitimate,
    format_decimal,
    format_ratio,
    parse_ratio,
    validate,
)
from .multi_mistress import breakdown, legitimate_share, share_multisum, share_recursive
from .oracle import oracle_share
from .single_line import (
    add_illegitimate,
    delegitimize,
    illegitimate_share,
    legitimize,
    naive_share,
    share_backward,
    share_closed_form,
    share_incremental,
    share_series,
)

__version__ = "0.1.0"
