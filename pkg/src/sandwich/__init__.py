"""Exact continuous insertion between semicontinuous bounds.

Functions are piecewise linear on intervals, eventually periodic on the
one-point compactification of the naturals, or arbitrary on finite spaces.
All arithmetic is over exact rationals.
"""

from .compactc import exhaustive_extraction, extract_chain, extract_finite, verify_premise
from .errors import (
    DomainError,
    InternalInvariantError,
    NotSemicontinuousError,
    ParameterError,
    ParseError,
    PreconditionError,
    SandwichError,
    SeparationError,
)
from .extension import (
    Obstruction,
    check_obstruction,
    extend_lower,
    extend_upper,
    kt_pipeline,
    sublevel_closure,
    superlevel_closure,
)
from .funcspace import INFINITY, FiniteFunction, PLFunction, SeqFunction, distance, sup_norm
from .insertion import insert_gap, kt_compact, verify_certificate
from .semicont import (
    dilworth_witness,
    is_lsc,
    is_usc,
    lower_lipschitz,
    lsc_envelope,
    upper_lipschitz,
    usc_envelope,
)
from .stonew import interpolate_pair, sw_construct

__version__ = "0.1.0"

__all__ = [
    "DomainError", "FiniteFunction", "INFINITY", "InternalInvariantError", "NotSemicontinuousError",
    "Obstruction", "PLFunction", "ParameterError", "ParseError", "PreconditionError",
    "SandwichError", "SeparationError", "SeqFunction", "check_obstruction", "dilworth_witness",
    "distance", "exhaustive_extraction", "extend_lower", "extend_upper", "extract_chain",
    "extract_finite", "insert_gap", "interpolate_pair", "is_lsc", "is_usc", "kt_compact",
    "kt_pipeline", "lower_lipschitz", "lsc_envelope", "sublevel_closure", "sup_norm",
    "superlevel_closure", "sw_construct", "upper_lipschitz", "usc_envelope", "verify_certificate",
    "verify_premise",
]
