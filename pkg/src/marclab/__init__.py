"""Rearrangements, Marcinkiewicz quasinorms and noncompactness certificates for step functions."""

from .errors import (DomainError, MarclabError, NonAdmissibleError, OverlapError,
                     PreconditionError, SchemaError)
from .numerics import DEFAULT_POLICY, NumericPolicy
from .phi import (Majorant, PhiClassification, PowerLogPhi, TabulatedPhi, classify_phi,
                  eval_phi, least_quasiconcave_majorant, majorant, parse_phi, phi_from_json)
from .stepfn import (DecreasingProfile, MaximalProfile, Piece, StepFunction, disjoint_sum,
                     maximal_rearrangement, rearrangement)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_POLICY", "DecreasingProfile", "DomainError", "Majorant", "MarclabError",
    "MaximalProfile", "NonAdmissibleError", "NumericPolicy", "OverlapError", "PhiClassification",
    "Piece", "PowerLogPhi", "PreconditionError", "SchemaError", "StepFunction", "TabulatedPhi",
    "classify_phi", "disjoint_sum", "eval_phi", "least_quasiconcave_majorant", "majorant",
    "maximal_rearrangement", "parse_phi", "phi_from_json", "rearrangement",
]
