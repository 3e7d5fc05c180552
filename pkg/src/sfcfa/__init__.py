"""0CFA for lambda-calculus and the SK and SF combinatory calculi.

Terms are parsed and labelled by :mod:`sfcfa.terms`, reduced by
:mod:`sfcfa.reduction` and analysed by :mod:`sfcfa.cfa_sk`,
:mod:`sfcfa.cfa_sf` and :mod:`sfcfa.lam`.
"""
from .cfa_sf import analyze_sf, models_sf
from .cfa_sk import analyze_sk, models_sk
from .lam import analyze_lambda, lam_models, parse_lambda
from .reduction import evaluate
from .solver import Solution, check, solve
from .terms import Calculus, Label, assign_labels, parse, to_text
from .translate import sk_to_sf

__all__ = [
    "Calculus",
    "Label",
    "Solution",
    "analyze_lambda",
    "analyze_sf",
    "analyze_sk",
    "assign_labels",
    "check",
    "evaluate",
    "lam_models",
    "models_sf",
    "models_sk",
    "parse",
    "parse_lambda",
    "sk_to_sf",
    "solve",
    "to_text",
]

__version__ = "0.1.0"
