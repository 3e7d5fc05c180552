"""Published worked examples, kept verbatim so they can serve as regression oracles.

Tables map label text to value strings in the document lexicon
(``S_2^2``, ``@^(15.S.L,15.S.R)``, ``FUN(y,2)``).
"""
from __future__ import annotations

from .solver import AbsVal, parse_value
from .terms import Label, parse_label

__all__ = [
    "SK_IDENTITY_TERM",
    "SK_IDENTITY_TABLE",
    "SK_IDENTITY_PHI",
    "SF_IDENTITY_TERM",
    "SF_IDENTITY_TABLE",
    "SF_IDENTITY_PHI",
    "LAMBDA_IDENTITY_TERM",
    "LAMBDA_IDENTITY_TABLE",
    "FLIP_TERM",
    "FLIP_TERM_REPAIRED",
    "table_gamma",
]

# identity applied to itself in SK-calculus
SK_IDENTITY_TERM = "(S^7 @^8 K^6 @^9 K^5) @^10 (S^2 @^3 K^1 @^4 K^0)"
SK_IDENTITY_TABLE: dict[str, list[str]] = {
    "0": ["K_0^0"],
    "1": ["K_0^1"],
    "2": ["S_0^2"],
    "2.S.0": ["K_0^1"],
    "2.S.1": ["K_0^0"],
    "3": ["S_1^2"],
    "4": ["S_2^2"],
    "5": ["K_0^5"],
    "5.K.0": ["S_2^2"],
    "6": ["K_0^6"],
    "6.K.0": ["S_2^2"],
    "7": ["S_0^7"],
    "7.S.0": ["K_0^6"],
    "7.S.1": ["K_0^5"],
    "7.S.2": ["S_2^2"],
    "7.S.3": ["S_2^2"],
    "7.S.L": ["K_1^6"],
    "7.S.R": ["K_1^5"],
    "8": ["S_1^7"],
    "9": ["S_2^7"],
    "10": ["S_2^2"],
}
SK_IDENTITY_PHI = frozenset({7})

# the same program in SF-calculus, with K written as F F
SF_IDENTITY_TERM = (
    "(S^15 @^16 (F^13 @^14 F^12) @^17 (F^10 @^11 F^9)) "
    "@^18 (S^6 @^7 (F^4 @^5 F^3) @^8 (F^1 @^2 F^0))"
)
SF_IDENTITY_TABLE: dict[str, list[str]] = {
    "0": ["F_0^0"],
    "1": ["F_0^1"],
    "1.F.0": ["F_0^0"],
    "2": ["F_1^1", "@^(1,0)"],
    "3": ["F_0^3"],
    "4": ["F_0^4"],
    "4.F.0": ["F_0^3"],
    "5": ["F_1^4", "@^(4,3)"],
    "6": ["S_0^6"],
    "6.S.0": ["F_1^4", "@^(4,3)"],
    "6.S.1": ["F_1^1", "@^(1,0)"],
    "7": ["S_1^6", "@^(6,5)"],
    "8": ["S_2^6", "@^(7,2)"],
    "9": ["F_0^9"],
    "10": ["F_0^10"],
    "10.F.0": ["F_0^9"],
    "10.F.1": ["S_2^6", "@^(7,2)"],
    "11": ["F_1^10", "@^(10,9)"],
    "12": ["F_0^12"],
    "13": ["F_0^13"],
    "13.F.0": ["F_0^12"],
    "13.F.1": ["S_2^6", "@^(7,2)"],
    "13.F.3": ["S_2^6", "@^(7,2)"],
    "13.F.2": ["F_2^10", "@^(15.S.1,15.S.2)"],
    "14": ["F_1^13", "@^(13,12)"],
    "15": ["S_0^15"],
    "15.S.0": ["F_1^13", "@^(13,12)"],
    "15.S.1": ["F_1^10", "@^(10,9)"],
    "15.S.2": ["S_2^6", "@^(7,2)"],
    "15.S.3": ["S_2^6", "@^(15.S.L,15.S.R)", "@^(7,2)"],
    "15.S.L": ["F_2^13", "@^(15.S.0,15.S.2)"],
    "16": ["S_1^15", "@^(15,14)"],
    "15.S.R": ["F_2^10", "@^(15.S.1,15.S.2)"],
    "17": ["S_2^15", "@^(16,11)"],
    "18": ["S_2^6", "@^(15.S.L,15.S.R)", "@^(17,8)", "@^(7,2)"],
}
SF_IDENTITY_PHI = frozenset({13, 15})

# identity applied to itself in lambda-calculus; keys that are not labels
# are variables
LAMBDA_IDENTITY_TERM = r"(\^1 x. x^0) @^4 (\^3 y. y^2)"
LAMBDA_IDENTITY_TABLE: dict[str, list[str]] = {
    "x": ["FUN(y,2)"],
    "0": ["FUN(y,2)"],
    "3": ["FUN(y,2)"],
    "4": ["FUN(y,2)"],
    "1": ["FUN(x,0)"],
    "y": [],
}

# meant to turn f x y (f an atom) into f y x; as printed it is itself an S
# redex and does not swap anything
FLIP_TERM = (
    "(S F (F F S)) (F F (S (S (F F (S (F F S) (F F))) (S F (F F S))) "
    "(F F (S (F F (S (S (F F) (F F)))) (F F)))))"
)
# with the leading S restored it does swap
FLIP_TERM_REPAIRED = "S " + FLIP_TERM


def _key(text: str) -> Label | str:
    return parse_label(text) if text[0].isdigit() else text


def table_gamma(table: dict[str, list[str]]) -> dict[Label | str, frozenset[AbsVal]]:
    """A table as a Gamma mapping (labels parsed, values parsed)."""
    return {_key(k): frozenset(parse_value(v) for v in vs) for k, vs in table.items()}
