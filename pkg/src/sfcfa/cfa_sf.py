"""0CFA constraint generation for SF-calculus.

``S`` is handled exactly as in SK-calculus.  ``F^n`` records its arguments in
``n.F.0``..``n.F.2``; once activated it takes the atom branch if an atom may
reach ``n.F.0`` and the factorisation branch if a partial application may,
possibly both.  Applications also produce ``@^(l1,l2)`` values so that a
factorisation can find the two halves of its first argument.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Collection

from .cfa_sk import s_atom, s_families
from .solver import (
    ATOMIC,
    PARTIAL,
    ActivationOf,
    AnyIn,
    AppWitness,
    Comb,
    Constraint,
    Family,
    ForEach,
    Guarded,
    Member,
    Solution,
    Subset,
    Violation,
    check,
    solve,
)
from .terms import App, Atom, CalculusError, Dummy, Label, Term, iter_nodes

__all__ = [
    "FAMILIES_SF",
    "f_template",
    "gen_sf",
    "analyze_sf",
    "models_sf",
    "violations_sf",
]

FAMILIES_SF = ("S_0", "S_1", "S_2", "F_0", "F_1", "F_2", "F-atom", "F-factor", "witness")


@lru_cache(maxsize=None)
def f_template(n: int) -> Term:
    """``(<y> @ <u>) @ <v>`` labelled with the sublabels of ``n``."""
    b = Label(n)
    return App(
        App(Dummy("y", b("F.2")), Dummy("u", b("F.L")), b("F.M")),
        Dummy("v", b("F.R")),
        b("F.3"),
    )


def _f_families(l1: Label, l2: Label, l3: Label, drop: Collection[str]) -> list[Constraint]:
    out = []
    at = f"@^{l3}"
    if "F_0" not in drop:
        out.append(Family(l1, "F", 0, l2, l3, record="F.0", step=True,
                          origin=f"{at} forall F_0"))
    if "F_1" not in drop:
        out.append(Family(l1, "F", 1, l2, l3, record="F.1", step=True,
                          origin=f"{at} forall F_1"))
    if "F_2" not in drop:
        out.append(Family(l1, "F", 2, l2, l3, record="F.2", result="F.3",
                          fire=True, origin=f"{at} forall F_2"))
    return out


def _factor_halves(n: int) -> ForEach:
    left, right = Label(n, "F.L"), Label(n, "F.R")
    return ForEach(
        Label(n, "F.0"),
        frozenset({("@", 0)}),
        lambda v: (Subset(v.left, left), Subset(v.right, right)),
        f"F^{n} factor halves",
    )


def gen_sf(t: Term, drop: Collection[str] = ()) -> list[Constraint]:
    """Constraints whose solutions are exactly the (Gamma, phi) modelling ``t``."""
    drop = frozenset(drop)

    def gen(term: Term) -> list[Constraint]:
        out: list[Constraint] = []
        for node in iter_nodes(term):
            if isinstance(node, Atom):
                n = node.label.base
                if node.kind == "S":
                    out.extend(s_atom(n, gen))
                elif node.kind == "F":
                    out.append(Member(Comb("F", 0, n), node.label, origin=f"F^{n}"))
                    first = Label(n, "F.0")
                    branches = []
                    if "F-atom" not in drop:
                        branches.append(Guarded(
                            AnyIn(ATOMIC, first),
                            (Subset(Label(n, "F.1"), Label(n, "F.3")),),
                            origin=f"F^{n} atom branch",
                        ))
                    if "F-factor" not in drop:
                        branches.append(Guarded(
                            AnyIn(PARTIAL, first),
                            (*gen(f_template(n)), _factor_halves(n)),
                            origin=f"F^{n} factor branch",
                        ))
                    out.append(Guarded(ActivationOf(n), tuple(branches), origin=f"F^{n} activated"))
                else:
                    raise CalculusError("K does not belong to SF-calculus")
            elif isinstance(node, App):
                l1, l2, l3 = node.left.label, node.right.label, node.label
                if "witness" not in drop:
                    out.append(AppWitness(l1, l2, l3, origin=f"@^{l3} witness"))
                out.extend(s_families(l1, l2, l3, drop))
                out.extend(_f_families(l1, l2, l3, drop))
        return out

    return gen(t)


def analyze_sf(t: Term) -> Solution:
    return solve(gen_sf(t))


def violations_sf(gamma, phi, t: Term, *, naive_witness: bool = False) -> list[Violation]:
    return check(gen_sf(t), gamma, phi, naive_witness=naive_witness)[1]


def models_sf(gamma, phi, t: Term, *, naive_witness: bool = False) -> bool:
    """Does (Gamma, phi) satisfy every SF clause for ``t``?

    The application clause is checked as an existential over ``@`` values;
    ``naive_witness`` replaces it by the canonical ``@^(l1,l2)`` membership.
    """
    return check(gen_sf(t), gamma, phi, naive_witness=naive_witness)[0]
