"""0CFA constraint generation for SK-calculus.

An abstract value ``S_k^n`` at a label says that ``S^n`` may sit there with
``k`` arguments applied, or equivalently that ``S^n`` may be the ``k``-th left
child of the node there.  Sublabels ``n.S.0``, ``n.S.1``, ``n.S.2`` collect the
arguments an ``S^n`` may receive; ``n.K.0`` collects the first argument of
``K^n`` (the second is never used, so it is not tracked).  The constraints
for the contractum of ``S^n`` are only switched on once ``phi(n)`` holds.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Collection

from .solver import (
    ActivationOf,
    Comb,
    Constraint,
    Family,
    Guarded,
    Member,
    Solution,
    Violation,
    check,
    solve,
)
from .terms import App, Atom, CalculusError, Dummy, Label, Term, iter_nodes

__all__ = [
    "FAMILIES_SK",
    "s_template",
    "gen_sk",
    "analyze_sk",
    "models_sk",
    "violations_sk",
]

FAMILIES_SK = ("S_0", "S_1", "S_2", "K_0", "K_1")


@lru_cache(maxsize=None)
def s_template(n: int) -> Term:
    """``(<f> @ <x>) @ (<g> @ <x>)`` labelled with the sublabels of ``n``."""
    b = Label(n)
    x = Dummy("x", b("S.2"))
    return App(
        App(Dummy("f", b("S.0")), x, b("S.L")),
        App(Dummy("g", b("S.1")), x, b("S.R")),
        b("S.3"),
    )


def s_families(l1: Label, l2: Label, l3: Label, drop: Collection[str] = ()) -> list[Constraint]:
    """Application constraints contributed by ``S`` occurrences on the left."""
    out = []
    at = f"@^{l3}"
    if "S_0" not in drop:
        out.append(Family(l1, "S", 0, l2, l3, record="S.0", step=True,
                          origin=f"{at} forall S_0"))
    if "S_1" not in drop:
        out.append(Family(l1, "S", 1, l2, l3, record="S.1", step=True,
                          origin=f"{at} forall S_1"))
    if "S_2" not in drop:
        out.append(Family(l1, "S", 2, l2, l3, record="S.2", result="S.3",
                          fire=True, origin=f"{at} forall S_2"))
    return out


def _k_families(l1: Label, l2: Label, l3: Label, drop: Collection[str]) -> list[Constraint]:
    out = []
    at = f"@^{l3}"
    if "K_0" not in drop:
        out.append(Family(l1, "K", 0, l2, l3, record="K.0", step=True,
                          origin=f"{at} forall K_0"))
    if "K_1" not in drop:
        out.append(Family(l1, "K", 1, l2, l3, result="K.0", origin=f"{at} forall K_1"))
    return out


def s_atom(n: int, gen: Callable[[Term], list[Constraint]]) -> list[Constraint]:
    return [
        Member(Comb("S", 0, n), Label(n), origin=f"S^{n}"),
        Guarded(ActivationOf(n), tuple(gen(s_template(n))), origin=f"S^{n} activated"),
    ]


def gen_sk(t: Term, drop: Collection[str] = ()) -> list[Constraint]:
    """Constraints whose solutions are exactly the (Gamma, phi) modelling ``t``.

    ``drop`` names clause families to leave out (``"S_2"``, ``"K_1"``, ...);
    only the mutation harness uses it.
    """
    drop = frozenset(drop)

    def gen(term: Term) -> list[Constraint]:
        out: list[Constraint] = []
        for node in iter_nodes(term):
            if isinstance(node, Atom):
                n = node.label.base
                if node.kind == "S":
                    out.extend(s_atom(n, gen))
                elif node.kind == "K":
                    out.append(Member(Comb("K", 0, n), node.label, origin=f"K^{n}"))
                else:
                    raise CalculusError("F does not belong to SK-calculus")
            elif isinstance(node, App):
                l1, l2, l3 = node.left.label, node.right.label, node.label
                out.extend(s_families(l1, l2, l3, drop))
                out.extend(_k_families(l1, l2, l3, drop))
            # dummy leaves impose nothing
        return out

    return gen(t)


def analyze_sk(t: Term) -> Solution:
    return solve(gen_sk(t))


def violations_sk(gamma, phi, t: Term) -> list[Violation]:
    return check(gen_sk(t), gamma, phi)[1]


def models_sk(gamma, phi, t: Term) -> bool:
    """Does (Gamma, phi) satisfy every SK clause for ``t``?"""
    return check(gen_sk(t), gamma, phi)[0]
