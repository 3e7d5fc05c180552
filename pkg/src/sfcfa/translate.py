"""SK to SF translation (``K`` becomes ``F F``) and the correspondence between
the two analyses' results.

For ``K^n`` replaced by ``F^b @^a F^c``:

* the program point ``n`` of ``K`` is the application ``a``;
* ``K_0^n`` corresponds to ``F_1^b`` and ``K_1^n`` to ``F_2^b``;
* the argument slot ``n.K.0`` corresponds to ``b.F.1``.

Labels ``a``, ``b``, ``c`` and the sublabels of ``b`` and ``c`` are otherwise
internal to the encoding and have no SK counterpart.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .solver import AbsVal, AppPair, Comb, Solution
from .terms import App, Atom, Label, Term, base_labels, labels_of

__all__ = ["KSite", "KMapping", "sk_to_sf", "correspond", "correspond_label", "compare_precision"]


@dataclass(frozen=True)
class KSite:
    app: int
    left_f: int
    right_f: int


KMapping = dict[int, KSite]


def sk_to_sf(t: Term) -> tuple[Term, KMapping]:
    """Replace every ``K^n`` by ``F^b @^a F^c`` with fresh labels.

    Fresh labels start above the largest base label of ``t`` and are handed
    out left to right, three per ``K`` (application, left ``F``, right ``F``).
    """
    nxt = max((l.base for l in base_labels(t)), default=-1) + 1
    mapping: KMapping = {}

    def go(node: Term) -> Term:
        nonlocal nxt
        if isinstance(node, App):
            left = go(node.left)
            return App(left, go(node.right), node.label)
        if isinstance(node, Atom) and node.kind == "K":
            n = node.label.base if node.label is not None else None
            if n is not None and n in mapping:
                site = mapping[n]
            else:
                site = KSite(nxt, nxt + 1, nxt + 2)
                nxt += 3
                if n is not None:
                    mapping[n] = site
            return App(Atom("F", Label(site.left_f)), Atom("F", Label(site.right_f)), Label(site.app))
        return node

    return go(t), mapping


def correspond(v: AbsVal, mapping: Mapping[int, KSite]) -> AbsVal:
    if isinstance(v, Comb) and v.kind == "K":
        return Comb("F", v.arity + 1, mapping[v.n].left_f)
    return v


def correspond_label(l: Label, mapping: Mapping[int, KSite]) -> Label:
    site = mapping.get(l.base)
    if site is None:
        return l
    if l.sub == "":
        return Label(site.app)
    if l.sub == "K.0":
        return Label(site.left_f, "F.1")
    return l


def compare_precision(sk_term: Term, sk_sol: Solution, sf_sol: Solution,
                      mapping: Mapping[int, KSite]) -> list[str]:
    """Labels of the SK term where the two analyses disagree (empty if none).

    ``@`` values exist only on the SF side and are ignored.
    """
    problems = []
    for l in sorted(labels_of(sk_term)):
        lhs = {correspond(v, mapping) for v in sk_sol[l]}
        rhs = {v for v in sf_sol[correspond_label(l, mapping)] if not isinstance(v, AppPair)}
        if lhs != rhs:
            problems.append(
                f"{l}: SK gives {sorted(map(str, lhs))}, SF gives {sorted(map(str, rhs))}"
            )
    return problems
