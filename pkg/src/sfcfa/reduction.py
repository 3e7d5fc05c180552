"""Labelled reduction for SK- and SF-calculus.

Contracting ``S`` introduces application labels ``n.S.L``, ``n.S.R`` and
``n.S.3`` derived from the label ``n`` of the contracted ``S``; factorising
with ``F`` introduces ``n.F.M`` and ``n.F.3``.  No other new labels appear.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional

from .terms import App, Atom, Calculus, Term, spine, to_text

__all__ = [
    "Redex",
    "Step",
    "Trace",
    "is_factorable_form",
    "redex_rule",
    "top_step",
    "top_step_sk",
    "top_step_sf",
    "all_one_step",
    "find_redex",
    "step",
    "evaluate",
    "format_path",
]

ARITY = {"S": 3, "K": 2, "F": 3}


@dataclass(frozen=True)
class Redex:
    path: tuple[int, ...]  # 0 = left child, 1 = right child
    rule: str  # "S", "K", "F-atom" or "F-factor"


def format_path(path: tuple[int, ...]) -> str:
    return "".join("R" if p else "L" for p in path) or "."


@dataclass(frozen=True)
class Step:
    before: Term
    redex: Redex
    after: Term


@dataclass
class Trace:
    start: Term
    steps: list[Step] = field(default_factory=list)
    outcome: str = "normal form"  # or "fuel exhausted"

    @property
    def result(self) -> Term:
        return self.steps[-1].after if self.steps else self.start

    @property
    def fuel_used(self) -> int:
        return len(self.steps)

    def render(self, with_labels: bool = True) -> str:
        """One line per step: ``<path> <rule>: <term-after>``."""
        return "\n".join(
            f"{format_path(s.redex.path)} {s.redex.rule}: {to_text(s.after, with_labels)}"
            for s in self.steps
        )


def is_factorable_form(t: Term) -> bool:
    """True for ``S``, ``S u``, ``S u v``, ``F``, ``F u`` and ``F u v``."""
    head, args = spine(t)
    return isinstance(head, Atom) and head.kind in ("S", "F") and len(args) <= 2


def redex_rule(t: Term, calculus: Calculus | str = Calculus.SF) -> Optional[str]:
    """Name of the rule that contracts ``t`` at its root, if any."""
    if not isinstance(t, App):
        return None
    head, args = spine(t)
    if not isinstance(head, Atom) or head.kind not in Calculus(calculus).atoms:
        return None
    if len(args) != ARITY[head.kind]:
        return None
    if head.kind != "F":
        return head.kind
    f = args[0]
    if isinstance(f, Atom) and f.kind in ("S", "F"):
        return "F-atom"
    if isinstance(f, App) and is_factorable_form(f):
        return "F-factor"
    return None


def _contract(t: App, rule: str) -> Term:
    head, args = spine(t)
    n = head.label
    if rule == "K":
        return args[0]
    if rule == "S":
        f, g, x = args
        return App(App(f, x, n("S.L") if n else None),
                   App(g, x, n("S.R") if n else None),
                   n("S.3") if n else None)
    if rule == "F-atom":
        return args[1]
    u_v, _, y = args
    return App(App(y, u_v.left, n("F.M") if n else None), u_v.right, n("F.3") if n else None)


def top_step(t: Term, calculus: Calculus | str) -> Optional[Term]:
    rule = redex_rule(t, calculus)
    return None if rule is None else _contract(t, rule)


def top_step_sk(t: Term) -> Optional[Term]:
    return top_step(t, Calculus.SK)


def top_step_sf(t: Term) -> Optional[Term]:
    return top_step(t, Calculus.SF)


def _rebuild(t: Term, path: tuple[int, ...], new: Term) -> Term:
    if not path:
        return new
    if path[0]:
        return App(t.left, _rebuild(t.right, path[1:], new), t.label)
    return App(_rebuild(t.left, path[1:], new), t.right, t.label)


def _positions(t: Term, calculus: Calculus, path: tuple[int, ...]) -> Iterator[tuple[Redex, Term]]:
    rule = redex_rule(t, calculus)
    if rule is not None:
        yield Redex(path, rule), t
    if isinstance(t, App):
        yield from _positions(t.left, calculus, path + (0,))
        yield from _positions(t.right, calculus, path + (1,))


def all_one_step(t: Term, calculus: Calculus | str) -> list[tuple[Redex, Term]]:
    """Every one-step reduct of ``t``, in pre-order of the redex position."""
    calculus = Calculus(calculus)
    return [
        (rx, _rebuild(t, rx.path, _contract(sub, rx.rule)))
        for rx, sub in _positions(t, calculus, ())
    ]


def find_redex(t: Term, calculus: Calculus | str) -> Optional[Redex]:
    """The redex chosen by the evaluator: leftmost-outermost on the spine.

    When the spine is headed by ``F`` with three arguments but the first one
    is neither an atom nor a factorable form, that argument is evaluated
    first.
    """
    calculus = Calculus(calculus)
    return _find(t, calculus, ())


def _find(t: Term, calculus: Calculus, path: tuple[int, ...]) -> Optional[Redex]:
    head, args = spine(t)
    if isinstance(head, Atom) and head.kind in calculus.atoms:
        arity = ARITY[head.kind]
        if len(args) >= arity:
            # the redex node is the arity-th application up the spine
            node_path = path + (0,) * (len(args) - arity)
            node = t
            for _ in range(len(args) - arity):
                node = node.left
            rule = redex_rule(node, calculus)
            if rule is not None:
                return Redex(node_path, rule)
            # F waiting on an unfactorable first argument
            return _find(args[0], calculus, node_path + (0,) * (arity - 1) + (1,))
    depth = len(args)
    for i, a in enumerate(args):
        found = _find(a, calculus, path + (0,) * (depth - 1 - i) + (1,))
        if found is not None:
            return found
    return None


def step(t: Term, calculus: Calculus | str) -> Optional[tuple[Redex, Term]]:
    rx = find_redex(t, calculus)
    if rx is None:
        return None
    node = t
    for p in rx.path:
        node = node.right if p else node.left
    return rx, _rebuild(t, rx.path, _contract(node, rx.rule))


def evaluate(t: Term, calculus: Calculus | str, fuel: int = 10_000) -> Trace:
    """Reduce with the deterministic strategy until normal form or out of fuel."""
    trace = Trace(t)
    current = t
    while True:
        nxt = step(current, calculus)
        if nxt is None:
            trace.outcome = "normal form"
            return trace
        if len(trace.steps) >= fuel:
            trace.outcome = "fuel exhausted"
            return trace
        rx, after = nxt
        trace.steps.append(Step(current, rx, after))
        current = after
