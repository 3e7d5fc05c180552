"""Labels and labelled terms of the SK and SF combinatory calculi.

Terms are immutable trees.  Every node carries a :class:`Label`, which is
either a plain base label ``n`` or a base label with a sublabel name
``n.S.L``.  Reduction introduces sublabel-form labels on application nodes;
atoms always carry base labels.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, NamedTuple, Optional, Union

__all__ = [
    "Calculus",
    "Label",
    "Atom",
    "App",
    "Dummy",
    "Term",
    "ParseError",
    "CalculusError",
    "SUBNAMES",
    "parse",
    "parse_label",
    "assign_labels",
    "parse_labelled",
    "to_text",
    "labels_of",
    "strip_labels",
    "spine",
    "make_spine",
    "base_labels",
    "size",
    "subterm",
    "replace_at",
]


class Calculus(str, Enum):
    SK = "sk"
    SF = "sf"

    @property
    def atoms(self) -> frozenset[str]:
        return frozenset("SK") if self is Calculus.SK else frozenset("SF")


class Label(NamedTuple):
    """A program point: base number plus optional sublabel name (``"S.L"``)."""

    base: int
    sub: str = ""

    def __str__(self) -> str:
        return f"{self.base}.{self.sub}" if self.sub else str(self.base)

    @property
    def is_base(self) -> bool:
        return not self.sub

    def __call__(self, sub: str) -> "Label":
        # Label(7)("S.3") -> 7.S.3
        return Label(self.base, sub)


# Sublabel names the analyses use, per atom kind.
SUBNAMES: dict[str, tuple[str, ...]] = {
    "S": ("S.0", "S.1", "S.2", "S.3", "S.L", "S.R"),
    "K": ("K.0",),
    "F": ("F.0", "F.1", "F.2", "F.3", "F.L", "F.R", "F.M"),
}

_LABEL_RE = re.compile(r"(\d+)((?:\.[A-Z]\.[A-Z0-9]+)?)")


def parse_label(text: str) -> Label:
    m = _LABEL_RE.fullmatch(text.strip())
    if not m:
        raise ValueError(f"malformed label {text!r}")
    return Label(int(m.group(1)), m.group(2)[1:])


@dataclass(frozen=True, slots=True)
class Atom:
    kind: str
    label: Optional[Label] = None


@dataclass(frozen=True, slots=True)
class App:
    left: "Term"
    right: "Term"
    label: Optional[Label] = None


@dataclass(frozen=True, slots=True)
class Dummy:
    """Placeholder leaf used only inside analysis templates."""

    name: str
    label: Label


Term = Union[Atom, App, Dummy]


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class CalculusError(ValueError):
    """An atom that does not belong to the calculus in use."""


# ---------------------------------------------------------------- parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<atom>[A-Za-z_][A-Za-z0-9_]*)|(?P<at>@)|(?P<lp>\()|(?P<rp>\))"
    r"|(?P<label>\^\{?\d+(?:\.[A-Z]\.[A-Z0-9]+)?\}?)|(?P<bad>\S))"
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None or m.lastgroup is None:
            break
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", start)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("eof", "", len(source)))
    return tokens


class _Parser:
    def __init__(self, source: str, calculus: Calculus):
        self.toks = _tokenize(source)
        self.i = 0
        self.calculus = calculus

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def label(self) -> Optional[Label]:
        kind, text, _ = self.peek()
        if kind != "label":
            return None
        self.take()
        return parse_label(text[1:].strip("{}"))

    def term(self) -> Term:
        left = self.primary()
        while True:
            kind, _, pos = self.peek()
            if kind == "at":
                self.take()
                lab = self.label()
                left = App(left, self.primary(), lab)
            elif kind in ("atom", "lp"):
                left = App(left, self.primary())
            else:
                return left

    def primary(self) -> Term:
        kind, text, pos = self.take()
        if kind == "lp":
            inner = self.term()
            kind2, _, pos2 = self.take()
            if kind2 != "rp":
                raise ParseError("expected ')'", pos2)
            return inner
        if kind == "atom":
            if text not in ("S", "K", "F"):
                raise ParseError(f"unknown atom {text!r}", pos)
            if text not in self.calculus.atoms:
                raise CalculusError(
                    f"atom {text!r} at position {pos} is not part of "
                    f"{self.calculus.name}-calculus"
                )
            return Atom(text, self.label())
        if kind == "eof":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {text!r}", pos)


def parse(source: str, calculus: Calculus | str = Calculus.SK) -> Term:
    """Parse combinator source text; application is left-associative.

    Labels may be written explicitly (``S^2 @^3 K^1``); nodes without one are
    left unlabelled for :func:`assign_labels`.
    """
    calculus = Calculus(calculus)
    p = _Parser(source, calculus)
    t = p.term()
    kind, text, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {text!r}", pos)
    return t


def _count_labels(t: Term) -> tuple[int, int]:
    labelled = unlabelled = 0
    stack = [t]
    while stack:
        node = stack.pop()
        if node.label is None:
            unlabelled += 1
        else:
            labelled += 1
        if isinstance(node, App):
            stack.append(node.left)
            stack.append(node.right)
    return labelled, unlabelled


def assign_labels(t: Term, start: int = 0) -> tuple[Term, int]:
    """Number every node post-order, right subtree first.

    The rightmost, deepest leaf receives ``start``; the root receives the
    largest number.  Returns the labelled term and the next unused number.
    A term that is already fully labelled is returned unchanged.
    """
    labelled, unlabelled = _count_labels(t)
    if unlabelled == 0:
        nxt = max((l.base for l in base_labels(t)), default=start - 1) + 1
        return t, max(nxt, start)
    if labelled:
        raise ValueError("term is only partially labelled")

    counter = start

    def go(node: Term) -> Term:
        nonlocal counter
        if isinstance(node, App):
            right = go(node.right)
            left = go(node.left)
            out = App(left, right, Label(counter))
        else:
            out = Atom(node.kind, Label(counter))
        counter += 1
        return out

    return go(t), counter


def parse_labelled(source: str, calculus: Calculus | str = Calculus.SK) -> Term:
    return assign_labels(parse(source, calculus))[0]


# ---------------------------------------------------------------- printing


def _lab(label: Optional[Label]) -> str:
    return "" if label is None else f"^{label}"


def to_text(t: Term, with_labels: bool = True) -> str:
    """Render a term with minimal parentheses.

    With labels, applications are written infix as ``@^l`` so the output can
    be parsed back to the identical tree.
    """

    def go(node: Term, right_operand: bool) -> str:
        if isinstance(node, Atom):
            return node.kind + (_lab(node.label) if with_labels else "")
        if isinstance(node, Dummy):
            return f"<{node.name}>" + (_lab(node.label) if with_labels else "")
        sep = f" @{_lab(node.label)} " if with_labels else " "
        text = go(node.left, False) + sep + go(node.right, True)
        return f"({text})" if right_operand else text

    return go(t, False)


# ---------------------------------------------------------------- queries


def iter_nodes(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, App):
            stack.append(node.right)
            stack.append(node.left)


def base_labels(t: Term) -> set[Label]:
    return {n.label for n in iter_nodes(t) if n.label is not None and n.label.is_base}


def labels_of(t: Term, calculus: Calculus | str | None = None) -> set[Label]:
    """All labels that may arise while analysing or reducing ``t``."""
    out: set[Label] = set()
    for node in iter_nodes(t):
        if node.label is not None:
            out.add(node.label)
        if isinstance(node, Atom) and node.label is not None:
            if calculus is not None and node.kind not in Calculus(calculus).atoms:
                raise CalculusError(f"atom {node.kind} not in {Calculus(calculus).name}")
            out.update(node.label(s) for s in SUBNAMES[node.kind])
    return out


def strip_labels(t: Term) -> Term:
    if isinstance(t, App):
        return App(strip_labels(t.left), strip_labels(t.right))
    if isinstance(t, Atom):
        return Atom(t.kind)
    return t


def size(t: Term) -> int:
    return sum(1 for _ in iter_nodes(t))


def spine(t: Term) -> tuple[Term, list[Term]]:
    """Head of the application spine and its arguments, left to right."""
    args = []
    while isinstance(t, App):
        args.append(t.right)
        t = t.left
    args.reverse()
    return t, args


def make_spine(head: Term, *args: Term) -> Term:
    """Unlabelled left-nested application; handy for building test terms."""
    t = head
    for a in args:
        t = App(t, a)
    return t


def subterm(t: Term, path: tuple[int, ...]) -> Term:
    """Follow ``path`` (0 = left, 1 = right) from the root."""
    for step in path:
        t = t.right if step else t.left
    return t


def replace_at(t: Term, path: tuple[int, ...], new: Term) -> Term:
    if not path:
        return new
    assert isinstance(t, App)
    if path[0]:
        return App(t.left, replace_at(t.right, path[1:], new), t.label)
    return App(replace_at(t.left, path[1:], new), t.right, t.label)
