"""Labelled lambda-calculus: 0CFA, labelled beta-reduction, and the
translations to and from SK-calculus.

Reduction is weak (never under a binder), leftmost-outermost.  A contracted
redex ``(\\^l1 x. b^l2) @^l a`` becomes ``b[x := a]`` carrying the body label
``l2``; each substituted copy of ``a`` takes the label of the occurrence of
``x`` it replaces.  Both choices keep every ``FUN(x, l)`` recorded by the
analysis pointing at the right body label.  Weak reduction matters for the
same reason: reducing inside ``\\x. b`` would change the body label recorded
in ``FUN(x, l2)``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .solver import Constraint, ForEach, Fun, Member, Solution, Subset, solve
from .terms import App, Atom, CalculusError, Label, ParseError, Term, parse_label

__all__ = [
    "Var",
    "Lam",
    "LApp",
    "LamExpr",
    "parse_lambda",
    "assign_lambda_labels",
    "lambda_text",
    "free_vars",
    "lam_constraints",
    "analyze_lambda",
    "lam_models",
    "beta_step",
    "beta_normalize",
    "lambda_of",
    "unlambda_of",
]


@dataclass(frozen=True, slots=True)
class Var:
    name: str
    label: Optional[Label] = None


@dataclass(frozen=True, slots=True)
class Lam:
    var: str
    body: "LamExpr"
    label: Optional[Label] = None


@dataclass(frozen=True, slots=True)
class LApp:
    fn: "LamExpr"
    arg: "LamExpr"
    label: Optional[Label] = None


@dataclass(frozen=True, slots=True)
class _Const:
    # S or K inside a half-translated term; never escapes unlambda_of
    kind: str
    label: None = None


LamExpr = Union[Var, Lam, LApp]

# ---------------------------------------------------------------- syntax

_TOK = re.compile(
    r"\s*(?:(?P<lam>\\|λ)|(?P<name>[A-Za-z_][A-Za-z0-9_']*)|(?P<dot>\.)|(?P<at>@)"
    r"|(?P<lp>\()|(?P<rp>\))|(?P<label>\^\{?\d+(?:\.[A-Z]\.[A-Z0-9]+)?\}?)|(?P<bad>\S))"
)


class _LamParser:
    def __init__(self, source: str):
        self.toks = []
        pos = 0
        while True:
            m = _TOK.match(source, pos)
            if m is None or m.lastgroup is None:
                break
            if m.lastgroup == "bad":
                raise ParseError(f"unexpected character {m.group('bad')!r}", m.start("bad"))
            self.toks.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
            pos = m.end()
        self.toks.append(("eof", "", len(source)))
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind: Optional[str] = None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind}, got {tok[1]!r}", tok[2])
        self.i += 1
        return tok

    def label(self) -> Optional[Label]:
        if self.peek()[0] == "label":
            return parse_label(self.take()[1][1:].strip("{}"))
        return None

    def expr(self) -> LamExpr:
        if self.peek()[0] == "lam":
            return self.abstraction()
        left = self.primary()
        while True:
            kind = self.peek()[0]
            if kind == "at":
                self.take()
                lab = self.label()
                right = self.abstraction() if self.peek()[0] == "lam" else self.primary()
                left = LApp(left, right, lab)
            elif kind == "lam":
                left = LApp(left, self.abstraction())
            elif kind in ("name", "lp"):
                left = LApp(left, self.primary())
            else:
                return left

    def abstraction(self) -> LamExpr:
        self.take("lam")
        lab = self.label()
        _, name, _ = self.take("name")
        self.take("dot")
        return Lam(name, self.expr(), lab)

    def primary(self) -> LamExpr:
        kind, text, pos = self.take()
        if kind == "name":
            return Var(text, self.label())
        if kind == "lp":
            inner = self.expr()
            self.take("rp")
            return inner
        raise ParseError(f"unexpected {text!r}" if text else "unexpected end of input", pos)


def parse_lambda(source: str) -> LamExpr:
    """Parse ``\\x. e`` syntax; labels are optional (``\\^1 x. x^0 @^4 ...``)."""
    p = _LamParser(source)
    e = p.expr()
    kind, text, pos = p.peek()
    if kind != "eof":
        raise ParseError(f"unexpected {text!r}", pos)
    return e


def _nodes(e):
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, LApp):
            stack += [node.arg, node.fn]
        elif isinstance(node, Lam):
            stack.append(node.body)


def assign_lambda_labels(e: LamExpr, start: int = 0) -> tuple[LamExpr, int]:
    """Number nodes post-order, left to right (``(\\^1 x. x^0) @^4 (\\^3 y. y^2)``)."""
    labels = [n.label for n in _nodes(e)]
    if all(l is not None for l in labels):
        return e, max([start] + [l.base + 1 for l in labels])
    if any(l is not None for l in labels):
        raise ValueError("expression is only partially labelled")
    counter = itertools.count(start)

    def go(node):
        if isinstance(node, Var):
            return Var(node.name, Label(next(counter)))
        if isinstance(node, Lam):
            body = go(node.body)
            return Lam(node.var, body, Label(next(counter)))
        fn = go(node.fn)
        arg = go(node.arg)
        return LApp(fn, arg, Label(next(counter)))

    out = go(e)
    return out, next(counter)


def lambda_text(e, with_labels: bool = True) -> str:
    def lab(node) -> str:
        return f"^{node.label}" if with_labels and node.label is not None else ""

    def go(node, ctx: str) -> str:
        # ctx: "top", "fn" (left of application) or "arg" (right of application)
        if isinstance(node, Var):
            return node.name + lab(node)
        if isinstance(node, _Const):
            return node.kind
        if isinstance(node, Lam):
            head = f"\\{lab(node)} {node.var}. " if with_labels else f"\\{node.var}."
            text = head + go(node.body, "top")
            return text if ctx == "top" else f"({text})"
        sep = f" @{lab(node)} " if with_labels and node.label is not None else " "
        text = go(node.fn, "fn") + sep + go(node.arg, "arg")
        return f"({text})" if ctx == "arg" else text

    return go(e, "top")


def free_vars(e) -> frozenset[str]:
    if isinstance(e, Var):
        return frozenset({e.name})
    if isinstance(e, _Const):
        return frozenset()
    if isinstance(e, Lam):
        return free_vars(e.body) - {e.var}
    return free_vars(e.fn) | free_vars(e.arg)


# ---------------------------------------------------------------- 0CFA


def lam_constraints(e: LamExpr) -> list[Constraint]:
    """Constraints over Gamma, keyed by labels and by variable names."""
    out: list[Constraint] = []
    for node in _nodes(e):
        if isinstance(node, Var):
            out.append(Subset(node.name, node.label, origin=f"{node.name}^{node.label}"))
        elif isinstance(node, Lam):
            out.append(Member(Fun(node.var, node.body.label), node.label,
                              origin=f"lambda^{node.label}"))
        else:
            l1, l2, l = node.fn.label, node.arg.label, node.label
            out.append(ForEach(
                l1,
                frozenset({("FUN", 0)}),
                lambda v, l2=l2, l=l: (Subset(l2, v.var), Subset(v.body, l)),
                f"@^{l} forall FUN",
            ))
    return out


def analyze_lambda(e: LamExpr) -> Solution:
    return solve(lam_constraints(e))


def lam_models(gamma: Mapping, e: LamExpr) -> bool:
    """Check every clause directly against ``gamma`` (labels and variable names)."""
    empty: frozenset = frozenset()

    def G(key):
        return gamma.get(key, empty)

    for node in _nodes(e):
        if isinstance(node, Var):
            if not G(node.name) <= G(node.label):
                return False
        elif isinstance(node, Lam):
            if Fun(node.var, node.body.label) not in G(node.label):
                return False
        else:
            for v in G(node.fn.label):
                if isinstance(v, Fun) and not (
                    G(node.arg.label) <= G(v.var) and G(v.body) <= G(node.label)
                ):
                    return False
    return True


# ---------------------------------------------------------------- reduction


def _fresh(name: str, avoid: frozenset[str]) -> str:
    base = name.rstrip("0123456789")
    for i in itertools.count(1):
        cand = f"{base}{i}"
        if cand not in avoid:
            return cand


def _subst(e, x: str, a, fv_a: frozenset[str]):
    if isinstance(e, Var):
        if e.name != x:
            return e
        # the occurrence's label survives so enclosing FUN values stay valid
        return a if e.label is None else _relabel_root(a, e.label)
    if isinstance(e, LApp):
        return LApp(_subst(e.fn, x, a, fv_a), _subst(e.arg, x, a, fv_a), e.label)
    if isinstance(e, Lam):
        if e.var == x or x not in free_vars(e.body):
            return e
        if e.var in fv_a:
            new = _fresh(e.var, fv_a | free_vars(e.body) | {x})
            body = _rename_occurrences(e.body, e.var, new)
            return Lam(new, _subst(body, x, a, fv_a), e.label)
        return Lam(e.var, _subst(e.body, x, a, fv_a), e.label)
    return e


def _rename_occurrences(e, old: str, new: str):
    # capture-free renaming that keeps occurrence labels
    if isinstance(e, Var):
        return Var(new, e.label) if e.name == old else e
    if isinstance(e, LApp):
        return LApp(_rename_occurrences(e.fn, old, new), _rename_occurrences(e.arg, old, new), e.label)
    if isinstance(e, Lam):
        if e.var == old:
            return e
        return Lam(e.var, _rename_occurrences(e.body, old, new), e.label)
    return e


def _relabel_root(e, label):
    if isinstance(e, Var):
        return Var(e.name, label)
    if isinstance(e, Lam):
        return Lam(e.var, e.body, label)
    if isinstance(e, LApp):
        return LApp(e.fn, e.arg, label)
    return e


def beta_step(e: LamExpr) -> Optional[LamExpr]:
    """One weak leftmost-outermost beta step, or ``None`` at a weak normal form."""
    if not isinstance(e, LApp):
        return None
    if isinstance(e.fn, Lam):
        lam = e.fn
        body = _subst(lam.body, lam.var, e.arg, free_vars(e.arg))
        return _relabel_root(body, lam.body.label)
    fn = beta_step(e.fn)
    if fn is not None:
        return LApp(fn, e.arg, e.label)
    arg = beta_step(e.arg)
    if arg is not None:
        return LApp(e.fn, arg, e.label)
    return None


def beta_normalize(e: LamExpr, fuel: int = 10_000) -> tuple[LamExpr, int]:
    steps = 0
    while steps < fuel:
        nxt = beta_step(e)
        if nxt is None:
            break
        e = nxt
        steps += 1
    return e, steps


# ---------------------------------------------------------------- translations


def lambda_of(t: Term) -> LamExpr:
    """Labelled translation of an SK term; combinator sublabels name every node."""
    if isinstance(t, App):
        return LApp(lambda_of(t.left), lambda_of(t.right), t.label)
    if not isinstance(t, Atom):
        raise TypeError(f"cannot translate {t!r}")
    n = t.label
    sub = (lambda s: Label(n.base, s)) if n is not None else (lambda s: None)
    i = n.base if n is not None else ""
    if t.kind == "K":
        x, y = f"x{i}", f"y{i}"
        return Lam(x, Lam(y, Var(x, sub("K.X")), sub("K.LY")), sub("K.LX"))
    if t.kind == "S":
        f, g, x = f"f{i}", f"g{i}", f"x{i}"
        body = LApp(
            LApp(Var(f, sub("S.F")), Var(x, sub("S.X1")), sub("S.L")),
            LApp(Var(g, sub("S.G")), Var(x, sub("S.X2")), sub("S.R")),
            sub("S.3"),
        )
        return Lam(f, Lam(g, Lam(x, body, sub("S.LX")), sub("S.LG")), sub("S.LF"))
    raise CalculusError("F has no lambda-calculus counterpart")


_SKK = LApp(LApp(_Const("S"), _Const("K")), _Const("K"))


def _unlambda(e):
    if isinstance(e, (Var, _Const)):
        return e
    if isinstance(e, LApp):
        return LApp(_unlambda(e.fn), _unlambda(e.arg))
    return _unlambda_x(e.var, e.body)


def _unlambda_x(x: str, e):
    if isinstance(e, Var) and e.name == x:
        return _SKK
    if x not in free_vars(e):
        return LApp(_Const("K"), _unlambda(e))
    if isinstance(e, LApp):
        if isinstance(e.arg, Var) and e.arg.name == x and x not in free_vars(e.fn):
            return _unlambda(e.fn)
        return LApp(LApp(_Const("S"), _unlambda_x(x, e.fn)), _unlambda_x(x, e.arg))
    # abstraction: translate the inner binder first
    return _unlambda_x(x, _unlambda(e))


def unlambda_of(e: LamExpr) -> Term:
    """Translate a closed lambda term into an unlabelled SK term."""
    fv = free_vars(e)
    if fv:
        raise ValueError(f"free variables {sorted(fv)} cannot be translated")

    def to_term(m) -> Term:
        if isinstance(m, _Const):
            return Atom(m.kind)
        if isinstance(m, LApp):
            return App(to_term(m.fn), to_term(m.arg))
        raise AssertionError(f"untranslated node {m!r}")

    return to_term(_unlambda(e))
