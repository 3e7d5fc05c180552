"""Abstract domain, conditional set constraints and a worklist solver.

The constraint language is small:

* ``Member(v, l)``          v is in Gamma(l)
* ``Subset(a, b)``          Gamma(a) is contained in Gamma(b)
* ``Activate(n)``           phi(n) holds
* ``Guarded(g, body)``      if guard ``g`` holds, so does every constraint in body
* ``ForEach(l, pat, f)``    for every v in Gamma(l) matching ``pat``, ``f(v)`` holds
* ``AppWitness(l1, l2, l3)`` some @(l4, l5) in Gamma(l3) with Gamma(l1) <= Gamma(l4)
  and Gamma(l2) <= Gamma(l5)

``Family`` is a ``ForEach`` whose body has a fixed shape (argument recording,
arity step, result flow, activation) so the solver can apply it without
building per-value constraints.  Labels on a cycle of ``Subset`` edges are
merged, which is what keeps near-saturated solutions tractable.

All guards are monotone, so the least solution exists and is reached by
growing Gamma and phi from empty.  :func:`solve` computes it; :func:`check`
evaluates the constraints directly against a candidate and shares no code
with the solver.
"""
from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence, Union

from .terms import Label

__all__ = [
    "Family",
    "Comb",
    "AppPair",
    "Fun",
    "AbsVal",
    "value_key",
    "format_value",
    "parse_value",
    "shape",
    "ATOMIC",
    "PARTIAL",
    "Member",
    "Subset",
    "Activate",
    "Guarded",
    "ForEach",
    "AppWitness",
    "ValueIn",
    "ActivationOf",
    "AnyIn",
    "Constraint",
    "Solution",
    "Violation",
    "solve",
    "check",
]

log = logging.getLogger(__name__)


class Comb(NamedTuple):
    """Combinator occurrence ``kind^n`` with ``arity`` arguments applied."""

    kind: str
    arity: int
    n: int

    def __str__(self) -> str:
        return f"{self.kind}_{self.arity}^{self.n}"


class AppPair(NamedTuple):
    """A term built by applying something at ``left`` to something at ``right``."""

    left: Label
    right: Label

    def __str__(self) -> str:
        return f"@^({self.left},{self.right})"


class Fun(NamedTuple):
    """Lambda-calculus closure ``FUN(x, l)``: binds ``var``, body labelled ``body``."""

    var: str
    body: Label

    def __str__(self) -> str:
        return f"FUN({self.var},{self.body})"


AbsVal = Union[Comb, AppPair, Fun]


def value_key(v: AbsVal):
    if isinstance(v, Comb):
        return (0, v.kind, v.arity, v.n)
    if isinstance(v, AppPair):
        return (1, v.left, v.right)
    return (2, v.var, v.body)


def format_value(v: AbsVal) -> str:
    return str(v)


def parse_value(text: str) -> AbsVal:
    from .terms import parse_label

    text = text.strip()
    if text.startswith("FUN(") and text.endswith(")"):
        var, body = text[4:-1].split(",")
        return Fun(var.strip(), parse_label(body))
    if text.startswith("@^(") and text.endswith(")"):
        left, right = text[3:-1].split(",")
        return AppPair(parse_label(left), parse_label(right))
    head, n = text.split("^")
    kind, arity = head.split("_")
    return Comb(kind, int(arity), int(n))


def shape(v: AbsVal) -> tuple[str, int]:
    if isinstance(v, Comb):
        return (v.kind, v.arity)
    return ("@", 0) if isinstance(v, AppPair) else ("FUN", 0)


ATOMIC = frozenset({("S", 0), ("F", 0)})
PARTIAL = frozenset({("S", 1), ("S", 2), ("F", 1), ("F", 2)})

# ---------------------------------------------------------------- constraints


@dataclass(slots=True, unsafe_hash=True)
class ValueIn:
    value: AbsVal
    label: Label

    def __str__(self):
        return f"{self.value} in G({self.label})"


@dataclass(slots=True, unsafe_hash=True)
class ActivationOf:
    n: int

    def __str__(self):
        return f"phi({self.n})"


@dataclass(slots=True, unsafe_hash=True)
class AnyIn:
    """Some value of one of the given shapes is in Gamma(label)."""

    shapes: frozenset
    label: Label

    def __str__(self):
        names = ",".join(sorted(f"{k}_{a}" if k != "@" else "@" for k, a in self.shapes))
        return f"any {{{names}}} in G({self.label})"


Guard = Union[ValueIn, ActivationOf, AnyIn]


@dataclass(slots=True, unsafe_hash=True)
class Member:
    value: AbsVal
    label: Label
    origin: str = field(default="", compare=False)

    def __str__(self):
        return f"{self.value} in G({self.label})"


@dataclass(slots=True, unsafe_hash=True)
class Subset:
    src: Label
    dst: Label
    origin: str = field(default="", compare=False)

    def __str__(self):
        return f"G({self.src}) <= G({self.dst})"


@dataclass(slots=True, unsafe_hash=True)
class Activate:
    n: int
    origin: str = field(default="", compare=False)

    def __str__(self):
        return f"phi({self.n})"


@dataclass(slots=True, unsafe_hash=True)
class Guarded:
    guard: Guard
    body: tuple
    origin: str = field(default="", compare=False)

    def __str__(self):
        return f"{self.guard} => [{len(self.body)} constraints]"


@dataclass(slots=True, eq=False)
class ForEach:
    label: Label
    shapes: frozenset
    body: Callable[[AbsVal], Sequence["Constraint"]]
    origin: str = ""

    def __str__(self):
        return f"forall {self.origin} in G({self.label})"


@dataclass(slots=True, eq=False)
class Family:
    """``for every kind_arity^n in Gamma(label)`` with a fixed body shape.

    For each such value: ``record`` gives ``Gamma(arg) <= Gamma(n.record)``,
    ``step`` gives ``kind_{arity+1}^n in Gamma(dest)``, ``result`` gives
    ``Gamma(n.result) <= Gamma(dest)`` and ``fire`` gives ``phi(n)``.
    Semantically a :class:`ForEach`; the solver handles it without building
    the per-value constraints.
    """

    label: Label
    kind: str
    arity: int
    arg: Label
    dest: Label
    record: Optional[str] = None
    step: bool = False
    result: Optional[str] = None
    fire: bool = False
    origin: str = ""

    def __post_init__(self):
        if self.step and self.arity >= 2:
            raise ValueError(f"{self.kind}_{self.arity} has no successor arity")

    @property
    def shapes(self) -> frozenset:
        return frozenset({(self.kind, self.arity)})

    def body(self, v: AbsVal) -> tuple:
        n = v.n
        out: list = []
        if self.record:
            out.append(Subset(self.arg, Label(n, self.record)))
        if self.step:
            out.append(Member(Comb(self.kind, self.arity + 1, n), self.dest))
        if self.result:
            out.append(Subset(Label(n, self.result), self.dest))
        if self.fire:
            out.append(Activate(n))
        return tuple(out)

    def __str__(self):
        return f"forall {self.origin} in G({self.label})"


@dataclass(slots=True, unsafe_hash=True)
class AppWitness:
    left: Label
    right: Label
    label: Label
    origin: str = field(default="", compare=False)

    def __str__(self):
        return f"exists @^(l4,l5) in G({self.label}) covering ({self.left},{self.right})"


Constraint = Union[Member, Subset, Activate, Guarded, ForEach, Family, AppWitness]


# ---------------------------------------------------------------- solving


class Solution:
    """Least solution: Gamma as a label -> value-set mapping, phi as active labels.

    Sets are held as bitsets over interned values and decoded on access.
    """

    def __init__(self, bits: dict[Label, int], values: list, phi: frozenset, iterations: int):
        self._bits = bits
        self._values = values
        self._decoded: dict[Label, frozenset] = {}
        self.phi = phi
        self.iterations = iterations

    def __getitem__(self, label) -> frozenset:
        got = self._decoded.get(label)
        if got is None:
            got = frozenset(_members(self._bits.get(label, 0), self._values))
            self._decoded[label] = got
        return got

    @property
    def gamma(self) -> dict[Label, frozenset]:
        return {l: self[l] for l, b in self._bits.items() if b}

    def labels(self) -> list:
        return [l for l, b in self._bits.items() if b]

    def size(self) -> int:
        """Total number of (label, value) facts."""
        return sum(b.bit_count() for b in self._bits.values())

    def active(self, n: int) -> bool:
        return n in self.phi


def _members(bits: int, values: list) -> Iterator:
    while bits:
        low = bits & -bits
        yield values[low.bit_length() - 1]
        bits ^= low


class _Solver:
    def __init__(self, collapse_after: int = 4096):
        self.index: dict = {}
        self.values: list = []
        self.shape_mask: dict[tuple, int] = defaultdict(int)
        self.gamma: dict = defaultdict(int)
        self.delta: dict = {}
        self.phi: set[int] = set()
        self.succ: dict = defaultdict(set)
        self.by_label: dict = defaultdict(list)
        self.any_in: dict = defaultdict(list)
        self.value_in: dict = defaultdict(list)
        self.on_activate: dict[int, list] = defaultdict(list)
        self.work: deque = deque()
        self.iterations = 0
        self.sublabels: dict[str, dict[int, Label]] = {}
        # labels on a subset cycle always hold equal sets, so each strongly
        # connected component is collapsed onto one representative
        self.parent: dict = {}
        # values each quantifier has already been expanded for, keyed by id;
        # bodies depend only on the value, so merging labels never needs
        # to replay them
        self.done: dict[int, int] = {}
        self.edges = 0
        self.collapse_after = collapse_after
        self.next_collapse = collapse_after

    def find(self, label):
        parent = self.parent
        root = label
        while root in parent:
            root = parent[root]
        while label in parent and parent[label] != root:
            parent[label], label = root, parent[label]
        return root

    def bit(self, value: AbsVal) -> int:
        i = self.index.get(value)
        if i is None:
            if isinstance(value, Comb):
                # kind_0^n, kind_1^n, kind_2^n take consecutive bits so that
                # moving to the next arity is a shift
                start = len(self.values)
                for a in range(3):
                    v = Comb(value.kind, a, value.n)
                    self.index[v] = start + a
                    self.values.append(v)
                    self.shape_mask[(value.kind, a)] |= 1 << (start + a)
                i = start + value.arity
            else:
                i = self.index[value] = len(self.values)
                self.values.append(value)
                self.shape_mask[shape(value)] |= 1 << i
        return 1 << i

    def mask(self, shapes) -> int:
        m = 0
        for sh in shapes:
            m |= self.shape_mask.get(sh, 0)
        return m

    def add_bits(self, label, bits: int) -> None:
        if label in self.parent:
            label = self.find(label)
        new = bits & ~self.gamma[label]
        if not new:
            return
        self.gamma[label] |= new
        pending = self.delta.get(label)
        if pending is None:
            self.delta[label] = new
            self.work.append(label)
        else:
            self.delta[label] = pending | new

    def activate(self, n: int) -> None:
        if n in self.phi:
            return
        self.phi.add(n)
        for body in self.on_activate.pop(n, ()):
            self.install_all(body)

    def install_all(self, cs: Iterable[Constraint]) -> None:
        handlers = self._handlers
        for c in cs:
            handler = handlers.get(type(c))
            if handler is None:
                raise TypeError(f"unknown constraint {c!r}")
            handler(self, c)

    def seen(self, label) -> int:
        # facts at label whose consequences have already been propagated
        label = self.find(label)
        return self.gamma.get(label, 0) & ~self.delta.get(label, 0)

    def install(self, c: Constraint) -> None:
        self.install_all((c,))

    def _subset(self, c: Subset) -> None:
        self.edge(c.src, c.dst)

    def edge(self, src, dst) -> None:
        parent = self.parent
        if src in parent:
            src = self.find(src)
        if dst in parent:
            dst = self.find(dst)
        if src == dst:
            return
        dsts = self.succ[src]
        if dst in dsts:
            return
        dsts.add(dst)
        self.edges += 1
        bits = self.gamma.get(src, 0)
        if bits:
            self.add_bits(dst, bits)

    def _member(self, c: Member) -> None:
        self.add_bits(c.label, self.bit(c.value))

    def _for_each(self, c: ForEach) -> None:
        self.by_label[self.find(c.label)].append(c)
        self.expand(c, self.seen(c.label) & self.mask(c.shapes))

    def _family(self, c: Family) -> None:
        self.by_label[self.find(c.label)].append(c)
        self.expand(c, self.seen(c.label) & self.shape_mask.get((c.kind, c.arity), 0))

    def _activate(self, c: Activate) -> None:
        self.activate(c.n)

    def _witness(self, c: AppWitness) -> None:
        # the canonical witness always satisfies the existential
        self.add_bits(c.label, self.bit(AppPair(c.left, c.right)))

    def _guarded(self, c: Guarded) -> None:
        g = c.guard
        if isinstance(g, ActivationOf):
            if g.n in self.phi:
                self.install_all(c.body)
            else:
                self.on_activate[g.n].append(c.body)
        elif isinstance(g, AnyIn):
            label = self.find(g.label)
            if self.gamma.get(label, 0) & self.mask(g.shapes):
                self.install_all(c.body)
            else:
                self.any_in[label].append((g, c.body))
        elif isinstance(g, ValueIn):
            label = self.find(g.label)
            if self.gamma.get(label, 0) & self.bit(g.value):
                self.install_all(c.body)
            else:
                self.value_in[label].append((g, c.body))
        else:
            raise TypeError(f"unknown guard {g!r}")

    _handlers = {
        Subset: _subset,
        Member: _member,
        ForEach: _for_each,
        Family: _family,
        Activate: _activate,
        AppWitness: _witness,
        Guarded: _guarded,
    }

    def expand(self, fe, bits: int) -> None:
        done = self.done.get(id(fe), 0)
        bits &= ~done
        if not bits:
            return
        self.done[id(fe)] = done | bits
        values = self.values
        if type(fe) is Family:
            if fe.step:
                self.add_bits(fe.dest, bits << 1)
            record, result, fire = fe.record, fe.result, fe.fire
            if not (record or result or fire):
                return
            sub = self.sublabel
            while bits:
                low = bits & -bits
                bits ^= low
                n = values[low.bit_length() - 1].n
                if record:
                    self.edge(fe.arg, sub(n, record))
                if result:
                    self.edge(sub(n, result), fe.dest)
                if fire:
                    self.activate(n)
            return
        while bits:
            low = bits & -bits
            bits ^= low
            self.install_all(fe.body(values[low.bit_length() - 1]))

    def sublabel(self, n: int, sub: str) -> Label:
        table = self.sublabels.get(sub)
        if table is None:
            table = self.sublabels[sub] = {}
        got = table.get(n)
        if got is None:
            got = table[n] = Label(n, sub)
        return got

    def components(self) -> list[list]:
        """Strongly connected components of the subset graph (iterative Tarjan)."""
        succ = self.succ
        index: dict = {}
        low: dict = {}
        stack: list = []
        on_stack: set = set()
        out: list[list] = []
        for root in list(succ):
            if root in index:
                continue
            index[root] = low[root] = len(index)
            stack.append(root)
            on_stack.add(root)
            frames = [(root, iter(succ.get(root, ())))]
            while frames:
                v, it = frames[-1]
                pushed = False
                for w in it:
                    if w not in index:
                        index[w] = low[w] = len(index)
                        stack.append(w)
                        on_stack.add(w)
                        frames.append((w, iter(succ.get(w, ()))))
                        pushed = True
                        break
                    if w in on_stack and index[w] < low[v]:
                        low[v] = index[w]
                if pushed:
                    continue
                frames.pop()
                if frames:
                    u = frames[-1][0]
                    if low[v] < low[u]:
                        low[u] = low[v]
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    if len(comp) > 1:
                        out.append(comp)
        return out

    def collapse(self) -> None:
        comps = self.components()
        if comps:
            gamma, delta, succ = self.gamma, self.delta, self.succ
            for comp in comps:
                r = max(comp, key=lambda l: len(succ.get(l, ())))
                union = 0
                seen_all = -1
                for m in comp:
                    g = gamma.get(m, 0)
                    union |= g
                    seen_all &= g & ~delta.get(m, 0)
                for m in comp:
                    if m == r:
                        continue
                    self.parent[m] = r
                    gamma.pop(m, None)
                    delta.pop(m, None)
                    succ[r] |= succ.pop(m, set())
                    for table in (self.by_label, self.any_in, self.value_in):
                        moved = table.pop(m, None)
                        if moved:
                            table[r].extend(moved)
                gamma[r] = union
                pending = union & ~seen_all
                if pending:
                    if r not in delta:
                        self.work.append(r)
                    delta[r] = pending
            find = self.find
            edges = 0
            for src in list(succ):
                dsts = {find(d) for d in succ[src]}
                dsts.discard(src)
                succ[src] = dsts
                edges += len(dsts)
            self.edges = edges
        self.next_collapse = max(self.collapse_after, 2 * self.edges)

    def run(self) -> None:
        work, delta, gamma = self.work, self.delta, self.gamma
        shape_mask = self.shape_mask
        while work:
            if self.edges > self.next_collapse:
                self.collapse()
            label = work.popleft()
            d = delta.pop(label, None)
            if d is None:
                continue  # merged into another label since it was queued
            self.iterations += 1
            for dst in list(self.succ.get(label, ())):
                new = d & ~gamma[dst]
                if new:
                    gamma[dst] |= new
                    pending = delta.get(dst)
                    if pending is None:
                        delta[dst] = new
                        work.append(dst)
                    else:
                        delta[dst] = pending | new
            for fe in list(self.by_label.get(label, ())):
                if type(fe) is Family:
                    self.expand(fe, d & shape_mask.get((fe.kind, fe.arity), 0))
                else:
                    self.expand(fe, d & self.mask(fe.shapes))
            waiting = self.any_in.get(label)
            if waiting:
                keep = []
                fire = []
                for g, body in waiting:
                    if d & self.mask(g.shapes):
                        fire.append(body)
                    else:
                        keep.append((g, body))
                if fire:
                    self.any_in[label] = keep
                    for body in fire:
                        self.install_all(body)
            waiting = self.value_in.get(label)
            if waiting:
                keep = []
                fire = []
                for g, body in waiting:
                    if d & self.bit(g.value):
                        fire.append(body)
                    else:
                        keep.append((g, body))
                if fire:
                    self.value_in[label] = keep
                    for body in fire:
                        self.install_all(body)


def solve(constraints: Iterable[Constraint], *, collapse_after: int = 4096) -> Solution:
    """Least (Gamma, phi) satisfying every constraint.

    Cycle collapsing first runs once the subset graph has ``collapse_after``
    edges and again whenever the edge count has doubled since.
    """
    s = _Solver(collapse_after)
    s.install_all(constraints)
    s.run()
    log.debug("solved in %d iterations over %d labels", s.iterations, len(s.gamma))
    bits = {l: b for l, b in s.gamma.items() if b}
    for l in s.parent:
        b = s.gamma.get(s.find(l), 0)
        if b:
            bits[l] = b
    return Solution(
        bits,
        s.values,
        frozenset(s.phi),
        s.iterations,
    )


# ---------------------------------------------------------------- checking


@dataclass(frozen=True)
class Violation:
    constraint: str
    origin: str

    def __str__(self):
        return f"{self.origin}: {self.constraint}" if self.origin else self.constraint


def check(
    constraints: Iterable[Constraint],
    gamma,
    phi,
    *,
    naive_witness: bool = False,
) -> tuple[bool, list[Violation]]:
    """Evaluate every constraint against a candidate (Gamma, phi).

    ``gamma`` maps labels to value sets (missing labels are empty) and
    ``phi`` is a collection of active base labels.  With ``naive_witness``
    the application existential is weakened to its canonical witness, which
    is only useful for demonstrating why the existential is needed.
    """
    if isinstance(gamma, Solution):
        gamma = gamma.gamma
    elif not hasattr(gamma, "get"):
        gamma = dict(gamma)
    phi = frozenset(phi)
    empty: frozenset = frozenset()

    def G(l: Label):
        return gamma.get(l, empty)

    def guard_holds(g: Guard) -> bool:
        if isinstance(g, ActivationOf):
            return g.n in phi
        if isinstance(g, ValueIn):
            return g.value in G(g.label)
        return any(shape(v) in g.shapes for v in G(g.label))

    violations: list[Violation] = []

    def visit(cs: Iterable[Constraint], origin: str) -> None:
        for c in cs:
            where = c.origin or origin
            if isinstance(c, Member):
                ok = c.value in G(c.label)
            elif isinstance(c, Subset):
                ok = G(c.src) <= G(c.dst)
            elif isinstance(c, Activate):
                ok = c.n in phi
            elif isinstance(c, AppWitness):
                if naive_witness:
                    ok = AppPair(c.left, c.right) in G(c.label)
                else:
                    left, right = G(c.left), G(c.right)
                    ok = any(
                        isinstance(v, AppPair) and left <= G(v.left) and right <= G(v.right)
                        for v in G(c.label)
                    )
            elif isinstance(c, Guarded):
                if guard_holds(c.guard):
                    visit(c.body, where)
                continue
            elif isinstance(c, (ForEach, Family)):
                for v in sorted(G(c.label), key=value_key):
                    if shape(v) in c.shapes:
                        visit(c.body(v), f"{where} [{v}]")
                continue
            else:
                raise TypeError(f"unknown constraint {c!r}")
            if not ok:
                violations.append(Violation(str(c), where))

    visit(constraints, "")
    return not violations, violations
