"""Random and exhaustive term generation plus executable versions of the
correctness results: coherence of the analyses with reduction, soundness of
the abstraction at normal forms, and the substitution property.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Collection, Iterator, Optional

from .cfa_sf import gen_sf
from .cfa_sk import gen_sk
from .reduction import all_one_step, evaluate, format_path
from .solver import Comb, Solution, check, solve
from .terms import App, Atom, Calculus, Term, assign_labels, spine, to_text

__all__ = [
    "random_term",
    "enumerate_terms",
    "generator_for",
    "CoherenceFailure",
    "CoherenceReport",
    "check_coherence",
    "normal_form_heads",
    "substitution_instances",
]


def generator_for(calculus: Calculus | str):
    return gen_sk if Calculus(calculus) is Calculus.SK else gen_sf


def _shapes(leaves: int) -> int:
    # Catalan number: binary trees with this many leaves
    m = leaves - 1
    return math.comb(2 * m, m) // (m + 1)


def _random_shape(rng: random.Random, leaves: int, atoms: list[str]) -> Term:
    if leaves == 1:
        return Atom(rng.choice(atoms))
    # split so every shape with this many leaves is equally likely
    r = rng.randrange(_shapes(leaves))
    for k in range(1, leaves):
        w = _shapes(k) * _shapes(leaves - k)
        if r < w:
            break
        r -= w
    return App(_random_shape(rng, k, atoms), _random_shape(rng, leaves - k, atoms))


def random_term(rng: random.Random, calculus: Calculus | str, max_size: int,
                exact: bool = False) -> Term:
    """A labelled closed term with at most ``max_size`` nodes.

    The number of leaves is drawn uniformly (or fixed at the maximum when
    ``exact``), then a shape uniformly among those with that many leaves,
    then each atom uniformly.
    """
    atoms = sorted(Calculus(calculus).atoms)
    most = max(1, (max_size + 1) // 2)
    leaves = most if exact else rng.randint(1, most)
    return assign_labels(_random_shape(rng, leaves, atoms))[0]


def enumerate_terms(calculus: Calculus | str, max_nodes: int) -> Iterator[Term]:
    """Every labelled closed term with at most ``max_nodes`` nodes."""
    atoms = sorted(Calculus(calculus).atoms)

    def shapes(leaves: int) -> Iterator[Term]:
        if leaves == 1:
            for a in atoms:
                yield Atom(a)
            return
        for k in range(1, leaves):
            for left in shapes(k):
                for right in shapes(leaves - k):
                    yield App(left, right)

    for leaves in range(1, (max_nodes + 1) // 2 + 1):
        for t in shapes(leaves):
            yield assign_labels(t)[0]


# ---------------------------------------------------------------- coherence


@dataclass(frozen=True)
class CoherenceFailure:
    trial: int
    term: str
    step: str
    violation: str

    def __str__(self):
        return f"trial {self.trial}: {self.term} | {self.step} | {self.violation}"


@dataclass
class CoherenceReport:
    calculus: str
    trials: int
    seed: int
    reducts_checked: int = 0
    failures: list[CoherenceFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def render(self) -> str:
        lines = [
            f"calculus={self.calculus} trials={self.trials} seed={self.seed} "
            f"reducts={self.reducts_checked} failures={len(self.failures)}"
        ]
        lines += [str(f) for f in self.failures]
        return "\n".join(lines)


def _check_trial(index: int, t: Term, calculus: Calculus, depth: int,
                 drop: Collection[str]) -> tuple[int, list[CoherenceFailure]]:
    gen = generator_for(calculus)
    sol = solve(gen(t, drop=drop))
    text = to_text(t)
    failures: list[CoherenceFailure] = []

    def verify(u: Term, where: str, parent: Optional[Term]) -> bool:
        ok, violations = check(gen(u), sol.gamma, sol.phi)
        if not ok:
            failures.append(CoherenceFailure(index, text, where, str(violations[0])))
            return False
        if parent is not None and not sol[u.label] <= sol[parent.label]:
            failures.append(CoherenceFailure(
                index, text, where, f"G({u.label}) not within G({parent.label})"))
            return False
        return True

    if not verify(t, "initial", None):
        return 0, failures
    frontier = {t}
    checked = 0
    for d in range(1, depth + 1):
        nxt = set()
        for u in frontier:
            for rx, u2 in all_one_step(u, calculus):
                checked += 1
                where = f"depth {d} at {format_path(rx.path)} ({rx.rule}) -> {to_text(u2)}"
                if verify(u2, where, u):
                    nxt.add(u2)
        frontier = nxt
        if not frontier:
            break
    return checked, failures


def check_coherence(calculus: Calculus | str, trials: int = 500, max_size: int = 12,
                    depth: int = 5, seed: int = 42,
                    drop: Collection[str] = ()) -> CoherenceReport:
    """Solve random terms and confirm the solution survives every reduction path.

    Each trial checks satisfaction of every reduct up to ``depth`` steps
    away and that each step's result label is abstracted by a subset of its
    predecessor's.  ``drop`` solves with clause families removed (checking
    always uses the full rules), which should produce failures.
    """
    calculus = Calculus(calculus)
    rng = random.Random(seed)
    report = CoherenceReport(calculus.value, trials, seed)
    for i in range(trials):
        t = random_term(rng, calculus, max_size)
        checked, failures = _check_trial(i, t, calculus, depth, drop)
        report.reducts_checked += checked
        report.failures.extend(failures)
    return report


# ---------------------------------------------------------------- soundness


def normal_form_heads(t: Term, calculus: Calculus | str, sol: Solution,
                      fuel: int = 100) -> Optional[tuple[Comb, bool]]:
    """If ``t`` normalises within ``fuel`` steps to ``A^n`` applied to ``k``
    arguments, return ``A_k^n`` and whether it is in Gamma(root of t)."""
    trace = evaluate(t, calculus, fuel)
    if trace.outcome != "normal form":
        return None
    head, args = spine(trace.result)
    if not isinstance(head, Atom) or len(args) > 2:
        return None
    v = Comb(head.kind, len(args), head.label.base)
    return v, v in sol[t.label]


# ---------------------------------------------------------------- substitution


@dataclass(frozen=True)
class SubstitutionInstance:
    original: App
    instance: App
    side: str


def substitution_instances(rng: random.Random, count: int, max_size: int = 12,
                           calculus: Calculus | str = Calculus.SF
                           ) -> Iterator[tuple[Solution, SubstitutionInstance]]:
    """Applications of a solved term whose child is replaced by one of its reducts.

    Only instances meeting the lemma's hypotheses are yielded: the new child
    satisfies the constraints and its label's abstraction is within the old
    child's.
    """
    calculus = Calculus(calculus)
    gen = generator_for(calculus)
    produced = 0
    while produced < count:
        t = random_term(rng, calculus, max_size)
        sol = solve(gen(t))
        apps = [n for n in _apps(t)]
        rng.shuffle(apps)
        for node in apps:
            for side in ("left", "right"):
                child = node.left if side == "left" else node.right
                for _, reduct in all_one_step(child, calculus):
                    if not sol[reduct.label] <= sol[child.label]:
                        continue
                    if not check(gen(reduct), sol.gamma, sol.phi)[0]:
                        continue
                    inst = (App(reduct, node.right, node.label) if side == "left"
                            else App(node.left, reduct, node.label))
                    yield sol, SubstitutionInstance(node, inst, side)
                    produced += 1
                    if produced >= count:
                        return


def _apps(t: Term) -> Iterator[App]:
    stack = [t]
    while stack:
        n = stack.pop()
        if isinstance(n, App):
            yield n
            stack += [n.left, n.right]
