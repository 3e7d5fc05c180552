import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sfcfa.fixtures import LAMBDA_IDENTITY_TABLE, LAMBDA_IDENTITY_TERM, table_gamma
from sfcfa.lam import (
    Lam,
    LApp,
    Var,
    analyze_lambda,
    assign_lambda_labels,
    beta_normalize,
    beta_step,
    free_vars,
    lam_constraints,
    lam_models,
    lambda_of,
    lambda_text,
    parse_lambda,
    unlambda_of,
)
from sfcfa.reduction import top_step_sk
from sfcfa.solver import Fun, check
from sfcfa.terms import CalculusError, Label, parse, parse_labelled, spine

from conftest import sk_terms, unlabelled_terms


def de_bruijn(e, env=()):
    """Label-free, name-free shape for alpha-equivalence."""
    if isinstance(e, Var):
        return env.index(e.name) if e.name in env else e.name
    if isinstance(e, Lam):
        return ("lam", de_bruijn(e.body, (e.var,) + env))
    return ("app", de_bruijn(e.fn, env), de_bruijn(e.arg, env))


def test_identity_applied_to_itself():
    e = parse_lambda(LAMBDA_IDENTITY_TERM)
    sol = analyze_lambda(e)
    for key, values in table_gamma(LAMBDA_IDENTITY_TABLE).items():
        assert sol[key] == values, key
    assert sol[Label(2)] == frozenset()


def test_default_labelling_matches_published_numbering():
    e = assign_lambda_labels(parse_lambda(r"(\x. x) (\y. y)"))[0]
    assert lambda_text(e) == LAMBDA_IDENTITY_TERM


def test_published_table_is_a_model():
    e = parse_lambda(LAMBDA_IDENTITY_TERM)
    assert lam_models(table_gamma(LAMBDA_IDENTITY_TABLE), e)


def test_removing_any_fact_breaks_the_model():
    e = parse_lambda(LAMBDA_IDENTITY_TERM)
    sol = analyze_lambda(e)
    gamma = sol.gamma
    for key, values in gamma.items():
        for v in values:
            smaller = dict(gamma)
            smaller[key] = values - {v}
            assert not lam_models(smaller, e), (key, v)


def test_direct_check_agrees_with_generic_check():
    e = parse_lambda(LAMBDA_IDENTITY_TERM)
    gamma = table_gamma(LAMBDA_IDENTITY_TABLE)
    assert check(lam_constraints(e), gamma, ())[0]
    gamma[Label(4)] = frozenset()
    assert not lam_models(gamma, e)
    assert not check(lam_constraints(e), gamma, ())[0]


def test_self_application_variants():
    # oracle: every clause checked directly on the produced Gamma
    for src in [r"(\x. x x) (\y. y)", r"(\x. x) (\x. x x)", r"(\f. \x. f (f x)) (\y. y)"]:
        e = assign_lambda_labels(parse_lambda(src))[0]
        sol = analyze_lambda(e)
        assert lam_models(sol.gamma, e)


def test_beta_step_labels():
    e = parse_lambda(LAMBDA_IDENTITY_TERM)
    out = beta_step(e)
    # the argument takes over the label of the occurrence it replaces
    assert lambda_text(out) == r"\^0 y. y^2"
    assert beta_step(out) is None


def test_capture_avoidance():
    e = parse_lambda(r"(\^3 x. \^2 y. x^1) @^5 y^4")
    out = beta_step(e)
    assert lambda_text(out) == r"\^2 y1. y^1"
    assert free_vars(out) == {"y"}


def test_weak_reduction_stops_at_abstractions():
    e = assign_lambda_labels(parse_lambda(r"\z. (\x. x) z"))[0]
    assert beta_step(e) is None


def test_lambda_of_k():
    e = lambda_of(parse("K^5"))
    assert lambda_text(e) == r"\^5.K.LX x5. \^5.K.LY y5. x5^5.K.X"


def test_lambda_of_s():
    e = lambda_of(parse("S^7"))
    assert lambda_text(e) == (
        r"\^7.S.LF f7. \^7.S.LG g7. \^7.S.LX x7. "
        r"f7^7.S.F @^7.S.L x7^7.S.X1 @^7.S.3 (g7^7.S.G @^7.S.R x7^7.S.X2)"
    )


def test_lambda_of_application_keeps_label():
    e = lambda_of(parse("K^1 @^9 S^0"))
    assert isinstance(e, LApp) and e.label == Label(9)


def test_lambda_of_rejects_f():
    with pytest.raises(CalculusError):
        lambda_of(parse_labelled("F", "sf"))


@pytest.mark.parametrize("src, expected", [
    (r"\x. x", "S K K"),
    (r"\x. \y. x", "K"),
    (r"\x. (\y. y) x", "S K K"),
    (r"\f. \g. \x. f x (g x)", "S"),
])
def test_unlambda(src, expected):
    assert unlambda_of(parse_lambda(src)) == parse(expected)


def test_unlambda_rejects_free_variables():
    with pytest.raises(ValueError):
        unlambda_of(parse_lambda(r"\x. y"))


@settings(max_examples=300)
@given(unlabelled_terms("SK", max_leaves=8))
def test_unlambda_left_inverse(t):
    assert unlambda_of(lambda_of(t)) == t


@given(sk_terms)
def test_sk_step_is_two_or_three_beta_steps(t):
    out = top_step_sk(t)
    if out is None:
        return
    head, _ = spine(t)
    e = lambda_of(t)
    for _ in range(2 if head.kind == "K" else 3):
        e = beta_step(e)
    assert de_bruijn(e) == de_bruijn(lambda_of(out))


names = st.sampled_from("xyz")


@st.composite
def closed_lambda(draw, depth=4):
    def go(d, bound):
        choices = ["lam"] + (["var"] if bound else []) + (["app"] if d > 0 else [])
        kind = draw(st.sampled_from(choices))
        if kind == "var":
            return Var(draw(st.sampled_from(sorted(bound))))
        if kind == "lam":
            x = draw(names)
            return Lam(x, go(d - 1 if d > 0 else 0, bound | {x}) if d > 0 else Var(x))
        return LApp(go(d - 1, bound), go(d - 1, bound))

    return assign_lambda_labels(go(depth, frozenset()))[0]


@settings(max_examples=200)
@given(closed_lambda())
def test_lambda_coherence(e):
    sol = analyze_lambda(e)
    gamma = sol.gamma
    assert lam_models(gamma, e)
    for _ in range(20):
        nxt = beta_step(e)
        if nxt is None:
            break
        assert lam_models(gamma, nxt)
        assert sol[nxt.label] <= sol[e.label]
        e = nxt


@given(closed_lambda())
def test_least_solution_is_minimal(e):
    gamma = analyze_lambda(e).gamma
    for key, values in gamma.items():
        for v in values:
            smaller = dict(gamma)
            smaller[key] = values - {v}
            assert not lam_models(smaller, e)


def test_beta_normalize_counts_steps():
    e = lambda_of(parse_labelled("S K K K"))
    out, steps = beta_normalize(e)
    assert steps == 5
    assert de_bruijn(out) == de_bruijn(lambda_of(parse_labelled("K")))
    assert isinstance(out, Lam) and Fun(out.var, out.body.label)
