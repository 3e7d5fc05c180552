import random

import pytest
from hypothesis import given

from sfcfa.cfa_sf import analyze_sf, f_template, gen_sf, models_sf, violations_sf
from sfcfa.fixtures import SF_IDENTITY_PHI, SF_IDENTITY_TABLE, SF_IDENTITY_TERM, table_gamma
from sfcfa.harness import normal_form_heads, substitution_instances
from sfcfa.reduction import all_one_step, evaluate, top_step_sf
from sfcfa.solver import AppPair, Comb, parse_value, solve
from sfcfa.terms import CalculusError, Label, parse, parse_labelled, to_text

from conftest import sf_terms


def test_template_shape():
    assert to_text(f_template(3)) == "<y>^3.F.2 @^3.F.M <u>^3.F.L @^3.F.3 <v>^3.F.R"


def test_f_atom_branch():
    t = parse("F^3 @^4 F^2 @^5 S^1 @^6 S^0", "sf")
    sol = analyze_sf(t)
    expected = table_gamma({
        "0": ["S_0^0"], "1": ["S_0^1"], "2": ["F_0^2"], "3": ["F_0^3"],
        "3.F.0": ["F_0^2"], "3.F.1": ["S_0^1"], "3.F.2": ["S_0^0"], "3.F.3": ["S_0^1"],
        "4": ["F_1^3", "@^(3,2)"], "5": ["F_2^3", "@^(4,1)"], "6": ["S_0^1", "@^(5,0)"],
    })
    assert sol.gamma == expected and sol.phi == {3}
    assert top_step_sf(t) == parse("S^1", "sf")


def test_single_f():
    sol = analyze_sf(parse("F^0", "sf"))
    assert sol.gamma == {Label(0): {Comb("F", 0, 0)}} and not sol.phi


def test_rejects_k():
    with pytest.raises(CalculusError):
        gen_sf(parse("K^0"))


def test_factor_branch_splits_first_argument():
    # F^5 (S^3 @^4 S^2) F^1 S^0 factors S S into S^0 S^3 S^2
    t = parse_labelled("F (S S) F S", "sf")
    assert to_text(t) == "F^5 @^6 (S^3 @^4 S^2) @^7 F^1 @^8 S^0"
    sol = analyze_sf(t)
    assert sol[Label(5, "F.0")] == {Comb("S", 1, 3), AppPair(Label(3), Label(2))}
    assert sol[Label(5, "F.L")] == sol[Label(3)]
    assert sol[Label(5, "F.R")] == sol[Label(2)]
    assert sol.phi == {5}
    assert models_sf(sol.gamma, sol.phi, evaluate(t, "sf").result)


def test_identity_applied_to_itself():
    t = parse_labelled(SF_IDENTITY_TERM, "sf")
    sol = analyze_sf(t)
    table = table_gamma(SF_IDENTITY_TABLE)
    for label, values in table.items():
        assert sol[label] == values, label
    assert sol.phi == SF_IDENTITY_PHI
    assert set(sol.labels()) == set(table)
    assert AppPair(Label(15, "S.L"), Label(15, "S.R")) in sol[Label(15, "S.3")]


def test_published_table_is_a_model():
    t = parse_labelled(SF_IDENTITY_TERM, "sf")
    assert models_sf(table_gamma(SF_IDENTITY_TABLE), SF_IDENTITY_PHI, t)


def test_dropping_result_at_root_is_caught():
    t = parse_labelled(SF_IDENTITY_TERM, "sf")
    gamma = table_gamma(SF_IDENTITY_TABLE)
    gamma[Label(18)] = gamma[Label(18)] - {parse_value("S_2^6")}
    assert [str(v) for v in violations_sf(gamma, SF_IDENTITY_PHI, t)] == [
        "@^18 forall S_2 [S_2^15]: G(15.S.3) <= G(18)"
    ]


def test_non_canonical_witness_accepted():
    # reduce the published term while it sits as the left child of @^19: the
    # parent keeps its canonical pair @^(18,20), but its left child is now
    # labelled 15.S.3, whose abstraction lies within G(18)
    t = parse(f"({SF_IDENTITY_TERM}) @^19 F^20", "sf")
    sol = analyze_sf(t)
    (rx, reduct), = [(rx, u) for rx, u in all_one_step(t, "sf") if rx.path == (0,)]
    assert reduct.left.label == Label(15, "S.3")
    assert AppPair(Label(15, "S.3"), Label(20)) not in sol[Label(19)]
    assert models_sf(sol.gamma, sol.phi, reduct)
    assert not models_sf(sol.gamma, sol.phi, reduct, naive_witness=True)


def test_published_solution_uses_both_witnesses():
    gamma = table_gamma(SF_IDENTITY_TABLE)
    assert {AppPair(Label(15, "S.L"), Label(15, "S.R")), AppPair(Label(7), Label(2))} <= \
        gamma[Label(15, "S.3")]


@given(sf_terms)
def test_root_reduction_coherence(t):
    sol = analyze_sf(t)
    out = top_step_sf(t)
    if out is None:
        return
    assert models_sf(sol.gamma, sol.phi, out)
    assert sol[out.label] <= sol[t.label]


@given(sf_terms)
def test_any_position_coherence(t):
    sol = analyze_sf(t)
    gamma = sol.gamma
    frontier = [t]
    for _ in range(3):
        nxt = []
        for u in frontier:
            for _, v in all_one_step(u, "sf"):
                assert models_sf(gamma, sol.phi, v)
                assert sol[v.label] <= sol[u.label]
                nxt.append(v)
        frontier = nxt[:20]


@given(sf_terms)
def test_heads_of_normal_forms_are_predicted(t):
    sol = analyze_sf(t)
    got = normal_form_heads(t, "sf", sol, fuel=100)
    if got is not None:
        assert got[1], got[0]


def test_substitution_needs_the_existential():
    rng = random.Random(5)
    naive_failures = 0
    for sol, inst in substitution_instances(rng, 200):
        assert models_sf(sol.gamma, sol.phi, inst.instance)
        naive_failures += not models_sf(sol.gamma, sol.phi, inst.instance, naive_witness=True)
    assert naive_failures > 0


def test_both_branches_can_fire():
    # F^1 may receive the atom F^2 or the partial application F^2 @ ...
    t = parse_labelled("S (S F) S (F (F F) F)", "sf")
    sol = analyze_sf(t)
    first = sol[Label(1, "F.0")]
    assert {Comb("F", 0, 2), Comb("F", 1, 2)} <= first
    # atom branch: second argument flows to the result
    assert sol[Label(1, "F.1")] <= sol[Label(1, "F.3")]
    # factor branch: template instantiated and halves recorded
    assert AppPair(Label(1, "F.M"), Label(1, "F.R")) in sol[Label(1, "F.3")]
    assert sol[Label(1, "F.L")]


@given(sf_terms)
def test_cycle_collapsing_agrees_on_terms(t):
    cs = gen_sf(t)
    eager, lazy = solve(cs, collapse_after=0), solve(cs, collapse_after=10**9)
    assert eager.gamma == lazy.gamma
    assert eager.phi == lazy.phi
