import json

import pytest
from hypothesis import given, settings, strategies as st

from conftest import extended_formulas, formulas, lassos
from oracles import alternating_accepts
from ltlnorm.alternating import AlternatingAutomaton, automaton_class, ltl_to_a1w
from ltlnorm.contextual import closed_form_disjuncts
from ltlnorm.corpus import random_lassos
from ltlnorm.determinize import (
    AlphabetError, DeterministicAutomaton, PreconditionError, Rabin, TerminalAccepting,
    TerminalRejecting, Weak, aww2_to_drw, breakpoint_buchi, breakpoint_cobuchi,
    determinize_aww1, drw_accepts_lasso, empty, is_weak_partition, lasso_cycle, ltl_to_drw,
    product, split_initial, universal,
)
from ltlnorm.lasso import LassoWord, eval_lasso, parse_lasso
from ltlnorm.parser import parse
from ltlnorm.posbool import FF, TT, PosBool

P = parse
AB = ("a", "b")


def word(text, ap=AB):
    return parse_lasso(text, ap=ap)


def agrees(d, f, n=200, seed=5):
    return all(drw_accepts_lasso(d, w) == eval_lasso(f, w) for w in random_lassos(seed, d.ap, n))


# ---------------------------------------------------------------- break-point constructions

def test_cobuchi_on_persistence():
    d = breakpoint_cobuchi(ltl_to_a1w(P("F G a"), ap=AB))
    assert d.kind == "CoBuchi"
    assert drw_accepts_lasso(d, word(";{a}"))
    assert not drw_accepts_lasso(d, word(";{a},{}"))
    assert agrees(d, P("F G a"))


def test_cobuchi_on_eventually():
    d = breakpoint_cobuchi(ltl_to_a1w(P("F b"), ap=AB))
    assert drw_accepts_lasso(d, word("{},{b};{}"))
    assert not drw_accepts_lasso(d, word(";{}"))


def test_cobuchi_of_false_initial_is_a_rejecting_sink():
    d = breakpoint_cobuchi(ltl_to_a1w(P("F b"), ap=AB).with_initial(FF))
    assert len(d) == 1
    assert not drw_accepts_lasso(d, word(";{b}"))


def test_buchi_on_recurrence_and_safety():
    d = breakpoint_buchi(ltl_to_a1w(P("G F a"), ap=AB))
    assert d.kind == "Buchi"
    assert drw_accepts_lasso(d, word(";{a},{}"))
    assert not drw_accepts_lasso(d, word("{a};{}"))
    g = breakpoint_buchi(ltl_to_a1w(P("G a"), ap=AB))
    assert drw_accepts_lasso(g, word(";{a}"))
    assert not drw_accepts_lasso(g, word(";{a},{}"))


def test_buchi_of_true_initial_is_universal():
    d = breakpoint_buchi(ltl_to_a1w(P("G a"), ap=AB).with_initial(TT))
    assert all(drw_accepts_lasso(d, w) for w in random_lassos(1, AB, 50))


def test_wrong_polarity_is_rejected():
    with pytest.raises(PreconditionError):
        breakpoint_cobuchi(ltl_to_a1w(P("G F a"), ap=AB))
    with pytest.raises(PreconditionError):
        breakpoint_buchi(ltl_to_a1w(P("F G a"), ap=AB))


# ---------------------------------------------------------------- Rabin pipeline

def test_single_model_gives_one_pair():
    d = aww2_to_drw(ltl_to_a1w(P("F G a"), ap=AB))
    assert d.pair_count == 1


def test_delta2_formula_to_rabin():
    f = P("GF b & FG (a W b)")
    d = aww2_to_drw(ltl_to_a1w(f, ap=AB))
    assert drw_accepts_lasso(d, word(";{a},{b}"))
    assert not drw_accepts_lasso(d, word(";{a}"))
    assert agrees(d, f)


def test_two_minimal_models_give_two_pairs():
    f = P("F a | G b")
    aut = ltl_to_a1w(f, ap=AB)
    assert len(split_initial(aut)) == 2
    d = aww2_to_drw(aut)
    assert d.pair_count == 2
    assert drw_accepts_lasso(d, word(";{b}"))
    assert drw_accepts_lasso(d, word("{},{a};{}"))
    assert agrees(d, f)


def test_grouped_split_is_equivalent():
    f = P("(GF a | FG b) & (a U b)")
    aut = ltl_to_a1w(f, ap=AB)
    for mode in ("models", "grouped"):
        assert agrees(aww2_to_drw(aut, split=mode), f)
    with pytest.raises(ValueError):
        split_initial(aut, "bogus")


def test_ltl_to_drw_examples():
    d = ltl_to_drw(P("FG (a U b)"))
    assert drw_accepts_lasso(d, word(";{b}"))
    assert not drw_accepts_lasso(d, word(";{a}"))
    t = ltl_to_drw(P("tt"), ap=AB)
    assert len(t) == 1 and drw_accepts_lasso(t, word(";{}"))
    f = P("((a W b) U c) W d")
    assert agrees(ltl_to_drw(f), f, n=500)


def test_pairs_bounded_by_surviving_contexts():
    for text in ["FG (a U b)", "GF (a W b)", "((a W b) U c) W d", "(GF a | FG b) & (GF c | FG a)"]:
        f = P(text)
        alive = sum(1 for d in closed_form_disjuncts(f) if d.formula.op != "ff")
        assert ltl_to_drw(f).pair_count <= max(1, alive)


@given(extended_formulas, lassos())
@settings(max_examples=40)
def test_ltl_to_drw_matches_semantics(f, w):
    assert drw_accepts_lasso(ltl_to_drw(f, ap=w.ap), w) == eval_lasso(f, w)


# ---------------------------------------------------------------- AWW[1]

def test_aww1_eventually_is_terminal_accepting():
    d = determinize_aww1(ltl_to_a1w(P("F a"), ap=AB))
    assert isinstance(d.acceptance, TerminalAccepting)
    assert len(d) == 2
    assert agrees(d, P("F a"))


def test_aww1_always_is_terminal_rejecting():
    d = determinize_aww1(ltl_to_a1w(P("G a"), ap=AB))
    assert isinstance(d.acceptance, TerminalRejecting)
    assert agrees(d, P("G a"))


def test_aww1_mixed_is_weak():
    f = P("F a & G b")
    d = determinize_aww1(ltl_to_a1w(f, ap=AB))
    assert isinstance(d.acceptance, Weak)
    assert is_weak_partition(d)
    assert agrees(d, f)


def test_aww1_rejects_height_two():
    with pytest.raises(PreconditionError):
        determinize_aww1(ltl_to_a1w(P("F G a"), ap=AB))


# ---------------------------------------------------------------- products and lassos

def test_union_and_intersection():
    fa = ltl_to_drw(P("F a"), ap=AB)
    gb = ltl_to_drw(P("G b"), ap=AB)
    u = product(fa, gb, "union")
    assert drw_accepts_lasso(u, word(";{b}"))
    assert agrees(u, P("F a | G b"))
    d = ltl_to_drw(P("FG (a U b)"))
    both = product(d, ltl_to_drw(P("GF a"), ap=AB), "union")
    assert both.pair_count == d.pair_count + 1
    i = product(d, universal(AB), "intersect")
    assert agrees(i, P("FG (a U b)"))
    gb1 = determinize_aww1(ltl_to_a1w(P("G b"), ap=AB))
    assert agrees(product(gb1, d, "intersect"), P("G b & FG (a U b)"))


def test_alphabet_mismatch():
    with pytest.raises(AlphabetError):
        product(universal(("a",)), universal(AB), "union")
    with pytest.raises(AlphabetError):
        drw_accepts_lasso(universal(AB), LassoWord(("a",), (), (1,)))


def test_lasso_acceptance_basics():
    for w in random_lassos(2, AB, 20):
        assert drw_accepts_lasso(universal(AB), w)
        assert not drw_accepts_lasso(empty(AB), w)
    d = ltl_to_drw(P("G F a"))
    assert drw_accepts_lasso(d, parse_lasso(";{a},{}", ap=("a",)))


def test_lasso_remaps_propositions():
    d = ltl_to_drw(P("G F a"))
    assert drw_accepts_lasso(d, word(";{a,b},{b}"))


def test_explicit_tables():
    # two-state Büchi automaton for G F a
    d = DeterministicAutomaton.from_table(("a",), [[0, 1], [0, 1]], [(), {0}], "Buchi", ((None, 0),))
    assert d.acceptance.accepting == {1}
    assert drw_accepts_lasso(d, parse_lasso(";{a},{}", ap=("a",)))
    assert not drw_accepts_lasso(d, parse_lasso("{a};{}", ap=("a",)))
    with pytest.raises(ValueError):
        DeterministicAutomaton.from_table(("a",), [[0]], [()], "Buchi", ((None, 0),))


def test_hoa_and_json():
    d = ltl_to_drw(P("F a | G b"))
    hoa = d.to_hoa("demo")
    lines = hoa.splitlines()
    assert lines[0] == "HOA: v1" and lines[-1] == "--END--"
    assert f"States: {len(d)}" in lines
    assert 'AP: 2 "a" "b"' in lines
    assert any(l.startswith("acc-name: Rabin") for l in lines)
    assert sum(1 for l in lines if l.startswith("  [")) == 4 * len(d)
    data = json.loads(d.dumps())
    assert len(data["states"]) == len(d) and data["acceptance"]["type"] == "Rabin"
    assert isinstance(d.acceptance, Rabin)


# ---------------------------------------------------------------- hand-built AWW[2,R]

def _posbool(draw, pool):
    if not pool:
        return draw(st.sampled_from([TT, FF]))
    clauses = draw(st.lists(st.lists(st.sampled_from(pool), min_size=1, max_size=2),
                            min_size=0, max_size=2))
    if not clauses:
        return draw(st.sampled_from([TT, FF]))
    out = FF
    for c in clauses:
        out = out | PosBool.conj_vars(c)
    return out


@st.composite
def aww2r(draw):
    """Random AWW[2,R] with at most four states over one proposition: α never leads back out."""
    n = draw(st.integers(1, 4))
    k = draw(st.integers(0, n - 1))
    rejecting, accepting = list(range(k + 1)), list(range(k + 1, n))
    delta = []
    for q in range(n):
        pool = list(range(n)) if q in rejecting else accepting
        delta.append([_posbool(draw, pool) for _ in range(2)])
    initial = _posbool(draw, rejecting)
    return AlternatingAutomaton(("a",), [f"q{i}" for i in range(n)], initial, delta, accepting)


@given(aww2r(), lassos(ap=("a",)))
@settings(max_examples=150)
def test_breakpoint_on_hand_built_automata(aut, w):
    d = breakpoint_cobuchi(aut)
    assert automaton_class(aut).height <= 2
    assert len(d) <= 3 ** (2 ** len(aut.labels))
    accepted = alternating_accepts(aut, w)
    cycle = lasso_cycle(d, w)
    assert drw_accepts_lasso(d, w) == accepted
    # past some threshold an accepted word never hits a break-point again
    breaks = [d.keys[q].promising.is_ff() for q in cycle]
    assert (not any(breaks)) == accepted
