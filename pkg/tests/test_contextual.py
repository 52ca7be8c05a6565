import pytest
from hypothesis import given

from conftest import extended_formulas, formulas, lassos
from ltlnorm import formula as fm
from ltlnorm.contextual import (
    LimitOperatorError, closed_form_disjuncts, compute_basis, eval_mu, eval_nu, flatten,
    normalize_closed_form,
)
from ltlnorm.hierarchy import Pi, Sigma, in_class, is_delta2
from ltlnorm.lasso import eval_lasso
from ltlnorm.parser import parse

P = parse
EXAMPLE = P("((a W b) U c) W d")

# scripts/flatten_constant.py measures max |flatten(φ, M)| / n² = 1.0 on the
# default corpus (reached by single literals); 2 leaves room for hypothesis
FLATTEN_C = 2


def test_basis_of_running_example():
    basis = compute_basis(EXAMPLE)
    assert set(basis.gf) == {P("c")}
    assert set(basis.fg) == {P("(a W b) U c"), P("a")}
    assert compute_basis(P("a U b")).gf == (P("b"),)
    assert compute_basis(P("a")).gf == () == compute_basis(P("a")).fg


def test_basis_rejects_limits():
    with pytest.raises(LimitOperatorError):
        compute_basis(P("GF a"))


def test_eval_nu_examples():
    psi = P("(a W b) U c")
    assert eval_nu(psi, {P("c")}) is P("(a W b) W c")
    assert eval_nu(psi, set()) is fm.ff
    assert eval_nu(P("a"), set()) is P("a")


def test_eval_mu_examples():
    assert eval_mu(P("a W b"), set()) is P("a U b")
    assert eval_mu(P("a W b"), {P("a")}) is fm.tt
    assert eval_mu(P("b"), set()) is P("b")


def test_flatten_examples():
    want = P("((a U (b | G a)) U c) U (d | G((a W b) W c))")
    assert flatten(EXAMPLE, {P("c")}) is want
    assert flatten(P("a U b"), {P("b")}) is P("a U b")
    assert flatten(P("G a"), set()) is P("a U (ff | G a)")


def test_flatten_without_c_is_derived_not_fixed():
    # with GF c absent the inner W collapses through evalν to ff
    g = flatten(EXAMPLE, set())
    assert g is P("((a U (b | G a)) U c) U (d | G ff)")


@pytest.mark.parametrize("text, target", [
    ("F G (a U b)", "GF b & FG (a W b)"),
    ("G F (a W b)", "FG a | GF (a U b)"),
    ("a", "a"),
])
def test_closed_form_examples(text, target, rng):
    from ltlnorm.corpus import random_lassos
    out = normalize_closed_form(P(text))
    assert is_delta2(out)
    for w in random_lassos(3, ("a", "b"), 300):
        assert eval_lasso(out, w) == eval_lasso(P(target), w)


def _realized(basis, w):
    return frozenset(p for p in basis.gf if eval_lasso(fm.GF(p), w))


def _realized_fg(basis, w):
    return frozenset(p for p in basis.fg if eval_lasso(fm.FG(p), w))


@given(formulas, lassos())
def test_eval_nu_exact_under_realized_context(f, w):
    basis = compute_basis(f)
    m = _realized(basis, w)
    for psi in basis.fg:
        assert eval_lasso(fm.FG(psi), w) == eval_lasso(fm.FG(eval_nu(psi, m)), w)


@given(formulas, lassos())
def test_eval_mu_exact_under_realized_context(f, w):
    basis = compute_basis(f)
    n = _realized_fg(basis, w)
    for psi in basis.gf:
        assert eval_lasso(fm.GF(psi), w) == eval_lasso(fm.GF(eval_mu(psi, n)), w)


@given(formulas, lassos())
def test_flatten_exact_under_realized_context(f, w):
    basis = compute_basis(f)
    assert eval_lasso(f, w) == eval_lasso(flatten(f, _realized(basis, w)), w)


@given(formulas, lassos())
def test_context_monotonicity(f, w):
    basis = compute_basis(f)
    small = frozenset(basis.gf[: len(basis.gf) // 2])
    big = frozenset(basis.gf)
    for psi in basis.fg:
        if eval_lasso(fm.FG(eval_nu(psi, small)), w):
            assert eval_lasso(fm.FG(eval_nu(psi, big)), w)
    small_n = frozenset(basis.fg[: len(basis.fg) // 2])
    big_n = frozenset(basis.fg)
    for psi in basis.gf:
        if eval_lasso(fm.GF(eval_mu(psi, small_n)), w):
            assert eval_lasso(fm.GF(eval_mu(psi, big_n)), w)


@given(formulas)
def test_syntactic_classes(f):
    basis = compute_basis(f)
    m, n = frozenset(basis.gf), frozenset(basis.fg)
    for psi in basis.fg:
        assert in_class(eval_nu(psi, m), Pi(1))
    for psi in basis.gf:
        assert in_class(eval_mu(psi, n), Sigma(1))
    assert in_class(flatten(f, m), Sigma(2))
    assert in_class(flatten(f, frozenset()), Sigma(2))


@given(formulas)
def test_flatten_ignores_non_basis_context(f):
    basis = compute_basis(f)
    m = frozenset(basis.gf)
    junk = m | {fm.Lit("zz")}
    assert flatten(f, junk) is flatten(f, m)


@given(formulas)
def test_flatten_size_is_quadratic(f):
    n = f.size
    for m in (frozenset(), frozenset(compute_basis(f).gf)):
        assert flatten(f, m).size <= FLATTEN_C * n * n


@given(formulas)
def test_disjunct_count(f):
    basis = compute_basis(f)
    assert len(closed_form_disjuncts(f)) == 2 ** (len(basis.gf) + len(basis.fg))


@given(extended_formulas, lassos())
def test_closed_form_is_equivalent_and_delta2(f, w):
    g = normalize_closed_form(f)
    assert is_delta2(g)
    assert eval_lasso(g, w) == eval_lasso(f, w)


@given(formulas)
def test_eval_mu_is_dual_of_eval_nu(f):
    basis = compute_basis(f)
    neg = fm.negate(f)
    for k in range(1 << len(basis.gf)):
        m = frozenset(p for i, p in enumerate(basis.gf) if k >> i & 1)
        # GF p failing is FG p̄ holding, so the dual context is the complement
        n = frozenset(fm.negate(p) for p in basis.gf if p not in m)
        assert fm.negate(eval_nu(f, m)) is eval_mu(neg, n)
