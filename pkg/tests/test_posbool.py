from hypothesis import given, strategies as st

from oracles import brute_models, eval_tree
from ltlnorm.posbool import FF, TT, PosBool, minimal_models

VARS = range(6)
WIDE = range(12)


def _tree(children):
    return st.builds(lambda op, xs: {"op": op, "args": xs},
                     st.sampled_from(["and", "or"]), st.lists(children, min_size=1, max_size=3))


def _trees(variables):
    leaf = st.one_of(st.builds(lambda q: {"op": "var", "id": q}, st.sampled_from(variables)),
                     st.sampled_from([{"op": "tt"}, {"op": "ff"}]))
    return st.recursive(leaf, _tree, max_leaves=8)


trees = _trees(VARS)


def q(i):
    return PosBool.var(i)


def test_minimal_models_examples():
    assert minimal_models(q(0) | (q(1) & q(2))) == {frozenset({0}), frozenset({1, 2})}
    assert minimal_models((q(0) | q(1)) & (q(0) | q(2))) == {frozenset({0}), frozenset({1, 2})}
    assert minimal_models(TT) == {frozenset()}
    assert minimal_models(FF) == frozenset()


@given(_trees(WIDE))
def test_antichain_matches_brute_force(t):
    assert PosBool.from_tree(t).models == brute_models(t, WIDE)


@given(trees, trees)
def test_equality_is_semantic_equivalence(t1, t2):
    same = all(eval_tree(t1, s) == eval_tree(t2, s) for s in _assignments())
    assert (PosBool.from_tree(t1) == PosBool.from_tree(t2)) == same


def _assignments():
    for bits in range(1 << len(VARS)):
        yield frozenset(v for v in VARS if bits >> v & 1)


@given(trees)
def test_tree_round_trip_and_idempotence(t):
    p = PosBool.from_tree(t)
    assert PosBool.from_tree(p.to_tree()) == p
    assert PosBool(p.models) == p


@given(trees)
def test_dual_swaps_connectives(t):
    p = PosBool.from_tree(t)
    d = p.dual()
    # θ̃(S) = ¬θ(complement of S)
    for s in _assignments():
        assert d.satisfied_by(s) == (not p.satisfied_by(frozenset(VARS) - s))
    assert d.dual() == p


@given(trees, trees)
def test_substitute_is_composition(t, u):
    p, r = PosBool.from_tree(t), PosBool.from_tree(u)
    sub = p.substitute(lambda v: r if v == 0 else q(v))
    for s in _assignments():
        inner = {v for v in s if v != 0} | ({0} if r.satisfied_by(s) else set())
        assert sub.satisfied_by(s) == p.satisfied_by(inner)


def test_keep_only_sets_others_false():
    p = (q(0) & q(1)) | q(2) | (q(3) & q(0))
    assert p.keep_only({0, 1, 3}) == (q(0) & q(1)) | (q(0) & q(3))
    assert p.keep_only(set()) == FF
    assert TT.keep_only(set()) == TT
