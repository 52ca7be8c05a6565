"""Sound constant folding and deduplication of conjunctions/disjunctions."""

from . import formula as fm
from .formula import AND, FF, FG_, GF_, NEXT, OR, RELEASE, SRELEASE, TT, UNTIL, WUNTIL


def _flat(f, op, out):
    if f.op == op:
        _flat(f.left, op, out)
        _flat(f.right, op, out)
    else:
        out.append(f)


def _junction(op, parts):
    unit, zero = (fm.tt, fm.ff) if op == AND else (fm.ff, fm.tt)
    flat = []
    for p in parts:
        _flat(p, op, flat)
    seen, kept = set(), []
    for p in flat:
        if p is zero:
            return zero
        if p is unit or p in seen:
            continue
        seen.add(p)
        kept.append(p)
    return fm.conj(kept) if op == AND else fm.disj(kept)


def _fold(op, a, b):
    tt, ff = fm.tt, fm.ff
    if op == UNTIL:
        if b is ff or b is tt:
            return b
    elif op == WUNTIL:
        if a is tt or b is tt:
            return tt
        if a is ff and b is ff:
            return ff
    elif op == RELEASE:
        if b is tt or b is ff:
            return b
    elif op == SRELEASE:
        if b is ff or a is ff:
            return ff
    return fm.make(op, (a, b))


def simplify(f):
    """Equivalent formula after exhaustive constant folding and dedup.

    The rules only remove structure: φ∧tt, φ∨ff, φ U ff, φ U tt, tt W φ,
    φ W tt, ff W ff, φ R ff, φ R tt, φ M ff, ff M φ and constants under X,
    GF, FG; repeated operands of ∧/∨ chains are dropped.
    """
    memo = {}

    def go(g):
        r = memo.get(g)
        if r is not None:
            return r
        op = g.op
        if not g.args:
            r = g
        elif op in (AND, OR):
            r = _junction(op, [go(a) for a in g.args])
        elif op in (NEXT, GF_, FG_):
            a = go(g.arg)
            r = a if a is fm.tt or a is fm.ff else fm.make(op, (a,))
        else:
            r = _fold(op, go(g.left), go(g.right))
        memo[g] = r
        return r

    return go(f)
