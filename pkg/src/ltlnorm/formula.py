"""LTL formulas in negation normal form.

Formulas are hash-consed: building the same tree twice returns the same
object, so equality is identity and dictionaries keyed by formulas behave
like maps over distinct subformulas.
"""

import sys
import weakref

# node kinds
TT, FF, LIT = "tt", "ff", "lit"
AND, OR = "and", "or"
NEXT, UNTIL, WUNTIL, RELEASE, SRELEASE = "X", "U", "W", "R", "M"
GF_, FG_ = "GF", "FG"
HOLE = "hole"

BINARY_TEMPORAL = frozenset({UNTIL, WUNTIL, RELEASE, SRELEASE})
LIMIT = frozenset({GF_, FG_})
TEMPORAL = frozenset({NEXT, UNTIL, WUNTIL, RELEASE, SRELEASE, GF_, FG_})
U_LIKE = frozenset({UNTIL, SRELEASE})
W_LIKE = frozenset({WUNTIL, RELEASE})

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))

_table = weakref.WeakValueDictionary()


class Formula:
    """An interned NNF formula node.

    `op` is the node kind, `args` the children, and for literals `name`
    and `positive` carry the proposition and its polarity.
    """

    __slots__ = ("op", "args", "name", "positive", "_hash", "_size", "__weakref__")

    def __new__(cls, op, args=(), name=None, positive=True):
        key = (op, name, positive, args)
        node = _table.get(key)
        if node is not None:
            return node
        node = object.__new__(cls)
        node.op = op
        node.args = args
        node.name = name
        node.positive = positive
        node._hash = hash(key)
        node._size = 1 + sum(a._size for a in args)
        _table[key] = node
        return node

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return self is other

    def __ne__(self, other):
        return self is not other

    def __reduce__(self):
        return (Formula, (self.op, self.args, self.name, self.positive))

    def __setattr__(self, key, value):
        if hasattr(self, "_size"):
            raise AttributeError("formulas are immutable")
        object.__setattr__(self, key, value)

    @property
    def left(self):
        return self.args[0]

    @property
    def right(self):
        return self.args[1]

    @property
    def arg(self):
        return self.args[0]

    @property
    def size(self):
        """Number of nodes of the syntax tree (shared subtrees counted per occurrence)."""
        return self._size

    def is_literal(self):
        return self.op == LIT

    def is_limit(self):
        return self.op in LIMIT

    def is_temporal(self):
        return self.op in TEMPORAL

    def is_proper(self):
        """Neither a constant nor a conjunction or disjunction."""
        return self.op not in (TT, FF, AND, OR)

    def __repr__(self):
        from .printer import to_text
        return f"Formula({to_text(self)!r})"

    def __str__(self):
        from .printer import to_text
        return to_text(self)


tt = Formula(TT)
ff = Formula(FF)
hole = Formula(HOLE)


def Lit(name, positive=True):
    return Formula(LIT, (), name, positive)


def And(left, right):
    return Formula(AND, (left, right))


def Or(left, right):
    return Formula(OR, (left, right))


def Next(arg):
    return Formula(NEXT, (arg,))


def Until(left, right):
    return Formula(UNTIL, (left, right))


def WeakUntil(left, right):
    return Formula(WUNTIL, (left, right))


def Release(left, right):
    return Formula(RELEASE, (left, right))


def StrongRelease(left, right):
    return Formula(SRELEASE, (left, right))


def GF(arg):
    return Formula(GF_, (arg,))


def FG(arg):
    return Formula(FG_, (arg,))


def F(arg):
    return Until(tt, arg)


def G(arg):
    return WeakUntil(arg, ff)


def make(op, args):
    """Rebuild a node of kind `op` over new children."""
    return Formula(op, tuple(args))


def conj(items):
    """Right-nested conjunction; tt when empty."""
    items = list(items)
    if not items:
        return tt
    out = items[-1]
    for f in reversed(items[:-1]):
        out = And(f, out)
    return out


def disj(items):
    """Right-nested disjunction; ff when empty."""
    items = list(items)
    if not items:
        return ff
    out = items[-1]
    for f in reversed(items[:-1]):
        out = Or(f, out)
    return out


def is_eventually(f):
    return f.op == UNTIL and f.left is tt


def is_always(f):
    return f.op == WUNTIL and f.right is ff


_DUAL = {
    TT: FF, FF: TT, AND: OR, OR: AND, NEXT: NEXT,
    UNTIL: RELEASE, RELEASE: UNTIL, WUNTIL: SRELEASE, SRELEASE: WUNTIL,
    GF_: FG_, FG_: GF_, HOLE: HOLE,
}


def negate(f):
    """The NNF formula equivalent to the negation of `f`, of the same size."""
    memo = {}

    def go(g):
        r = memo.get(g)
        if r is not None:
            return r
        if g.op == LIT:
            r = Lit(g.name, not g.positive)
        elif g.op in (TT, FF, HOLE):
            r = Formula(_DUAL[g.op])
        else:
            r = make(_DUAL[g.op], [go(a) for a in g.args])
        memo[g] = r
        return r

    return go(f)


def iter_dag(f):
    """Yield every distinct subformula of `f` once, children before parents."""
    seen = set()
    stack = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if expanded:
            yield g
            continue
        if g in seen:
            continue
        seen.add(g)
        stack.append((g, True))
        for a in reversed(g.args):
            if a not in seen:
                stack.append((a, False))


def subformulas(f):
    return set(iter_dag(f))


def proper_subformulas(f):
    return {g for g in iter_dag(f) if g.is_proper()}


def propositions(f):
    return sorted({g.name for g in iter_dag(f) if g.op == LIT})


def has_limit(f):
    return any(g.op in LIMIT for g in iter_dag(f))


def contains(f, pred, skip_limits=False):
    """Whether some node of `f` satisfies `pred`, optionally not looking inside limit nodes."""
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if pred(g):
            return True
        if skip_limits and g.op in LIMIT:
            continue
        stack.extend(g.args)
    return False


def replace(f, mapping, skip_limits=False):
    """Substitute occurrences of the keys of `mapping`, outermost first.

    With `skip_limits` the substitution does not enter limit nodes.
    """
    memo = {}

    def go(g):
        if g in mapping:
            return mapping[g]
        if not g.args or (skip_limits and g.op in LIMIT):
            return g
        r = memo.get(g)
        if r is None:
            args = tuple(go(a) for a in g.args)
            r = g if args == g.args else make(g.op, args)
            memo[g] = r
        return r

    return go(f)


def expand_limits(f):
    """Rewrite GF ψ and FG ψ into G F ψ and F G ψ."""
    memo = {}

    def go(g):
        r = memo.get(g)
        if r is not None:
            return r
        if not g.args:
            r = g
        else:
            args = [go(a) for a in g.args]
            if g.op == GF_:
                r = G(F(args[0]))
            elif g.op == FG_:
                r = F(G(args[0]))
            else:
                r = make(g.op, args)
        memo[g] = r
        return r

    return go(f)
