"""Closed-form Δ2 normalization by case split over limit contexts.

For every choice of which GF ψ (ψ in the GF basis) and FG ψ (ψ in the FG
basis) hold, the formula collapses to a Σ2 part plus limit formulas whose
arguments are in Π1 or Σ1.  The disjunction over all choices is equivalent
to the input.
"""

from dataclasses import dataclass, field

from . import formula as fm
from .formula import (
    AND, FF, LIMIT, LIT, NEXT, OR, RELEASE, SRELEASE, TT, UNTIL, WUNTIL,
)
from .simplify import simplify


class LimitOperatorError(ValueError):
    pass


@dataclass(frozen=True)
class Basis:
    gf: tuple
    fg: tuple
    # (kind, ψ) -> frozenset of (kind, ψ') strictly below it
    order: dict = field(hash=False, compare=False)

    def below(self, kind, psi):
        return self.order[(kind, psi)]


@dataclass(frozen=True)
class Context:
    m: frozenset
    n: frozenset


def compute_basis(f):
    """GF and FG basis arguments of a limit-free formula, in pre-order of discovery.

    ψ1 U ψ2 and ψ2 M ψ1 contribute ψ2 to the GF side (their truth hinges on
    GF ψ2); ψ1 W ψ2 and ψ2 R ψ1 contribute ψ1 to the FG side.
    """
    gf, fg = [], []
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if g.op in LIMIT:
            raise LimitOperatorError("basis is defined for limit-free formulas")
        if g.op == UNTIL and g.right not in gf:
            gf.append(g.right)
        elif g.op == SRELEASE and g.left not in gf:
            gf.append(g.left)
        elif g.op == WUNTIL and g.left not in fg:
            fg.append(g.left)
        elif g.op == RELEASE and g.right not in fg:
            fg.append(g.right)
        stack.extend(reversed(g.args))
    keys = [("GF", p) for p in gf] + [("FG", p) for p in fg]
    sub = {p: fm.subformulas(p) for _, p in keys}
    order = {
        (k, p): frozenset((k2, q) for k2, q in keys if q is not p and q in sub[p])
        for k, p in keys
    }
    return Basis(tuple(gf), tuple(fg), order)


def eval_nu(psi, m):
    """Π1 approximation of ψ assuming exactly the GF-arguments in `m` recur."""
    memo = {}

    def go(g):
        r = memo.get(g)
        if r is not None:
            return r
        op = g.op
        if op in (TT, FF, LIT):
            r = g
        elif op == UNTIL:
            r = fm.WeakUntil(go(g.left), go(g.right)) if g.right in m else fm.ff
        elif op == SRELEASE:
            r = fm.Release(go(g.left), go(g.right)) if g.left in m else fm.ff
        elif op in (AND, OR, NEXT, WUNTIL, RELEASE):
            r = fm.make(op, [go(a) for a in g.args])
        else:
            raise LimitOperatorError(f"unexpected node {op!r}")
        memo[g] = r
        return r

    return go(psi)


def eval_mu(psi, n):
    """Σ1 approximation of ψ assuming exactly the FG-arguments in `n` stabilize."""
    memo = {}

    def go(g):
        r = memo.get(g)
        if r is not None:
            return r
        op = g.op
        if op in (TT, FF, LIT):
            r = g
        elif op == WUNTIL:
            r = fm.tt if g.left in n else fm.Until(go(g.left), go(g.right))
        elif op == RELEASE:
            r = fm.tt if g.right in n else fm.StrongRelease(go(g.left), go(g.right))
        elif op in (AND, OR, NEXT, UNTIL, SRELEASE):
            r = fm.make(op, [go(a) for a in g.args])
        else:
            raise LimitOperatorError(f"unexpected node {op!r}")
        memo[g] = r
        return r

    return go(psi)


def flatten(f, m):
    """Σ2 formula equivalent to `f` on words whose recurring GF-arguments are `m`."""
    memo = {}

    def go(g):
        r = memo.get(g)
        if r is not None:
            return r
        op = g.op
        if op in (TT, FF, LIT):
            r = g
        elif op == WUNTIL:
            r = fm.Until(go(g.left), fm.Or(go(g.right), fm.G(eval_nu(g.left, m))))
        elif op == RELEASE:
            r = fm.StrongRelease(fm.Or(go(g.left), fm.G(eval_nu(g.right, m))), go(g.right))
        elif op in (AND, OR, NEXT, UNTIL, SRELEASE):
            r = fm.make(op, [go(a) for a in g.args])
        else:
            raise LimitOperatorError(f"unexpected node {op!r}")
        memo[g] = r
        return r

    return go(f)


@dataclass(frozen=True)
class Disjunct:
    context: Context
    raw: object         # formula before simplification
    formula: object     # simplified; ff when the context is contradictory


def _subsets(items):
    """All subsets in binary-counter order: bit i of the counter selects items[i]."""
    k = len(items)
    for mask in range(1 << k):
        yield frozenset(items[i] for i in range(k) if mask >> i & 1)


def context_formula(f, ctx, basis=None):
    """flatten(f, M) ∧ ⋀ FG evalν(ψ, M) for ψ in N ∧ ⋀ GF evalμ(ψ, N) for ψ in M."""
    basis = basis or compute_basis(f)
    pos = {p: i for i, p in enumerate(basis.gf + basis.fg)}
    parts = [flatten(f, ctx.m)]
    parts += [fm.FG(eval_nu(p, ctx.m)) for p in sorted(ctx.n, key=pos.get)]
    parts += [fm.GF(eval_mu(p, ctx.n)) for p in sorted(ctx.m, key=pos.get)]
    return fm.conj(parts)


def closed_form_disjuncts(f):
    """One entry per context (M, N), in binary-counter order over gf followed by fg."""
    f = fm.expand_limits(f)
    basis = compute_basis(f)
    out = []
    for n in _subsets(basis.fg):
        for m in _subsets(basis.gf):
            ctx = Context(m, n)
            raw = context_formula(f, ctx, basis)
            out.append(Disjunct(ctx, raw, simplify(raw)))
    return out


def normalize_closed_form(f):
    """Δ2 formula equivalent to `f`: the disjunction of all surviving context formulas."""
    kept = [d.formula for d in closed_form_disjuncts(f) if d.formula is not fm.ff]
    return simplify(fm.disj(kept))


def raw_closed_form(f):
    """The full disjunction before any simplification."""
    return fm.disj(d.raw for d in closed_form_disjuncts(f))
