"""Three-stage rewrite normalization into Δ2.

Stage 1 removes U/M nodes under W/R nodes (1-form), stage 2 lifts limit
formulas above all temporal operators (1-2-form), and stage 3 clears W/R out
of GF and U/M out of FG (normal form).  Every rule application is recorded.
"""

from dataclasses import dataclass, field

from . import formula as fm
from .formula import (
    AND, FF, FG_, GF_, LIMIT, LIT, NEXT, OR, RELEASE, SRELEASE, TT, UNTIL, WUNTIL,
    U_LIKE, W_LIKE, is_always, is_eventually,
)
from .hierarchy import measures
from .simplify import simplify


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    stage: int
    rule: str
    path: str
    before: object
    after: object       # the rule's right-hand side before simplification

    @property
    def before_nodes(self):
        return self.before.size

    @property
    def after_nodes(self):
        return self.after.size

    def line(self):
        return f"rule={self.rule} path={self.path or '-'} before={self.before_nodes} after={self.after_nodes}"


@dataclass
class RewriteTrace:
    steps: list = field(default_factory=list)
    # stage -> (nodes in, nodes out before simplification, nodes out)
    stages: dict = field(default_factory=dict)

    def record(self, stage, rule, path, before, after):
        self.steps.append(Step(stage, rule, path, before, after))

    def rule_count(self, stage=None):
        return sum(1 for s in self.steps if stage is None or s.stage == stage)

    @property
    def max_raw_nodes(self):
        sizes = [s.after_nodes for s in self.steps]
        sizes += [v[1] for v in self.stages.values()]
        return max(sizes, default=0)

    def lines(self):
        out = []
        for stage in sorted(self.stages):
            nodes_in, raw, nodes_out = self.stages[stage]
            out.append(f"# stage {stage} nodes_in={nodes_in} raw_out={raw} out={nodes_out}")
            out.extend(s.line() for s in self.steps if s.stage == stage)
        return out

    def __str__(self):
        return "\n".join(self.lines())


def _join(path, part):
    return f"{path}.{part}" if path else str(part)


def _free_nodes(f, ops):
    """Nodes with kind in `ops` not under a limit node, as a set."""
    found = set()
    seen = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in seen:
            continue
        seen.add(g)
        if g.op in ops:
            found.add(g)
        if g.op not in LIMIT:
            stack.extend(g.args)
    return found


def _maximal(f, ops, skip_limits=True):
    """Leftmost (pre-order) node with kind in `ops` that is maximal in the subformula order."""
    tops = []
    seen = set()

    def walk(g):
        if g in seen:
            return
        seen.add(g)
        if g.op in ops:
            tops.append(g)
            return
        if skip_limits and g.op in LIMIT:
            return
        for a in g.args:
            walk(a)

    walk(f)
    for cand in tops:
        if not any(other is not cand and cand in fm.subformulas(other) for other in tops):
            return cand
    return None


def _substitute(f, target, fn, share, skip_limits=True):
    """Replace occurrences of `target` by fn(target).

    With `share`, every node with the same operator and the same guard
    argument as `target` is replaced (innermost first), e.g. all ψ U ψ2 for
    a fixed ψ2.
    """
    if not share:
        return fm.replace(f, {target: fn(target)}, skip_limits)
    guard = _recurrence_guard if target.op in U_LIKE else _stability_guard
    key = guard(target)
    memo = {}

    def go(g):
        r = memo.get(g)
        if r is not None:
            return r
        if not g.args or (skip_limits and g.op in LIMIT):
            r = g
        else:
            args = tuple(go(a) for a in g.args)
            r = g if args == g.args else fm.make(g.op, args)
            if g.op == target.op and guard(g) is key:
                r = fn(r)
        memo[g] = r
        return r

    return go(f)


def _weaken(u):
    """ψ1 U ψ2 -> ψ1 W ψ2 and ψ1 M ψ2 -> ψ1 R ψ2."""
    return fm.WeakUntil(u.left, u.right) if u.op == UNTIL else fm.Release(u.left, u.right)


def _strengthen(w):
    """ψ1 W ψ2 -> ψ1 U ψ2 and ψ1 R ψ2 -> ψ1 M ψ2."""
    return fm.Until(w.left, w.right) if w.op == WUNTIL else fm.StrongRelease(w.left, w.right)


def _recurrence_guard(u):
    """The ψ with GF ψ deciding whether the U/M node behaves like its weak version."""
    return u.right if u.op == UNTIL else u.left


def _stability_guard(w):
    """The ψ with FG ψ deciding whether the W/R node behaves like its strong version."""
    return w.left if w.op == WUNTIL else w.right


def _const(value):
    return lambda _g: value


# ---------------------------------------------------------------- stage 1

def stage1(f, trace=None, share=False):
    """Equivalent formula in 1-form: no U/M below a W/R outside limit formulas."""
    trace = trace if trace is not None else RewriteTrace()
    memo = {}
    ubw_memo = {}

    def ubw(g):
        r = ubw_memo.get(g)
        if r is None:
            r = ubw_memo[g] = measures(g)[1]
        return r

    def go(g, path):
        r = memo.get(g)
        if r is not None:
            return r
        op = g.op
        if not g.args or op in LIMIT:
            r = g
        elif op in (AND, OR, NEXT, UNTIL, SRELEASE):
            r = simplify(fm.make(op, [go(a, _join(path, i)) for i, a in enumerate(g.args)]))
        elif ubw(g) == 0:
            r = g
        elif op == WUNTIL:
            r = weak_until(g, path)
        else:
            r = release(g, path)
        memo[g] = r
        return r

    def weak_until(g, path):
        p1, p2 = g.args
        if _free_nodes(p2, U_LIKE):
            # φ1 W φ2 ≡ φ1 U φ2 ∨ G φ1
            a, b = fm.Until(p1, p2), fm.G(p1)
            trace.record(1, "W-right", path, g, fm.Or(a, b))
            return simplify(fm.Or(go(a, _join(path, "r1")), go(simplify(b), _join(path, "r2"))))
        u = _maximal(p1, U_LIKE)
        rho1 = fm.WeakUntil(_substitute(p1, u, _weaken, share), p2)
        rho2 = p1
        rho3 = fm.Or(p2, fm.G(_substitute(p1, u, _const(fm.ff), share)))
        guard = fm.GF(_recurrence_guard(u))
        rule = "W-left-U" if u.op == UNTIL else "W-left-M"
        trace.record(1, rule, path, g, fm.Or(fm.And(guard, rho1), fm.Until(rho2, rho3)))
        return simplify(fm.Or(
            fm.And(guard, go(simplify(rho1), _join(path, "r1"))),
            fm.Until(go(rho2, _join(path, "r2")), go(simplify(rho3), _join(path, "r3"))),
        ))

    def release(g, path):
        p1, p2 = g.args
        if _free_nodes(p1, U_LIKE):
            # φ1 R φ2 ≡ φ1 M φ2 ∨ G φ2
            a, b = fm.StrongRelease(p1, p2), fm.G(p2)
            trace.record(1, "R-left", path, g, fm.Or(a, b))
            return simplify(fm.Or(go(a, _join(path, "r1")), go(simplify(b), _join(path, "r2"))))
        u = _maximal(p2, U_LIKE)
        rho1 = fm.Release(p1, _substitute(p2, u, _weaken, share))
        rho2 = fm.Or(p1, fm.G(_substitute(p2, u, _const(fm.ff), share)))
        rho3 = p2
        guard = fm.GF(_recurrence_guard(u))
        rule = "R-right-U" if u.op == UNTIL else "R-right-M"
        trace.record(1, rule, path, g, fm.Or(fm.And(guard, rho1), fm.StrongRelease(rho2, rho3)))
        return simplify(fm.Or(
            fm.And(guard, go(simplify(rho1), _join(path, "r1"))),
            fm.StrongRelease(go(simplify(rho2), _join(path, "r2")), go(rho3, _join(path, "r3"))),
        ))

    return go(f, ""), trace


# ---------------------------------------------------------------- stage 2

def _guarded_limits(f):
    """Distinct limit formulas occurring strictly below a temporal node."""
    found = []
    seen = set()
    stack = [(f, False)]
    while stack:
        g, under = stack.pop()
        if (g, under) in seen:
            continue
        seen.add((g, under))
        if under and g.op in LIMIT and g not in found:
            found.append(g)
        below = under or g.is_temporal()
        stack.extend((a, below) for a in reversed(g.args))
    return found


def _minimal_limit(f):
    cands = _guarded_limits(f)
    for c in cands:
        if not any(g.op in LIMIT for g in fm.subformulas(c.arg)):
            return c
    return None


def stage2(f, trace=None, stage=2):
    """Equivalent formula in 1-2-form: limit formulas only under ∧/∨."""
    trace = trace if trace is not None else RewriteTrace()
    if measures(f)[1] != 0:
        raise PreconditionError("stage 2 expects a formula in 1-form")
    while True:
        lim = _minimal_limit(f)
        if lim is None:
            return f, trace
        # φ[L] ≡ (L ∧ φ[tt]) ∨ φ[ff]
        raw = fm.Or(fm.And(lim, fm.replace(f, {lim: fm.tt})), fm.replace(f, {lim: fm.ff}))
        trace.record(stage, "limit-pull", "", f, raw)
        f = simplify(raw)


# ---------------------------------------------------------------- stage 3

def stage3(f, trace=None, share=False):
    """Normal form: no W/R inside GF and no U/M inside FG."""
    trace = trace if trace is not None else RewriteTrace()
    if measures(f)[1] != 0 or _guarded_limits(f):
        raise PreconditionError("stage 3 expects a formula in 1-2-form")
    memo = {}

    def limit(g, path):
        r = memo.get(g)
        if r is not None:
            return r
        chi = g.arg
        if g.op == GF_:
            w = _maximal(chi, W_LIKE, skip_limits=False)
            if w is None:
                r = g
            else:
                a = fm.GF(_substitute(chi, w, _strengthen, share, skip_limits=False))
                b = fm.FG(_stability_guard(w))
                c = fm.GF(fm.replace(chi, {w: fm.tt}))
                rule = "GF-W" if w.op == WUNTIL else "GF-R"
                trace.record(3, rule, path, g, fm.Or(a, fm.And(b, c)))
                r = lift(simplify(fm.Or(a, fm.And(b, c))), path)
        else:
            u = _maximal(chi, U_LIKE, skip_limits=False)
            if u is None:
                r = g
            else:
                a = fm.GF(_recurrence_guard(u))
                b = fm.FG(_substitute(chi, u, _weaken, share, skip_limits=False))
                c = fm.FG(_substitute(chi, u, _const(fm.ff), share, skip_limits=False))
                rule = "FG-U" if u.op == UNTIL else "FG-M"
                trace.record(3, rule, path, g, fm.Or(fm.And(a, b), c))
                r = lift(simplify(fm.Or(fm.And(a, b), c)), path)
        memo[g] = r
        return r

    def lift(g, path):
        """Normalize the limit formulas of a Boolean combination."""
        if g.op in LIMIT:
            return limit(g, path)
        if g.op in (AND, OR):
            return simplify(fm.make(g.op, [lift(a, _join(path, i)) for i, a in enumerate(g.args)]))
        return g

    return lift(f, ""), trace


# ---------------------------------------------------------------- pipeline

def _stage(trace, number, fn, f, *args):
    before = f.size
    raw, _ = fn(f, trace, *args)
    out = simplify(raw)
    trace.stages[number] = (before, raw.size, out.size)
    return out


def normalize_rewrite(f, share=False):
    """(normal-form formula, trace); equivalent to `f`."""
    trace = RewriteTrace()
    g = _stage(trace, 1, stage1, f, share)
    g = _stage(trace, 2, stage2, g)
    g = _stage(trace, 3, stage3, g, share)
    return g, trace


def normalize_dual(f):
    """Dual normal form: no W/R below U/M; negation of the normal form of the negation."""
    return fm.negate(normalize_rewrite(fm.negate(f))[0])


# ---------------------------------------------------------------- F, G, X fragment

class FragmentError(PreconditionError):
    pass


def in_fgx(f):
    for g in fm.iter_dag(f):
        if g.op in (UNTIL, WUNTIL):
            if not (is_eventually(g) or is_always(g)):
                return False
        elif g.op in (RELEASE, SRELEASE):
            return False
    return True


def push_next(f):
    """Move X operators inward through ∧, ∨, F, G; X is absorbed by GF and FG."""
    memo = {}

    def go(g, k):
        key = (g, k)
        r = memo.get(key)
        if r is not None:
            return r
        op = g.op
        if op in (TT, FF):
            r = g
        elif op == LIT:
            r = g
            for _ in range(k):
                r = fm.Next(r)
        elif op == NEXT:
            r = go(g.arg, k + 1)
        elif op in (AND, OR):
            r = fm.make(op, [go(a, k) for a in g.args])
        elif op in LIMIT:
            r = fm.make(op, [go(g.arg, 0)])
        elif is_eventually(g):
            r = fm.F(go(g.right, k))
        else:
            r = fm.G(go(g.left, k))
        memo[key] = r
        return r

    return go(f, 0)


def _atoms(f, op):
    out = []
    fm_flat = [f]
    while fm_flat:
        g = fm_flat.pop()
        if g.op == op:
            fm_flat.extend(reversed(g.args))
        else:
            out.append(g)
    return out


def cnf_clauses(f):
    """Clauses (tuples of atoms) of the syntactic CNF of a Boolean combination of atoms."""
    def go(g):
        if g.op == AND:
            return _dedup(go(g.left) + go(g.right))
        if g.op == OR:
            return _dedup([_dedup_atoms(c1 + c2) for c1 in go(g.left) for c2 in go(g.right)])
        if g is fm.tt:
            return []
        if g is fm.ff:
            return [()]
        return [(g,)]

    return [c for c in go(f) if fm.tt not in c]


def _dedup_atoms(atoms):
    out = []
    for a in atoms:
        if a is not fm.ff and a not in out:
            out.append(a)
    return tuple(out)


def _dedup(clauses):
    out = []
    for c in clauses:
        if c not in out:
            out.append(c)
    return out


def _fgx_stage1(f, trace):
    memo = {}

    def go(g, path):
        r = memo.get(g)
        if r is not None:
            return r
        op = g.op
        if not g.args or op in LIMIT:
            r = g
        elif op in (AND, OR, NEXT):
            r = simplify(fm.make(op, [go(a, _join(path, i)) for i, a in enumerate(g.args)]))
        elif is_eventually(g):
            r = simplify(fm.F(go(g.right, _join(path, 1))))
        else:
            r = always(g, path)
        memo[g] = r
        return r

    def always(g, path):
        body = go(g.left, _join(path, 0))
        if not _free_nodes(body, {UNTIL}):
            return simplify(fm.G(body))
        if any(x.op == AND for x in _atoms(body, OR)):
            # G φ ≡ ⋀ G(⋁C) over the clauses C of cnf(φ)
            parts = [fm.G(fm.disj(c)) for c in cnf_clauses(body)]
            trace.record(1, "G-cnf", path, g, fm.conj(parts))
            return simplify(fm.conj(go(simplify(p), _join(path, f"c{i}")) for i, p in enumerate(parts)))
        atoms = _atoms(body, OR)
        ev = next((x for x in atoms if is_eventually(x)), None)
        if ev is None:
            pushed = push_next(body)
            if pushed is body:
                return simplify(fm.G(body))
            return always(fm.G(pushed), path)
        # G(F ψ ∨ φ[F ψ]) ≡ GF ψ ∨ F(ψ ∧ X G φ[ff]) ∨ G φ[ff]
        psi = ev.right
        rest = fm.replace(fm.disj(x for x in atoms if x is not ev), {ev: fm.ff}, skip_limits=True)
        a = fm.GF(psi)
        b = fm.F(fm.And(psi, fm.Next(fm.G(rest))))
        c = fm.G(rest)
        trace.record(1, "G-F", path, g, fm.disj([a, b, c]))
        return simplify(fm.disj([
            a,
            go(simplify(b), _join(path, "r2")),
            go(simplify(c), _join(path, "r3")),
        ]))

    return go(f, ""), trace


def _fgx_stage3(f, trace):
    memo = {}

    def limit(g, path):
        r = memo.get(g)
        if r is not None:
            return r
        chi = g.arg
        if g.op == GF_:
            w = _maximal(chi, {WUNTIL}, skip_limits=False)
            if w is None:
                r = g
            else:
                # GF φ[G ψ] ≡ GF φ[ff] ∨ (FG ψ ∧ GF φ[tt])
                raw = fm.Or(fm.GF(fm.replace(chi, {w: fm.ff})),
                            fm.And(fm.FG(w.left), fm.GF(fm.replace(chi, {w: fm.tt}))))
                trace.record(3, "GF-G", path, g, raw)
                r = lift(simplify(raw), path)
        else:
            u = _maximal(chi, {UNTIL}, skip_limits=False)
            if u is None:
                r = g
            else:
                # FG φ[F ψ] ≡ (GF ψ ∧ FG φ[tt]) ∨ FG φ[ff]
                raw = fm.Or(fm.And(fm.GF(u.right), fm.FG(fm.replace(chi, {u: fm.tt}))),
                            fm.FG(fm.replace(chi, {u: fm.ff})))
                trace.record(3, "FG-F", path, g, raw)
                r = lift(simplify(raw), path)
        memo[g] = r
        return r

    def lift(g, path):
        if g.op in LIMIT:
            return limit(g, path)
        if g.op in (AND, OR):
            return simplify(fm.make(g.op, [lift(a, _join(path, i)) for i, a in enumerate(g.args)]))
        return g

    return lift(f, ""), trace


def normalize_fgx(f, trace=None):
    """Normal form of a formula over ∧, ∨, X, F, G that stays inside that fragment."""
    if not in_fgx(f):
        raise FragmentError("formula uses operators outside X, F, G")
    trace = trace if trace is not None else RewriteTrace()
    g = push_next(f)
    g = _stage(trace, 1, _fgx_stage1, g)
    g = _stage(trace, 2, stage2, g)
    g = _stage(trace, 3, _fgx_stage3, g)
    return g
