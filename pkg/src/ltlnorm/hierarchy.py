"""Syntactic future hierarchy: Σi, Πi, Δi classes and structural measures."""

from dataclasses import dataclass

from . import formula as fm
from .formula import (
    AND, FF, FG_, GF_, HOLE, LIMIT, LIT, NEXT, OR, TT, TEMPORAL, U_LIKE, W_LIKE,
)

SIGMA, PI, DELTA = "Sigma", "Pi", "Delta"
_GLYPH = {SIGMA: "Σ", PI: "Π", DELTA: "Δ"}
INF = 1 << 30


@dataclass(frozen=True)
class HierarchyClass:
    kind: str
    level: int

    def __post_init__(self):
        if self.kind not in _GLYPH:
            raise ValueError(f"unknown class kind {self.kind!r}")
        if self.level < 0:
            raise ValueError("negative level")
        if self.level == 0:
            object.__setattr__(self, "kind", DELTA)

    def __le__(self, other):
        i, j = self.level, other.level
        if i == 0:
            return True
        if self.kind == other.kind:
            return i <= j
        if self.kind == DELTA or other.kind == DELTA:
            # Σi, Πi ⊆ Δi and Δi ⊆ Σi+1, Πi+1
            return i <= j if other.kind == DELTA else i < j
        return i < j

    def __lt__(self, other):
        return self <= other and self != other

    def dual(self):
        kind = {SIGMA: PI, PI: SIGMA, DELTA: DELTA}[self.kind]
        return HierarchyClass(kind, self.level)

    @property
    def accepting(self):
        """Atoms of Π classes are the accepting states of the alternating automaton."""
        return self.kind == PI and self.level > 0

    def __str__(self):
        return f"{_GLYPH[self.kind]}{self.level}"


def Sigma(i):
    return HierarchyClass(SIGMA, i)


def Pi(i):
    return HierarchyClass(PI, i)


def Delta(i):
    return HierarchyClass(DELTA, i)


def parse_class(text):
    text = text.strip()
    for kind, glyph in _GLYPH.items():
        for prefix in (glyph, kind):
            if text.startswith(prefix) and text[len(prefix):].isdigit():
                return HierarchyClass(kind, int(text[len(prefix):]))
    raise ValueError(f"not a hierarchy class: {text!r}")


def _levels(f, memo):
    """(s, p, d): least i with f in Σi, in Πi, in Δi."""
    r = memo.get(f)
    if r is not None:
        return r
    op = f.op
    if op in (TT, FF, LIT, HOLE):
        r = (0, 0, 0)
    elif op == GF_:
        r = _levels(fm.G(fm.F(f.arg)), memo)
    elif op == FG_:
        r = _levels(fm.F(fm.G(f.arg)), memo)
    else:
        kids = [_levels(a, memo) for a in f.args]
        s_max = max(k[0] for k in kids)
        p_max = max(k[1] for k in kids)
        if op in (AND, OR):
            s, p = s_max, p_max
        elif op == NEXT:
            s, p = max(1, s_max), max(1, p_max)
        elif op in U_LIKE:
            s, p = max(1, s_max), INF
        else:
            s, p = INF, max(1, p_max)
        # Πi ⊆ Σi+1 and Σi ⊆ Πi+1
        s, p = min(s, p + 1), min(p, s + 1)
        if op in (AND, OR):
            d = min(s, p, max(k[2] for k in kids))
        else:
            d = min(s, p)
        r = (s, p, d)
    memo[f] = r
    return r


def levels(f):
    return _levels(f, {})


def classify(f):
    """The set of minimal hierarchy classes containing `f`."""
    s, p, d = levels(f)
    if s == 0:
        return {Delta(0)}
    if s < p:
        return {Sigma(s)}
    if p < s:
        return {Pi(p)}
    if d < s:
        return {Delta(d)}
    return {Sigma(s), Pi(p)}


def in_class(f, cls):
    return any(c <= cls for c in classify(f))


def is_delta2(f):
    return levels(f)[2] <= 2


def measures(f):
    """(nodes, ubw, gfba) of `f`.

    ubw counts U/M nodes of the tree lying under some W/R node and under no
    limit node; gfba counts distinct limit formulas occurring strictly below
    a temporal operator.
    """
    memo = {}

    def ubw(g, under_w):
        key = (g, under_w)
        r = memo.get(key)
        if r is not None:
            return r
        if g.op in LIMIT or not g.args:
            r = 0
        else:
            here = 1 if (under_w and g.op in U_LIKE) else 0
            below = under_w or g.op in W_LIKE
            r = here + sum(ubw(a, below) for a in g.args)
        memo[key] = r
        return r

    limits = set()
    seen = set()
    stack = [(f, False)]
    while stack:
        g, under = stack.pop()
        if (g, under) in seen:
            continue
        seen.add((g, under))
        if under and g.op in LIMIT:
            limits.add(g)
        below = under or g.op in TEMPORAL
        for a in g.args:
            stack.append((a, below))
    return f.size, ubw(f, False), len(limits)


def _violates_normal(f):
    """Whether some node breaks one of the three normal-form conditions."""
    seen = set()
    # context flags: under W/R, under a temporal node, under GF, under FG
    stack = [(f, False, False, False, False)]
    while stack:
        item = stack.pop()
        if item in seen:
            continue
        seen.add(item)
        g, under_w, under_t, under_gf, under_fg = item
        op = g.op
        if op in U_LIKE and (under_w or under_fg):
            return True
        if op in W_LIKE and under_gf:
            return True
        if op in LIMIT and under_t:
            return True
        for a in g.args:
            stack.append((
                a,
                under_w or op in W_LIKE,
                under_t or op in TEMPORAL,
                under_gf or op == GF_,
                under_fg or op == FG_,
            ))
    return False


NORMAL, ONE_TWO_FORM, ONE_FORM, UNNORMALIZED = "normal", "one_two_form", "one_form", "unnormalized"


def form_status(f):
    _, ubw, gfba = measures(f)
    if not _violates_normal(f):
        return NORMAL
    if ubw == 0 and gfba == 0:
        return ONE_TWO_FORM
    if ubw == 0:
        return ONE_FORM
    return UNNORMALIZED


def is_dual_normal(f):
    """Normal form of the negation: no W/R under U/M, conditions 2 and 3 as usual."""
    return form_status(fm.negate(f)) == NORMAL
