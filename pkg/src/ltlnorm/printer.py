"""Text form of formulas, readable back by `ltlnorm.parser.parse`."""

from .formula import (
    AND, FF, FG_, GF_, HOLE, LIT, NEXT, OR, TT, BINARY_TEMPORAL, is_always, is_eventually,
)

# binding strength, loosest first
_OR, _AND, _BIN, _UN = 1, 2, 3, 4

_SYMBOL = {"U": "U", "W": "W", "R": "R", "M": "M"}


def _level(f):
    if f.op == OR:
        return _OR
    if f.op == AND:
        return _AND
    if f.op in BINARY_TEMPORAL and not (is_eventually(f) or is_always(f)):
        return _BIN
    return _UN


def to_text(f):
    memo = {}

    def wrap(g, need):
        s = go(g)
        return f"({s})" if _level(g) < need else s

    def go(g):
        s = memo.get(g)
        if s is not None:
            return s
        op = g.op
        if op == TT:
            s = "tt"
        elif op == FF:
            s = "ff"
        elif op == HOLE:
            s = "[]"
        elif op == LIT:
            s = g.name if g.positive else "!" + g.name
        elif op == OR:
            s = f"{wrap(g.left, _OR + 1)} | {wrap(g.right, _OR)}"
        elif op == AND:
            s = f"{wrap(g.left, _AND + 1)} & {wrap(g.right, _AND)}"
        elif op == NEXT:
            s = "X " + wrap(g.arg, _UN)
        elif op in (GF_, FG_):
            s = f"{op} " + wrap(g.arg, _UN)
        elif is_eventually(g):
            s = "F " + wrap(g.right, _UN)
        elif is_always(g):
            s = "G " + wrap(g.left, _UN)
        else:
            s = f"{wrap(g.left, _BIN + 1)} {_SYMBOL[op]} {wrap(g.right, _BIN)}"
        memo[g] = s
        return s

    return go(f)
