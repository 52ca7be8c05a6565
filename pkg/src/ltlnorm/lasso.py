"""Ultimately periodic words and exact LTL evaluation on them.

A word u·v^ω has |u|+|v| distinct suffixes.  Each subformula is labelled on
those positions bottom-up; until-like operators are least fixpoints and
weak-until-like operators greatest fixpoints of their one-step unfolding.
Many words can be stacked into one position space and labelled together.
"""

import re
from dataclasses import dataclass

import numpy as np

from .formula import (
    AND, FF, FG_, GF_, LIT, NEXT, OR, RELEASE, SRELEASE, TT, UNTIL, WUNTIL, iter_dag,
)


@dataclass(frozen=True)
class LassoWord:
    """prefix·loop^ω over the alphabet 2^ap; a letter is a bitset with bit i for ap[i]."""

    ap: tuple
    prefix: tuple
    loop: tuple

    def __post_init__(self):
        object.__setattr__(self, "ap", tuple(self.ap))
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "loop", tuple(self.loop))
        if not self.loop:
            raise ValueError("loop must be nonempty")
        bound = 1 << len(self.ap)
        for a in self.prefix + self.loop:
            if not 0 <= a < bound:
                raise ValueError(f"letter {a} outside 2^ap")

    def letter(self, i):
        p = len(self.prefix)
        if i < p:
            return self.prefix[i]
        return self.loop[(i - p) % len(self.loop)]

    def __len__(self):
        return len(self.prefix) + len(self.loop)

    def _letter_text(self, a):
        return "{" + ",".join(p for i, p in enumerate(self.ap) if a >> i & 1) + "}"

    def __str__(self):
        pre = ",".join(self._letter_text(a) for a in self.prefix)
        return pre + ";" + ",".join(self._letter_text(a) for a in self.loop)


_LETTER = re.compile(r"\{([^{}]*)\}")


def parse_lasso(text, ap=None):
    """Read "prefix;loop", e.g. "{a},{a};{c}".  Without `ap` the sorted letters seen are used."""
    if text.count(";") != 1:
        raise ValueError("lasso must have the form prefix;loop")
    halves = text.split(";")
    parsed = []
    for half in halves:
        body = half.strip()
        letters = []
        pos = 0
        while pos < len(body):
            m = _LETTER.match(body, pos)
            if not m:
                raise ValueError(f"bad letter at {pos} in {body!r}")
            letters.append(frozenset(x.strip() for x in m.group(1).split(",") if x.strip()))
            pos = m.end()
            while pos < len(body) and body[pos] in ", ":
                pos += 1
        parsed.append(letters)
    if ap is None:
        ap = sorted(set().union(*parsed[0], *parsed[1]))
    index = {p: i for i, p in enumerate(ap)}

    def code(letter):
        bits = 0
        for p in letter:
            if p not in index:
                raise ValueError(f"unknown proposition {p!r}")
            bits |= 1 << index[p]
        return bits

    return LassoWord(tuple(ap), [code(a) for a in parsed[0]], [code(a) for a in parsed[1]])


class LassoBatch:
    """Several lasso words over one ap stacked into a single position array."""

    def __init__(self, words):
        words = list(words)
        if not words:
            raise ValueError("empty batch")
        self.ap = words[0].ap
        if any(w.ap != self.ap for w in words):
            raise ValueError("words of a batch must share ap")
        self.words = words
        letters, succ, word_id, starts, loop_starts = [], [], [], [], []
        base = 0
        for k, w in enumerate(words):
            p, n = len(w.prefix), len(w)
            starts.append(base)
            loop_starts.append(base + p)
            letters.extend(w.prefix + w.loop)
            succ.extend(base + i + 1 for i in range(n - 1))
            succ.append(base + p)
            word_id.extend([k] * n)
            base += n
        self.size = base
        self.letters = np.array(letters, dtype=np.int64)
        self.succ = np.array(succ, dtype=np.int64)
        self.word_id = np.array(word_id, dtype=np.int64)
        self.starts = np.array(starts, dtype=np.int64)
        # reduceat segments alternate between loops and the following prefixes
        bounds = []
        for k in range(len(words)):
            bounds.append(loop_starts[k])
            if k + 1 < len(words):
                bounds.append(starts[k + 1])
        self._bounds = np.array(bounds, dtype=np.int64)
        self.rounds = max(len(w) for w in words) + 1

    def _loop_any(self, v):
        return np.logical_or.reduceat(v, self._bounds)[::2][self.word_id]

    def _loop_all(self, v):
        return np.logical_and.reduceat(v, self._bounds)[::2][self.word_id]

    def label(self, f):
        """Truth of `f` at every stacked position."""
        index = {p: i for i, p in enumerate(self.ap)}
        succ = self.succ
        val = {}
        for g in iter_dag(f):
            op = g.op
            if op == TT:
                v = np.ones(self.size, dtype=bool)
            elif op == FF:
                v = np.zeros(self.size, dtype=bool)
            elif op == LIT:
                if g.name not in index:
                    raise ValueError(f"unknown proposition {g.name!r}")
                v = (self.letters >> index[g.name] & 1).astype(bool)
                if not g.positive:
                    v = ~v
            elif op == AND:
                v = val[g.left] & val[g.right]
            elif op == OR:
                v = val[g.left] | val[g.right]
            elif op == NEXT:
                v = val[g.arg][succ]
            elif op == GF_:
                v = self._loop_any(val[g.arg])
            elif op == FG_:
                v = self._loop_all(val[g.arg])
            elif op in (UNTIL, WUNTIL, RELEASE, SRELEASE):
                v = self._fixpoint(op, val[g.left], val[g.right])
            else:
                raise ValueError(f"cannot evaluate node {op!r}")
            val[g] = v
        return val[f]

    def _fixpoint(self, op, a, b):
        succ = self.succ
        if op == UNTIL:        # least: b | (a & X v)
            v = b.copy()
            step = lambda v: b | (a & v[succ])
        elif op == WUNTIL:     # greatest: b | (a & X v)
            v = a | b
            step = lambda v: b | (a & v[succ])
        elif op == SRELEASE:   # least: b & (a | X v)
            v = a & b
            step = lambda v: b & (a | v[succ])
        else:                  # greatest: b & (a | X v)
            v = b.copy()
            step = lambda v: b & (a | v[succ])
        for _ in range(self.rounds):
            nv = step(v)
            if np.array_equal(nv, v):
                break
            v = nv
        return v

    def evaluate(self, f):
        """Truth of `f` on each word of the batch."""
        return self.label(f)[self.starts]


def eval_lasso(f, w):
    """Exact truth of w ⊨ f."""
    return bool(LassoBatch([w]).evaluate(f)[0])
