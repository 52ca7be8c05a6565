"""Break-point determinization of weak alternating automata and deterministic automaton algebra.

Deterministic automata are explored lazily: a state is materialized the first
time a run or a full exploration reaches it.  Acceptance is state-based and
stored as marks per state (as in HOA), with the condition given by a list of
(fin, inf) mark pairs; None means "no constraint" on that side.
"""

import json
from collections import deque
from dataclasses import dataclass

import networkx as nx

from .alternating import letter_bits, ltl_to_a1w, shaped
from .contextual import closed_form_disjuncts
from .formula import FF, TT, propositions
from .posbool import FF as PFF, TT as PTT, PosBool, _minimize


class PreconditionError(ValueError):
    pass


class AlphabetError(ValueError):
    pass


class StateLimitError(RuntimeError):
    pass


# ---------------------------------------------------------------- acceptance conditions

@dataclass(frozen=True)
class Buchi:
    accepting: frozenset


@dataclass(frozen=True)
class CoBuchi:
    rejecting: frozenset


@dataclass(frozen=True)
class Rabin:
    pairs: tuple   # of (fin, inf) state sets


@dataclass(frozen=True)
class TerminalAccepting:
    sink: int


@dataclass(frozen=True)
class TerminalRejecting:
    sink: int


@dataclass(frozen=True)
class Weak:
    accepting: frozenset


_PAIRS = {
    "Buchi": ((None, 0),),
    "CoBuchi": ((0, None),),
    "TerminalAccepting": ((None, 0),),
    "TerminalRejecting": ((0, None),),
    "Weak": ((None, 0),),
}


def _accepts_marks(pairs, seen):
    return any(
        (fin is None or fin not in seen) and (inf is None or inf in seen)
        for fin, inf in pairs
    )


# ---------------------------------------------------------------- deterministic automata

class DeterministicAutomaton:
    """Deterministic automaton over 2^ap with state-based mark acceptance.

    `successor(key, letter)` gives the next key and `marking(key)` its marks.
    `kind` is one of Buchi, CoBuchi, Rabin, TerminalAccepting,
    TerminalRejecting, Weak; `pairs` lists (fin, inf) marks.
    """

    def __init__(self, ap, initial, successor, marking, kind, pairs, label=str):
        self.ap = tuple(ap)
        self.kind = kind
        self.pairs = tuple(pairs)
        self._successor = successor
        self._marking = marking
        self._label = label
        self.keys = [initial]
        self.index = {initial: 0}
        self.rows = [None]
        self.marks = [frozenset(marking(initial))]
        self.complete = False
        self.initial = 0

    @classmethod
    def from_table(cls, ap, delta, marks, kind, pairs, labels=None, initial=0):
        """Explicit automaton: delta[q][letter] -> q', marks[q] a set of mark indices."""
        k = 1 << len(ap)
        if any(len(row) != k for row in delta):
            raise ValueError("delta must be total over states and letters")
        n = len(delta)
        if any(not 0 <= r < n for row in delta for r in row) or not 0 <= initial < n:
            raise ValueError("transition to an unknown state")
        labels = list(labels) if labels is not None else [str(q) for q in range(n)]
        d = cls(ap, initial, lambda q, a: delta[q][a], lambda q: marks[q], kind, pairs,
                label=lambda q: labels[q])
        return d

    @property
    def alphabet(self):
        return range(1 << len(self.ap))

    @property
    def pair_count(self):
        return len(self.pairs)

    def state(self, key):
        q = self.index.get(key)
        if q is None:
            q = self.index[key] = len(self.keys)
            self.keys.append(key)
            self.rows.append(None)
            self.marks.append(frozenset(self._marking(key)))
        return q

    def step(self, q, a):
        row = self.rows[q]
        if row is None:
            row = self.rows[q] = [None] * (1 << len(self.ap))
        r = row[a]
        if r is None:
            r = row[a] = self.state(self._successor(self.keys[q], a))
        return r

    def run(self, letters, start=None):
        q = self.initial if start is None else start
        for a in letters:
            q = self.step(q, a)
        return q

    def explore(self, limit=None):
        """Materialize every reachable state, breadth-first."""
        if self.complete:
            return self
        queue = deque(range(len(self.keys)))
        done = set()
        while queue:
            q = queue.popleft()
            if q in done:
                continue
            done.add(q)
            for a in self.alphabet:
                before = len(self.keys)
                r = self.step(q, a)
                if len(self.keys) > before:
                    queue.append(r)
                    if limit is not None and len(self.keys) > limit:
                        raise StateLimitError(f"more than {limit} states")
        self.complete = True
        return self

    def __len__(self):
        self.explore()
        return len(self.keys)

    @property
    def states(self):
        self.explore()
        return range(len(self.keys))

    @property
    def delta(self):
        self.explore()
        return self.rows

    @property
    def labels(self):
        self.explore()
        return [self._label(k) for k in self.keys]

    def mark_set(self, m):
        self.explore()
        return frozenset(q for q, ms in enumerate(self.marks) if m in ms)

    @property
    def acceptance(self):
        """The condition over explicit state sets."""
        self.explore()
        sets = lambda m: frozenset() if m is None else self.mark_set(m)
        everything = frozenset(range(len(self.keys)))
        kind = self.kind
        if kind == "Rabin":
            return Rabin(tuple(
                (sets(f), everything if i is None else sets(i)) for f, i in self.pairs))
        if kind == "Buchi":
            return Buchi(sets(0))
        if kind == "CoBuchi":
            return CoBuchi(sets(0))
        if kind == "Weak":
            return Weak(sets(0))
        sink = self.pairs[0][1] if kind == "TerminalAccepting" else self.pairs[0][0]
        group = sets(sink)
        only = next(iter(group)) if len(group) == 1 else -1
        return TerminalAccepting(only) if kind == "TerminalAccepting" else TerminalRejecting(only)

    def accepts_cycle(self, cycle):
        seen = set()
        for q in cycle:
            seen |= self.marks[q]
        return _accepts_marks(self.pairs, seen)

    def graph(self):
        g = nx.DiGraph()
        g.add_nodes_from(self.states)
        for q, row in enumerate(self.delta):
            g.add_edges_from((q, r) for r in set(row))
        return g

    def to_json(self):
        k = len(self.ap)
        return {
            "ap": list(self.ap),
            "states": [
                {"id": q, "label": lab, "marks": sorted(self.marks[q])}
                for q, lab in enumerate(self.labels)
            ],
            "initial": self.initial,
            "delta": {
                str(q): {letter_bits(a, k): self.delta[q][a] for a in self.alphabet}
                for q in self.states
            },
            "acceptance": {"type": self.kind, "pairs": [list(p) for p in self.pairs]},
        }

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)

    def to_hoa(self, name=None):
        """HOA v1 text with state-based acceptance and one explicit edge per letter."""
        used = sorted({m for p in self.pairs for m in p if m is not None})
        renum = {m: i for i, m in enumerate(used)}
        if self.kind == "Rabin":
            acc_name = f"Rabin {len(self.pairs)}"
            terms = []
            for fin, inf in self.pairs:
                fin_t = "t" if fin is None else f"Fin({renum[fin]})"
                inf_t = "t" if inf is None else f"Inf({renum[inf]})"
                terms.append(f"({fin_t} & {inf_t})")
            header = f"Acceptance: {len(used)} " + (" | ".join(terms) or "f")
        elif self.pairs[0][1] is not None:
            acc_name, header = "Buchi", "Acceptance: 1 Inf(0)"
        else:
            acc_name, header = "co-Buchi", "Acceptance: 1 Fin(0)"
        labels = self.labels
        lines = ["HOA: v1"]
        if name:
            lines.append(f'name: "{name}"')
        lines += [
            f"States: {len(labels)}",
            f"Start: {self.initial}",
            f"AP: {len(self.ap)}" + "".join(f' "{p}"' for p in self.ap),
            f"acc-name: {acc_name}",
            header,
            "properties: trans-labels explicit-labels state-acc deterministic complete",
            "--BODY--",
        ]
        for q, lab in enumerate(labels):
            ms = sorted(renum[m] for m in self.marks[q] if m in renum)
            acc = " {" + " ".join(map(str, ms)) + "}" if ms else ""
            lines.append(f'State: {q} "{lab}"{acc}')
            for a in self.alphabet:
                lines.append(f"  [{_hoa_label(a, len(self.ap))}] {self.delta[q][a]}")
        lines.append("--END--")
        return "\n".join(lines) + "\n"


def _hoa_label(a, k):
    if k == 0:
        return "t"
    return "&".join(str(i) if a >> i & 1 else f"!{i}" for i in range(k))


def _constant(ap, value):
    tag = "tt" if value else "ff"
    return DeterministicAutomaton(ap, tag, lambda s, a: s, lambda s: {0},
                                  "TerminalAccepting" if value else "TerminalRejecting",
                                  _PAIRS["TerminalAccepting" if value else "TerminalRejecting"])


def universal(ap=()):
    return _constant(ap, True)


def empty(ap=()):
    return _constant(ap, False)


# ---------------------------------------------------------------- break-point construction

@dataclass(frozen=True)
class BreakpointState:
    levels: PosBool
    promising: PosBool

    def __str__(self):
        return f"({self.levels.show()}, {self.promising.show()})"


class _Stepper:
    """Successor levels of antichains, caching the conjunction of δ over each model."""

    def __init__(self, aut):
        self.table = [[aut.delta[q][a].masks for q in aut.states] for a in aut.alphabet]
        self.cache = {}
        self.whole = {}

    def model(self, m, a):
        key = (m, a)
        r = self.cache.get(key)
        if r is None:
            row = self.table[a]
            r = (0,)
            q, rest = 0, m
            while rest and r:
                if rest & 1:
                    t = row[q]
                    r = tuple(x | y for x in r for y in t)
                    if len(r) > 1:
                        r = _minimize(r)
                rest >>= 1
                q += 1
            self.cache[key] = r
        return r

    def __call__(self, theta, a):
        key = (theta.masks, a)
        r = self.whole.get(key)
        if r is None:
            out = []
            for m in theta.masks:
                out.extend(self.model(m, a))
            r = self.whole[key] = PosBool._raw(tuple(out))
        return r


def _keep_mask(aut):
    keep = 0
    for q in aut.states:
        if q in aut.accepting or aut.terminal(q):
            keep |= 1 << q
    return keep


def breakpoint_cobuchi(aut, stepper=None):
    """Deterministic co-Büchi automaton with the language of an AWW[2,R].

    Levels is the antichain of current levels, Promising the antichain of
    levels that have stayed inside α (or in states without successors) since
    the last break-point.  A break-point is a state with Promising = ff.
    """
    if not shaped(aut, "R", aut.initial.variables()):
        raise PreconditionError("automaton has a path from an accepting to a rejecting state")
    step = stepper or _Stepper(aut)
    keep = _keep_mask(aut)

    def succ(s, a):
        levels = step(s.levels, a)
        if s.promising.is_ff():
            promising = PosBool._raw(tuple(m for m in levels.masks if m & keep == m), True)
        else:
            promising = step(s.promising, a)
        return BreakpointState(levels, promising)

    return DeterministicAutomaton(
        aut.ap, BreakpointState(aut.initial, PFF), succ,
        lambda s: {0} if s.promising.is_ff() else (), "CoBuchi", _PAIRS["CoBuchi"])


def breakpoint_buchi(aut, stepper=None):
    """Deterministic Büchi automaton for an AWW[2,A], via the co-Büchi construction on its dual."""
    if not shaped(aut, "A", aut.initial.variables()):
        raise PreconditionError("automaton has a path from a rejecting to an accepting state")
    d = breakpoint_cobuchi(aut.complement(), stepper)
    return _rekind(d, "Buchi", _PAIRS["Buchi"])


def _rekind(d, kind, pairs):
    return DeterministicAutomaton(d.ap, d.keys[0], d._successor, d._marking, kind, pairs, d._label)


def _r_safe(aut):
    """States from which no path goes from an accepting to a rejecting live state."""
    bad = {
        q for q in aut.accepting
        if any(r not in aut.accepting and not aut.terminal(r) for r in aut.successors(q))
    }
    rev = aut.graph().reverse(copy=False)
    reach = set(bad)
    for q in bad:
        reach |= nx.descendants(rev, q)
    return frozenset(aut.states) - reach


def _sorted_models(theta):
    return sorted(theta.models, key=lambda m: (len(m), sorted(m)))


def split_initial(aut, mode="models"):
    """Pairs (θ_A, θ_R) with θ0 ≡ ⋁ θ_A ∧ θ_R, θ_A over the A-side and θ_R over the R-side.

    "models" gives one pair per minimal model of θ0, cut at α.
    "grouped" puts every state without an α-to-rejecting path on the R-side
    and merges the models that share their A-part.
    """
    if mode == "models":
        out = []
        for m in _sorted_models(aut.initial):
            a = m & aut.accepting
            out.append((PosBool.conj_vars(a), PosBool.conj_vars(m - a)))
        return out
    if mode != "grouped":
        raise ValueError(f"unknown split {mode!r}")
    safe = _r_safe(aut)
    groups = {}
    for m in _sorted_models(aut.initial):
        a = frozenset(q for q in m if q not in safe)
        groups[a] = groups.get(a, PFF) | PosBool.conj_vars(m - a)
    return [(PosBool.conj_vars(a), groups[a]) for a in groups]


def aww2_to_drw(aut, split="models"):
    """Deterministic Rabin automaton for an AWW[2]: one pair per part of the split of θ0."""
    if aut.initial.is_ff():
        return as_rabin(empty(aut.ap))
    # every part runs over the same δ, so the successor caches are shared
    step, dual_step = _Stepper(aut), _Stepper(aut.complement())
    parts = [
        product(breakpoint_buchi(aut.with_initial(ta), dual_step),
                breakpoint_cobuchi(aut.with_initial(tr), step), "intersect")
        for ta, tr in split_initial(aut, split)
    ]
    return union_all(parts)


def as_rabin(d):
    return DeterministicAutomaton(d.ap, d.keys[0], d._successor, d._marking, "Rabin", d.pairs,
                                  d._label)


# ---------------------------------------------------------------- AWW[1]

def _subset_automaton(aut, polarity):
    """Levels-only construction; the tt (resp. ff) antichain is the accepting (resp. rejecting) sink."""
    step = _Stepper(aut)
    sink = PTT if polarity == "R" else PFF
    kind = "TerminalAccepting" if polarity == "R" else "TerminalRejecting"
    return DeterministicAutomaton(
        aut.ap, aut.initial, step, lambda s: {0} if s == sink else (), kind, _PAIRS[kind],
        label=lambda s: s.show())


def _live_polarity(aut, roots):
    live = [q for q in aut.reachable(roots) if not aut.terminal(q)]
    acc = {q in aut.accepting for q in live}
    if len(acc) > 1:
        return "mixed"
    return "A" if acc == {True} else "R"


def determinize_aww1(aut):
    """Terminal-accepting, terminal-rejecting or weak deterministic automaton for an AWW[1]."""
    roots = aut.initial.variables()
    if not (shaped(aut, "R", roots) and shaped(aut, "A", roots)):
        raise PreconditionError("automaton is not of height 1")
    polarity = _live_polarity(aut, roots)
    if polarity != "mixed":
        return _subset_automaton(aut, polarity)
    parts = []
    for m in _sorted_models(aut.initial):
        acc = frozenset(q for q in m if q in aut.accepting)
        d_a = _subset_automaton(aut.with_initial(PosBool.conj_vars(acc)), "A")
        d_r = _subset_automaton(aut.with_initial(PosBool.conj_vars(m - acc)), "R")
        parts.append(product(d_a, d_r, "intersect"))
    return union_all(parts)


def is_weak_partition(d):
    """Whether every SCC is entirely accepting or entirely rejecting."""
    acc = d.mark_set(0)
    return all(len({q in acc for q in scc}) == 1
               for scc in nx.strongly_connected_components(d.graph()))


# ---------------------------------------------------------------- product

_WEAKISH = {"Weak", "TerminalAccepting", "TerminalRejecting"}


def _good(d):
    """Predicate 'this state is accepting' for weak-like automata."""
    if d.kind == "TerminalRejecting":
        return lambda ms: 0 not in ms
    return lambda ms: 0 in ms


def _shift(pairs, k):
    return tuple(tuple(None if m is None else m + k for m in p) for p in pairs)


def _mark_width(d):
    used = [m for p in d.pairs for m in p if m is not None]
    return max(used) + 1 if used else 0


def product(d1, d2, mode):
    """Synchronized product, explored on demand, for union or intersection of languages.

    Union lifts every pair of both sides (pair count adds up).  Intersection
    needs one pair on each side with at most one Inf constraint between them
    and yields a single pair; two weak-like inputs give a weak product.
    """
    if d1.ap != d2.ap:
        raise AlphabetError(f"alphabets differ: {d1.ap} vs {d2.ap}")
    if mode not in ("union", "intersect"):
        raise ValueError(f"unknown mode {mode!r}")
    # product keys are index pairs into the (shared, lazily grown) factors
    st1, st2 = d1.step, d2.step

    def succ(key, a):
        return (st1(key[0], a), st2(key[1], a))

    def label(key):
        return f"{d1._label(d1.keys[key[0]])} x {d2._label(d2.keys[key[1]])}"

    init = (d1.initial, d2.initial)
    m1, m2 = d1.marks.__getitem__, d2.marks.__getitem__

    if d1.kind in _WEAKISH and d2.kind in _WEAKISH:
        g1, g2 = _good(d1), _good(d2)
        if mode == "union":
            ok = lambda key: g1(m1(key[0])) or g2(m2(key[1]))
        else:
            ok = lambda key: g1(m1(key[0])) and g2(m2(key[1]))
        return DeterministicAutomaton(d1.ap, init, succ, lambda key: {0} if ok(key) else (),
                                      "Weak", _PAIRS["Weak"], label)

    if mode == "union":
        w = _mark_width(d1)
        pairs = d1.pairs + _shift(d2.pairs, w)

        def marking(key):
            return set(m1(key[0])) | {m + w for m in m2(key[1])}

        return DeterministicAutomaton(d1.ap, init, succ, marking, "Rabin", pairs, label)

    if d1.kind in _WEAKISH or d2.kind in _WEAKISH:
        return _intersect_weak(d1, d2, init, succ, label)

    if len(d1.pairs) != 1 or len(d2.pairs) != 1:
        raise ValueError("intersection needs single-pair conditions")
    (f1, i1), (f2, i2) = d1.pairs[0], d2.pairs[0]
    if i1 is not None and i2 is not None:
        raise ValueError("intersection of two Büchi-like conditions is not a single Rabin pair")

    def marking(key):
        a, b = m1(key[0]), m2(key[1])
        out = set()
        if (f1 is not None and f1 in a) or (f2 is not None and f2 in b):
            out.add(0)
        if (i1 is not None and i1 in a) or (i2 is not None and i2 in b):
            out.add(1)
        return out

    fin = 0 if f1 is not None or f2 is not None else None
    inf = 1 if i1 is not None or i2 is not None else None
    return DeterministicAutomaton(d1.ap, init, succ, marking, "Rabin", ((fin, inf),), label)


def _intersect_weak(d1, d2, init, succ, label):
    """Rabin ∩ weak: leaving the weak side's good states joins every Fin set."""
    flip = d1.kind in _WEAKISH and d2.kind not in _WEAKISH
    rabin, weak = (d2, d1) if flip else (d1, d2)
    good = _good(weak)
    mr, mw = rabin.marks.__getitem__, weak.marks.__getitem__
    side = 1 if flip else 0
    w = _mark_width(rabin)
    pairs = tuple((w + j, i) for j, (_, i) in enumerate(rabin.pairs))

    def marking(key):
        ms = mr(key[side])
        bad = not good(mw(key[1 - side]))
        out = {i for _, i in rabin.pairs if i is not None and i in ms}
        for j, (f, _) in enumerate(rabin.pairs):
            if bad or (f is not None and f in ms):
                out.add(w + j)
        return out

    return DeterministicAutomaton(d1.ap, init, succ, marking, "Rabin", pairs, label)


def union_all(parts):
    """Balanced union of a nonempty list of automata."""
    parts = list(parts)
    while len(parts) > 1:
        nxt = [product(parts[i], parts[i + 1], "union") for i in range(0, len(parts) - 1, 2)]
        if len(parts) % 2:
            nxt.append(parts[-1])
        parts = nxt
    return parts[0]


# ---------------------------------------------------------------- LTL pipeline

def ltl_to_drw(f, ap=None, split="grouped"):
    """Rabin automaton for `f`: one A1W[2] per surviving context formula, determinized and unioned."""
    ap = tuple(propositions(f)) if ap is None else tuple(ap)
    seen = []
    for d in closed_form_disjuncts(f):
        g = d.formula
        if g.op != FF and g not in seen:
            seen.append(g)
    if not seen:
        return as_rabin(empty(ap))
    parts = []
    for g in seen:
        if g.op == TT:
            parts.append(as_rabin(universal(ap)))
        else:
            parts.append(as_rabin(aww2_to_drw(ltl_to_a1w(g, ap=ap), split=split)))
    return union_all(parts)


# ---------------------------------------------------------------- lassos

def _letter_map(src_ap, dst_ap):
    if tuple(src_ap) == tuple(dst_ap):
        return None
    missing = set(dst_ap) - set(src_ap)
    if missing:
        raise AlphabetError(f"word does not fix propositions {sorted(missing)}")
    pos = [list(src_ap).index(p) for p in dst_ap]
    return lambda a: sum(1 << j for j, i in enumerate(pos) if a >> i & 1)


def lasso_cycle(d, w):
    """States visited infinitely often when `d` reads `w`, in the order of one period."""
    conv = _letter_map(w.ap, d.ap)
    prefix = [conv(a) for a in w.prefix] if conv else list(w.prefix)
    loop = [conv(a) for a in w.loop] if conv else list(w.loop)
    q = d.run(prefix)
    first = {}
    starts = []
    while q not in first:
        first[q] = len(starts)
        starts.append(q)
        q = d.run(loop, q)
    cycle = []
    for s in starts[first[q]:]:
        p = s
        for a in loop:
            cycle.append(p)
            p = d.step(p, a)
    return cycle


def drw_accepts_lasso(d, w):
    return d.accepts_cycle(lasso_cycle(d, w))
