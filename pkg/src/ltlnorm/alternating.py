"""Alternating automata over 2^ap and the translation of Δi formulas into very weak ones."""

import json
from dataclasses import dataclass

import networkx as nx

from . import formula as fm
from .formula import (
    AND, FF, LIT, NEXT, OR, RELEASE, SRELEASE, TT, UNTIL, WUNTIL, propositions,
)
from .hierarchy import Delta, classify, levels
from .posbool import FF as PFF, TT as PTT, PosBool
from .printer import to_text

MAX_AP = 16


class ClassMismatchError(ValueError):
    pass


class NotWeakError(ValueError):
    def __init__(self, scc):
        super().__init__(f"component {sorted(scc)} mixes accepting and rejecting states")
        self.scc = scc


@dataclass(frozen=True)
class Atom:
    formula: object
    cls: object

    def __str__(self):
        return f"<{to_text(self.formula)}, {self.cls}>"


def letter_bits(a, k):
    """Letter `a` as a string whose i-th character is 1 iff ap[i] is in the letter."""
    return "".join("1" if a >> i & 1 else "0" for i in range(k))


@dataclass
class AlternatingAutomaton:
    """⟨2^ap, Q, θ0, δ, α⟩ with Q = range(len(labels)) and δ[q][letter] a PosBool."""

    ap: tuple
    labels: list
    initial: PosBool
    delta: list
    accepting: frozenset

    def __post_init__(self):
        self.ap = tuple(self.ap)
        self.accepting = frozenset(self.accepting)
        if len(self.ap) > MAX_AP:
            raise ValueError(f"at most {MAX_AP} propositions")
        n, k = len(self.labels), 1 << len(self.ap)
        if len(self.delta) != n or any(len(row) != k for row in self.delta):
            raise ValueError("delta must be total over states and letters")
        succ = []
        for row in self.delta:
            acc = 0
            for t in row:
                acc |= t.support
            succ.append(acc)
        if any(m >> n for m in succ + [self.initial.support]):
            raise ValueError("transition mentions an unknown state")
        self._succ = succ

    @property
    def states(self):
        return range(len(self.labels))

    @property
    def alphabet(self):
        return range(1 << len(self.ap))

    def successors(self, q):
        m, out, r = self._succ[q], set(), 0
        while m:
            if m & 1:
                out.add(r)
            m >>= 1
            r += 1
        return out

    def terminal(self, q):
        """No successors on any letter: the state only tests the current letter."""
        return not self._succ[q]

    def graph(self):
        g = nx.DiGraph()
        g.add_nodes_from(self.states)
        for q in self.states:
            g.add_edges_from((q, r) for r in self.successors(q))
        return g

    def reachable(self, roots=None):
        roots = self.initial.variables() if roots is None else roots
        seen, stack = set(roots), list(roots)
        while stack:
            q = stack.pop()
            for r in self.successors(q):
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return seen

    def with_initial(self, theta):
        return AlternatingAutomaton(self.ap, self.labels, theta, self.delta, self.accepting)

    def complement(self):
        """Dual transitions and initial formula, α ↦ Q∖α: recognizes the complement for weak automata."""
        delta = [[t.dual() for t in row] for row in self.delta]
        acc = frozenset(self.states) - self.accepting
        return AlternatingAutomaton(self.ap, self.labels, self.initial.dual(), delta, acc)

    def label(self, q):
        return str(self.labels[q])

    def to_json(self):
        k = len(self.ap)
        return {
            "ap": list(self.ap),
            "states": [
                {"id": q, "label": self.label(q), "accepting": q in self.accepting}
                for q in self.states
            ],
            "initial": self.initial.to_tree(),
            "delta": {
                str(q): {letter_bits(a, k): self.delta[q][a].to_tree() for a in self.alphabet}
                for q in self.states
            },
        }

    @classmethod
    def from_json(cls, data):
        k = len(data["ap"])
        states = sorted(data["states"], key=lambda s: s["id"])
        delta = []
        for s in states:
            row = data["delta"][str(s["id"])]
            delta.append([PosBool.from_tree(row[letter_bits(a, k)]) for a in range(1 << k)])
        return cls(
            data["ap"],
            [s["label"] for s in states],
            PosBool.from_tree(data["initial"]),
            delta,
            frozenset(s["id"] for s in states if s["accepting"]),
        )

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, ensure_ascii=False)


# ---------------------------------------------------------------- analyses

def _components(aut, states=None):
    g = aut.graph()
    if states is not None:
        g = g.subgraph(states)
    return g, list(nx.strongly_connected_components(g))


def is_weak(aut):
    return _mixed_component(aut) is None


def _mixed_component(aut):
    _, sccs = _components(aut)
    for scc in sccs:
        inside = {q in aut.accepting for q in scc}
        if len(inside) > 1:
            return scc
    return None


def is_very_weak(aut):
    _, sccs = _components(aut)
    return all(len(scc) == 1 for scc in sccs)


def alternation_height(aut):
    """1 + the largest number of α/non-α switches along a path.

    States without successors only test the current letter and end every
    path through them, so they do not count as a switch.
    """
    bad = _mixed_component(aut)
    if bad is not None:
        raise NotWeakError(bad)
    live = [q for q in aut.states if not aut.terminal(q)]
    if not live:
        return 1 if len(aut.labels) else 0
    g = aut.graph().subgraph(live)
    cond = nx.condensation(g)
    members = cond.graph["mapping"]
    polarity = {}
    for q, c in members.items():
        polarity[c] = q in aut.accepting
    height = {}
    for c in reversed(list(nx.topological_sort(cond))):
        h = 1
        for d in cond.successors(c):
            h = max(h, height[d] + (polarity[c] != polarity[d]))
        height[c] = h
    return max(height.values())


def initial_polarity(aut, theta=None):
    """"A" if the initial formula only uses accepting states, "R" if only rejecting, else "mixed".

    Terminal states are ignored; when only terminal states occur the answer is "R".
    """
    theta = aut.initial if theta is None else theta
    vs = theta.variables()
    live = {q for q in vs if not aut.terminal(q)}
    if not live:
        return "A" if vs and vs <= aut.accepting else "R"
    acc = live & aut.accepting
    if acc == live:
        return "A"
    if not acc:
        return "R"
    return "mixed"


def shaped(aut, polarity, roots=None):
    """Whether no reachable path goes from rejecting to accepting ("A") or back ("R"),
    ignoring terminal states."""
    reach = aut.reachable(roots)
    for q in reach:
        for r in aut.successors(q):
            if aut.terminal(r):
                continue
            qa, ra = q in aut.accepting, r in aut.accepting
            if polarity == "R" and qa and not ra:
                return False
            if polarity == "A" and ra and not qa:
                return False
    return True


@dataclass(frozen=True)
class AutomatonClass:
    weak: bool
    very_weak: bool
    height: int
    initial_polarity: str


def automaton_class(aut):
    weak = is_weak(aut)
    return AutomatonClass(
        weak=weak,
        very_weak=is_very_weak(aut),
        height=alternation_height(aut) if weak else -1,
        initial_polarity=initial_polarity(aut),
    )


# ---------------------------------------------------------------- construction

def ltl_to_a1w(f, cls=None, ap=None):
    """Very weak alternating automaton for `f`, built from the atoms reachable from the marked formula.

    The state ⟨ψ, Γ⟩ stands for ψ read at class Γ; its transitions unfold
    one step of ψ, and the Π-atoms are accepting.  Only reachable atoms are
    materialized.
    """
    f = fm.expand_limits(f)
    d = levels(f)[2]
    top = Delta(d) if cls is None else cls
    if not any(c <= top for c in classify(f)):
        raise ClassMismatchError(f"formula is not in {top}")
    ap = tuple(propositions(f)) if ap is None else tuple(ap)
    missing = set(propositions(f)) - set(ap)
    if missing:
        raise ValueError(f"propositions {sorted(missing)} not in ap")
    if len(ap) > MAX_AP:
        raise ValueError(f"at most {MAX_AP} propositions")
    index = {p: i for i, p in enumerate(ap)}
    classes = {}
    ids = {}
    atoms = []

    def minimal_classes(psi):
        r = classes.get(psi)
        if r is None:
            r = classes[psi] = sorted(classify(psi), key=str)
        return r

    def atom_id(psi, c):
        key = (psi, c)
        q = ids.get(key)
        if q is None:
            q = ids[key] = len(atoms)
            atoms.append(Atom(psi, c))
        return q

    mark_memo = {}

    def mark(psi, gamma):
        key = (psi, gamma)
        r = mark_memo.get(key)
        if r is not None:
            return r
        op = psi.op
        if op == TT:
            r = PTT
        elif op == FF:
            r = PFF
        elif op == AND:
            r = mark(psi.left, gamma) & mark(psi.right, gamma)
        elif op == OR:
            r = mark(psi.left, gamma) | mark(psi.right, gamma)
        else:
            opts = [c for c in minimal_classes(psi) if c <= gamma]
            if not opts:
                raise ClassMismatchError(f"{to_text(psi)} is not in {gamma}")
            r = PosBool.disj_vars(atom_id(psi, c) for c in opts)
        mark_memo[key] = r
        return r

    step_memo = {}

    def step(psi, gamma, a):
        """δ of the marked formula ψ_Γ on letter a."""
        key = (psi, gamma, a)
        r = step_memo.get(key)
        if r is not None:
            return r
        op = psi.op
        if op == TT:
            r = PTT
        elif op == FF:
            r = PFF
        elif op == AND:
            r = step(psi.left, gamma, a) & step(psi.right, gamma, a)
        elif op == OR:
            r = step(psi.left, gamma, a) | step(psi.right, gamma, a)
        else:
            r = PFF
            for c in minimal_classes(psi):
                if c <= gamma:
                    r = r | atom_step(psi, c, a)
        step_memo[key] = r
        return r

    def atom_step(psi, c, a):
        op = psi.op
        if op == LIT:
            holds = bool(a >> index[psi.name] & 1) == psi.positive
            return PTT if holds else PFF
        if op == NEXT:
            return mark(psi.arg, c)
        me = PosBool.var(atom_id(psi, c))
        left, right = step(psi.left, c, a), step(psi.right, c, a)
        if op in (UNTIL, WUNTIL):
            return right | (left & me)
        if op in (RELEASE, SRELEASE):
            return right & (left | me)
        raise ValueError(f"unexpected node {op!r}")

    initial = mark(f, top)
    alphabet = range(1 << len(ap))
    delta = []
    q = 0
    while q < len(atoms):
        at = atoms[q]
        delta.append([atom_step(at.formula, at.cls, a) for a in alphabet])
        q += 1
    accepting = frozenset(q for q, at in enumerate(atoms) if at.cls.accepting)
    return AlternatingAutomaton(ap, atoms, initial, delta, accepting)
