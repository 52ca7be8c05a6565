"""Positive Boolean formulas over integer variables, kept as antichains of minimal models.

A model is stored as an int bitmask (bit q set iff variable q is true), so
subsumption is a single `&`.
"""


def _bits(m):
    out = 0
    for q in m:
        out |= 1 << q
    return out


def _members(mask):
    out = []
    q = 0
    while mask:
        if mask & 1:
            out.append(q)
        mask >>= 1
        q += 1
    return out


def _minimize(masks):
    uniq = set(masks)
    if len(uniq) < 2:
        return tuple(uniq)
    out = []
    # by popcount, ties by value; the inner sort makes the outer stable sort canonical
    for s in sorted(sorted(uniq), key=int.bit_count):
        for k in out:
            if k & s == k:
                break
        else:
            out.append(s)
    return tuple(out)


class PosBool:
    """θ ∈ B+(X), identified with the antichain of its minimal models.

    tt is {∅}, ff is the empty antichain.  Two formulas are equal iff they
    have the same minimal models, which is equivalence of formulas.
    """

    __slots__ = ("masks", "_hash")

    def __init__(self, models=()):
        self._set(_minimize(_bits(m) for m in models))

    def _set(self, masks):
        object.__setattr__(self, "masks", masks)
        object.__setattr__(self, "_hash", hash(masks))

    @classmethod
    def _raw(cls, masks, canonical=False):
        out = object.__new__(cls)
        out._set(masks if canonical else _minimize(masks))
        return out

    def __setattr__(self, key, value):
        raise AttributeError("PosBool is immutable")

    def __reduce__(self):
        return (PosBool._raw, (self.masks, True))

    @classmethod
    def var(cls, q):
        return cls._raw((1 << q,), True)

    @classmethod
    def conj_vars(cls, qs):
        return cls._raw((_bits(qs),), True)

    @classmethod
    def disj_vars(cls, qs):
        return cls._raw(tuple(1 << q for q in qs))

    @property
    def models(self):
        return frozenset(frozenset(_members(m)) for m in self.masks)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, PosBool) and self.masks == other.masks

    def __and__(self, other):
        if self.is_ff() or other.is_tt():
            return self
        if other.is_ff() or self.is_tt():
            return other
        return PosBool._raw(tuple(a | b for a in self.masks for b in other.masks))

    def __or__(self, other):
        if self.is_ff() or other.is_tt():
            return other
        if other.is_ff() or self.is_tt():
            return self
        return PosBool._raw(self.masks + other.masks)

    def is_tt(self):
        return self.masks == (0,)

    def is_ff(self):
        return not self.masks

    @property
    def support(self):
        """Bitmask of the variables that occur."""
        acc = 0
        for m in self.masks:
            acc |= m
        return acc

    def variables(self):
        return frozenset(_members(self.support))

    def minimal_models(self):
        return self.models

    def satisfied_by(self, s):
        b = _bits(s)
        return any(m & b == m for m in self.masks)

    def substitute(self, fn):
        """θ[q ↦ fn(q)] for every variable q."""
        cache = {}
        out = []
        for m in self.masks:
            part = (0,)
            for q in _members(m):
                t = cache.get(q)
                if t is None:
                    t = cache[q] = fn(q).masks
                part = tuple(a | b for a in part for b in t)
                if not part:
                    break
                if len(part) > 1:
                    part = _minimize(part)
            out.extend(part)
        return PosBool._raw(tuple(out))

    def keep_only(self, allowed):
        """θ with every variable outside `allowed` replaced by ff."""
        b = _bits(allowed)
        return PosBool._raw(tuple(m for m in self.masks if m & b == m), True)

    def dual(self):
        """Swap ∧ and ∨ (and tt, ff): the minimal transversals of the antichain."""
        out = TT
        for m in self.masks:
            out = out & PosBool._raw(tuple(1 << q for q in _members(m)), True)
        return out

    def _sorted_models(self):
        return [_members(m) for m in sorted(self.masks, key=lambda m: (m.bit_count(), _members(m)))]

    def to_tree(self):
        """Nested {"op": ...} form: a disjunction of conjunctions of the minimal models."""
        if self.is_ff():
            return {"op": "ff"}
        if self.is_tt():
            return {"op": "tt"}
        terms = []
        for m in self._sorted_models():
            vs = [{"op": "var", "id": q} for q in m]
            terms.append(vs[0] if len(vs) == 1 else {"op": "and", "args": vs})
        return terms[0] if len(terms) == 1 else {"op": "or", "args": terms}

    @classmethod
    def from_tree(cls, node):
        op = node["op"]
        if op == "tt":
            return TT
        if op == "ff":
            return FF
        if op == "var":
            return cls.var(node["id"])
        if op not in ("and", "or"):
            raise ValueError(f"unknown op {op!r}")
        out = TT if op == "and" else FF
        for a in node["args"]:
            a = cls.from_tree(a)
            out = (out & a) if op == "and" else (out | a)
        return out

    def show(self, name=str):
        if self.is_ff():
            return "ff"
        if self.is_tt():
            return "tt"
        many = len(self.masks) > 1
        terms = []
        for m in self._sorted_models():
            t = " & ".join(name(q) for q in m)
            terms.append(f"({t})" if len(m) > 1 and many else t)
        return " | ".join(terms)

    def __repr__(self):
        return f"PosBool({self.show()})"


TT = PosBool._raw((0,), True)
FF = PosBool._raw((), True)


def minimal_models(theta):
    return theta.minimal_models()
