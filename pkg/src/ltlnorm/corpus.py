"""Seeded random formulas and lasso words."""

import random
from dataclasses import dataclass, field

from . import formula as fm
from .lasso import LassoWord

KINDS = ("and", "or", "X", "U", "W", "R", "M", "literal")
_BINARY = {
    "and": fm.And, "or": fm.Or,
    "U": fm.Until, "W": fm.WeakUntil, "R": fm.Release, "M": fm.StrongRelease,
}
DEFAULT_AP = ("a", "b", "c", "d")


def _uniform():
    return {k: 1.0 for k in KINDS}


@dataclass
class CorpusSpec:
    count: int = 2000
    max_nodes: int = 18
    ap_count: int = 3
    seed: int = 0
    weights: dict = field(default_factory=_uniform)

    def __post_init__(self):
        if not 1 <= self.ap_count <= len(DEFAULT_AP):
            raise ValueError(f"ap_count must be in 1..{len(DEFAULT_AP)}")
        if self.max_nodes < 1:
            raise ValueError("max_nodes must be positive")
        unknown = set(self.weights) - set(KINDS)
        if unknown:
            raise ValueError(f"unknown node kinds {sorted(unknown)}")
        if any(w < 0 for w in self.weights.values()):
            raise ValueError("weights must be nonnegative")

    @property
    def ap(self):
        return DEFAULT_AP[: self.ap_count]


def random_formula(rng, budget, ap, weights=None):
    """A formula with at most `budget` tree nodes.

    Each node draws its kind by weight among the kinds that still fit:
    literals always fit, X needs two nodes and binary operators three.
    """
    weights = weights or _uniform()
    kinds = [k for k in KINDS if weights.get(k, 0) > 0]
    if budget < 3:
        kinds = [k for k in kinds if k in ("literal", "X")]
    if budget < 2 or not kinds:
        kinds = ["literal"]
    kind = rng.choices(kinds, [weights.get(k, 1.0) for k in kinds])[0]
    if kind == "literal":
        return fm.Lit(rng.choice(ap), rng.random() < 0.5)
    if kind == "X":
        return fm.Next(random_formula(rng, budget - 1, ap, weights))
    left = rng.randint(1, budget - 2)
    return _BINARY[kind](
        random_formula(rng, left, ap, weights),
        random_formula(rng, budget - 1 - left, ap, weights),
    )


def generate(spec):
    """`spec.count` formulas of at most `spec.max_nodes` nodes, in a fixed order for a fixed seed."""
    rng = random.Random(spec.seed)
    return [random_formula(rng, spec.max_nodes, spec.ap, spec.weights) for _ in range(spec.count)]


def random_lasso(rng, ap, max_prefix=6, max_loop=6):
    k = 1 << len(ap)
    prefix = [rng.randrange(k) for _ in range(rng.randint(0, max_prefix))]
    loop = [rng.randrange(k) for _ in range(rng.randint(1, max_loop))]
    return LassoWord(ap, prefix, loop)


def random_lassos(seed, ap, count, max_prefix=6, max_loop=6):
    rng = random.Random(seed)
    return [random_lasso(rng, tuple(ap), max_prefix, max_loop) for _ in range(count)]


def phi_family(n):
    """(((a0 U a1) W a2) U a3) ... U an: the U/W/U cascade that the closed form splits 2^(n+1) ways."""
    f = fm.Until(fm.Lit("a0"), fm.Lit("a1"))
    f = fm.WeakUntil(f, fm.Lit("a2"))
    for i in range(3, n + 1):
        f = fm.Until(f, fm.Lit(f"a{i}"))
    return f
