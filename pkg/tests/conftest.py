import random

import pytest
from hypothesis import settings, strategies as st

from ltlnorm import formula as fm
from ltlnorm.lasso import LassoWord

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

AP = ("a", "b", "c")

literals = st.builds(fm.Lit, st.sampled_from(AP), st.booleans())
_binary = [fm.And, fm.Or, fm.Until, fm.WeakUntil, fm.Release, fm.StrongRelease]


def _extend(children, limits=False):
    ops = st.sampled_from(_binary)
    out = st.one_of(
        st.builds(fm.Next, children),
        st.builds(lambda op, l, r: op(l, r), ops, children, children),
    )
    if limits:
        out = st.one_of(out, st.builds(fm.GF, children), st.builds(fm.FG, children))
    return out


formulas = st.recursive(literals, _extend, max_leaves=6)
extended_formulas = st.recursive(literals, lambda c: _extend(c, True), max_leaves=6)


@st.composite
def lassos(draw, ap=AP):
    k = 1 << len(ap)
    prefix = draw(st.lists(st.integers(0, k - 1), max_size=4))
    loop = draw(st.lists(st.integers(0, k - 1), min_size=1, max_size=4))
    return LassoWord(ap, prefix, loop)


@pytest.fixture
def rng():
    return random.Random(7)


# ---------------------------------------------------------------- acceptance summary

ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {note}")
