import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from graphsem.examples import colour_frame, colour_valuation, synonymy_frame  # noqa: E402
from graphsem.relcore import Rel, StateSet, Universe  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def synonymy():
    return synonymy_frame()


@pytest.fixture(scope="session")
def colour():
    return colour_frame()


@pytest.fixture(scope="session")
def colour_sets(colour):
    return colour_valuation(colour)


@pytest.fixture
def g3():
    """Z = {0,1,2}, E = identity plus (0,1)."""
    Z = Universe.of_size(3)
    return Z, Rel.from_pairs(Z, [(0, 0), (1, 1), (2, 2), (0, 1)])


# --- hypothesis strategies ---------------------------------------------------------

@st.composite
def bool_matrix(draw, n, reflexive=False):
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    m = np.array(bits, dtype=bool).reshape(n, n)
    if reflexive:
        np.fill_diagonal(m, True)
    return m


@st.composite
def small_universe_rel(draw, max_n=5, reflexive=False):
    n = draw(st.integers(1, max_n))
    Z = Universe.of_size(n)
    return Z, Rel(Z, Z, draw(bool_matrix(n, reflexive)))


@st.composite
def subset_of(draw, Z):
    bits = draw(st.lists(st.booleans(), min_size=len(Z), max_size=len(Z)))
    return StateSet(Z, np.array(bits, dtype=bool))


def to_pairs(R: Rel) -> frozenset:
    return frozenset((int(a), int(b)) for a, b in R.index_pairs())


def to_set(S: StateSet) -> frozenset:
    return frozenset(S.indices())


# --- formulas ---------------------------------------------------------------------

from graphsem.logic import And, BlackBox, BlackDia, Bot, Box, Dia, Or, Prop, Top  # noqa: E402

_UN = {Box: "box", Dia: "dia", BlackBox: "bbox", BlackDia: "bdia"}


def formulas(props=("p", "q"), max_leaves=12, black=True):
    unary = [Box, Dia] + ([BlackBox, BlackDia] if black else [])
    leaves = st.sampled_from([Prop(p) for p in props] + [Top(), Bot()])

    def extend(children):
        return st.one_of(
            st.builds(And, children, children),
            st.builds(Or, children, children),
            st.sampled_from(unary).flatmap(lambda k: children.map(k)),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def random_formula(rng, depth, props=("p", "q"), black=True):
    """A formula of modal depth at most ``depth`` drawn from a numpy Generator."""
    unary = [Box, Dia] + ([BlackBox, BlackDia] if black else [])
    k = int(rng.integers(0, 10))
    if k < 4 or (depth == 0 and k >= 7):
        choices = [Prop(p) for p in props] + [Top(), Bot()]
        return choices[int(rng.integers(len(choices)))] if k != 3 else Prop(props[0])
    if k >= 7:
        return unary[int(rng.integers(len(unary)))](random_formula(rng, depth - 1, props, black))
    cls = And if k % 2 else Or
    return cls(random_formula(rng, depth, props, black), random_formula(rng, depth, props, black))


def to_tuple(f):
    """Package AST to the nested-tuple form used by the oracles."""
    if isinstance(f, Prop):
        return ("var", f.name)
    if isinstance(f, Top):
        return ("top",)
    if isinstance(f, Bot):
        return ("bot",)
    if isinstance(f, And):
        return ("and", to_tuple(f.left), to_tuple(f.right))
    if isinstance(f, Or):
        return ("or", to_tuple(f.left), to_tuple(f.right))
    return (_UN[type(f)], to_tuple(f.arg))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
