"""Graph-based frames, E-compatibility and the complex algebra operators.

A frame is a reflexive graph ``(Z, E)`` with two relations ``Rbox`` and
``Rdia``. Sets are closed with respect to the polarity ``(Z, Z, not E)``:
for ``B, Y`` subsets of ``Z``, ``B^[1] = square1(E, B)`` and
``Y^[0] = square0(E, Y)``. Extents are the sets with ``B^[10] = B`` and
intents the sets with ``Y^[01] = Y``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import fca
from .fca import Concept, ConceptLattice, FormalContext
from .relcore import (
    Rel,
    StateSet,
    Universe,
    UniverseMismatch,
    complement,
    converse,
    square0,
    square1,
    subsets,
)


class FrameError(ValueError):
    pass


class NotAConcept(ValueError):
    """An operator produced a pair that is not Galois-stable."""


class Violation(NamedTuple):
    relation: str
    condition: str
    state: str


# --- closures in the polarity of a graph --------------------------------------

def ext_closure(E: Rel, B: StateSet) -> StateSet:
    """B^[10]."""
    return square0(E, square1(E, B))


def int_closure(E: Rel, Y: StateSet) -> StateSet:
    """Y^[01]."""
    return square1(E, square0(E, Y))


def _ext_closure_cols(E: np.ndarray, S: np.ndarray) -> np.ndarray:
    # column-wise B^[10] for a matrix whose columns are subsets of Z
    Ei = E.astype(np.int32)
    S1 = ~((Ei.T @ S.astype(np.int32)) > 0)
    return ~((Ei @ S1.astype(np.int32)) > 0)


def _int_closure_cols(E: np.ndarray, S: np.ndarray) -> np.ndarray:
    Ei = E.astype(np.int32)
    S0 = ~((Ei @ S.astype(np.int32)) > 0)
    return ~((Ei.T @ S0.astype(np.int32)) > 0)


def compat_violations(E: Rel, R: Rel, name: str = "R") -> list[Violation]:
    """Singleton-level E-compatibility of a box-type relation.

    Checks ``(R^[0][y])^[10] <= R^[0][y]`` for every y and
    ``(R^[1][b])^[01] <= R^[1][b]`` for every b.
    """
    if R.source != E.source or R.target != E.source:
        raise UniverseMismatch("relation and E live on different universes")
    labels = E.source.labels
    Rc = ~R.pairs
    out = []
    # column y of Rc is R^[0][y]; row b of Rc is R^[1][b]
    cols = Rc
    bad = np.any(_ext_closure_cols(E.pairs, cols) & ~cols, axis=0)
    out += [Violation(name, "R^[0][y] is not an extent", labels[y]) for y in np.flatnonzero(bad)]
    rows = Rc.T
    bad = np.any(_int_closure_cols(E.pairs, rows) & ~rows, axis=0)
    out += [Violation(name, "R^[1][b] is not an intent", labels[b]) for b in np.flatnonzero(bad)]
    return out


def is_e_compatible(E: Rel, R: Rel) -> bool:
    return not compat_violations(E, R)


def dia_compat_violations(E: Rel, Rdia: Rel, name: str = "Rdia") -> list[Violation]:
    """E-compatibility of a diamond-type relation.

    The diamond operator needs ``Rdia^[0][b]`` to be an intent and
    ``Rdia^[1][y]`` to be an extent, which is exactly box-type
    compatibility of the converse relation.
    """
    out = []
    for v in compat_violations(E, converse(Rdia), name):
        if v.condition.startswith("R^[0]"):
            out.append(Violation(name, "R^[1][y] is not an extent", v.state))
        else:
            out.append(Violation(name, "R^[0][b] is not an intent", v.state))
    return out


class CompatReport(NamedTuple):
    ok: bool
    violations: list[Violation]

    def __bool__(self) -> bool:
        return self.ok


def check_compat_parts(E: Rel, Rbox: Rel, Rdia: Rel) -> CompatReport:
    v = compat_violations(E, Rbox, "Rbox") + dia_compat_violations(E, Rdia, "Rdia")
    return CompatReport(not v, v)


def check_e_compat_equivalents(E: Rel, R: Rel, item: int = 1) -> tuple[bool, bool, bool]:
    """Evaluate the three equivalent forms of one half of E-compatibility.

    item 1: (i) R^[0][y] stable for singletons, (ii) R^[0][Y] stable for all Y,
    (iii) R^[1][B] = R^[1][B^[10]] for all B.
    item 2: the mirror statements with the roles of [0] and [1] swapped.
    Exponential in |Z|; refuses universes above 14 states.
    """
    Z = E.source
    if len(Z) > 14:
        raise ValueError("subset-level check limited to 14 states")
    if item == 1:
        s_of, s_other, close = square0, square1, ext_closure
    elif item == 2:
        s_of, s_other, close = square1, square0, int_closure
    else:
        raise ValueError("item must be 1 or 2")
    labels = Z.labels
    singles = [StateSet.from_labels(Z, [x]) for x in labels]
    i = all(close(E, s_of(R, y)) <= s_of(R, y) for y in singles)
    all_sets = list(subsets(Z))
    ii = all(close(E, s_of(R, Y)) <= s_of(R, Y) for Y in all_sets)
    iii = all(s_other(R, B) == s_other(R, close(E, B)) for B in all_sets)
    return i, ii, iii


# --- frames -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GraphFrame:
    universe: Universe
    E: Rel
    Rbox: Rel
    Rdia: Rel
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        for name in ("E", "Rbox", "Rdia"):
            r = getattr(self, name)
            if r.source != self.universe or r.target != self.universe:
                raise UniverseMismatch(f"{name} does not live on the frame's universe")
        missing = np.flatnonzero(~np.diagonal(self.E.pairs))
        if missing.size:
            raise FrameError(f"E not reflexive at state {self.universe.labels[missing[0]]}")
        if self.check:
            report = check_compat_parts(self.E, self.Rbox, self.Rdia)
            if not report.ok:
                v = report.violations[0]
                raise FrameError(
                    f"{v.relation} is not E-compatible: {v.condition} at state {v.state}"
                    f" ({len(report.violations)} violation(s))"
                )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphFrame):
            return NotImplemented
        return (
            self.universe == other.universe
            and self.E == other.E
            and self.Rbox == other.Rbox
            and self.Rdia == other.Rdia
        )

    def __hash__(self) -> int:
        return hash((self.universe, self.E, self.Rbox, self.Rdia))

    @classmethod
    def from_edges(cls, states, E, Rbox=(), Rdia=(), *, reflexive_closure=False, check=True):
        Z = Universe(tuple(states))
        Er = Rel.from_pairs(Z, E)
        if reflexive_closure:
            Er = Rel(Z, Z, Er.pairs | np.eye(len(Z), dtype=bool))
        return cls(Z, Er, Rel.from_pairs(Z, Rbox), Rel.from_pairs(Z, Rdia), check=check)

    @property
    def Rblackdia(self) -> Rel:
        return converse(self.Rbox)

    @property
    def Rblacksq(self) -> Rel:
        return converse(self.Rdia)

    def up(self, B: StateSet) -> StateSet:
        return square1(self.E, B)

    def down(self, Y: StateSet) -> StateSet:
        return square0(self.E, Y)

    def concept_of_extent(self, B: StateSet) -> Concept:
        Y = self.up(B)
        return Concept(self.down(Y), Y)

    def concept_of_intent(self, Y: StateSet) -> Concept:
        B = self.down(Y)
        return Concept(B, self.up(B))

    @cached_property
    def polarity(self) -> FormalContext:
        return polarity_of(self)

    def singleton(self, label) -> StateSet:
        return StateSet.from_labels(self.universe, [label])


def polarity_of(frame: GraphFrame) -> FormalContext:
    return FormalContext(frame.universe, frame.universe, complement(frame.E))


def check_e_compat(frame: GraphFrame) -> CompatReport:
    return check_compat_parts(frame.E, frame.Rbox, frame.Rdia)


# --- complex algebra ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ComplexAlgebra:
    frame: GraphFrame
    cap: int = fca.DEFAULT_CONCEPT_CAP

    @cached_property
    def lattice(self) -> ConceptLattice:
        return fca.enumerate_concepts(self.frame.polarity, cap=self.cap)

    @property
    def top(self) -> Concept:
        return Concept(StateSet.full(self.frame.universe), StateSet.empty(self.frame.universe))

    @property
    def bottom(self) -> Concept:
        return Concept(StateSet.empty(self.frame.universe), StateSet.full(self.frame.universe))

    def op_table(self, op) -> np.ndarray:
        """Concept indices of ``op`` applied to each concept of the lattice."""
        lat = self.lattice
        out = []
        for c in lat.concepts:
            d = op(self, c)
            try:
                i = lat.index(d)
            except KeyError:
                i = -1
            if i < 0 or lat.concepts[i] != d:
                raise NotAConcept(f"{op.__name__} maps {c!r} to the non-concept {d!r}")
            out.append(i)
        return np.array(out, dtype=np.int64)

    @cached_property
    def box_table(self) -> np.ndarray:
        return self.op_table(op_box)

    @cached_property
    def dia_table(self) -> np.ndarray:
        return self.op_table(op_dia)

    @cached_property
    def blackbox_table(self) -> np.ndarray:
        return self.op_table(op_blackbox)

    @cached_property
    def blackdia_table(self) -> np.ndarray:
        return self.op_table(op_blackdia)


def complex_algebra(frame: GraphFrame, cap: int = fca.DEFAULT_CONCEPT_CAP) -> ComplexAlgebra:
    return ComplexAlgebra(frame, cap)


def _frame(ca) -> GraphFrame:
    return ca.frame if isinstance(ca, ComplexAlgebra) else ca


def _box_with(frame: GraphFrame, R: Rel, c: Concept) -> Concept:
    B = square0(R, c.intent)
    return Concept(B, frame.up(B))


def _dia_with(frame: GraphFrame, R: Rel, c: Concept) -> Concept:
    Y = square0(R, c.extent)
    return Concept(frame.down(Y), Y)


def op_box(ca, c: Concept) -> Concept:
    """[Rbox]c: extent Rbox^[0][intent c]."""
    f = _frame(ca)
    return _box_with(f, f.Rbox, c)


def op_dia(ca, c: Concept) -> Concept:
    """<Rdia>c: intent Rdia^[0][extent c]."""
    f = _frame(ca)
    return _dia_with(f, f.Rdia, c)


def op_blackbox(ca, c: Concept) -> Concept:
    f = _frame(ca)
    return _box_with(f, f.Rblacksq, c)


def op_blackdia(ca, c: Concept) -> Concept:
    f = _frame(ca)
    return _dia_with(f, f.Rblackdia, c)


def check_adjunction(ca: ComplexAlgebra) -> bool:
    """<Rblackdia> -| [Rbox] and <Rdia> -| [Rblacksq] on every pair of concepts."""
    lat = ca.lattice
    le = lat.order
    try:
        box, bdia = ca.box_table, ca.blackdia_table
        dia, bbox = ca.dia_table, ca.blackbox_table
    except NotAConcept:
        return False
    # left[c, d] = (<.>c <= d), right[c, d] = (c <= [.]d)
    first = np.array_equal(le[bdia, :], le[:, box])
    second = np.array_equal(le[dia, :], le[:, bbox])
    return first and second


def preserves_meets(ca: ComplexAlgebra, table: np.ndarray) -> bool:
    """Check op(meet S) = meet op(S) for every subset S of concepts (S empty included)."""
    return _preserves(ca.lattice, table, ca.lattice.meet_table, ca.lattice.index(ca.top))


def preserves_joins(ca: ComplexAlgebra, table: np.ndarray) -> bool:
    return _preserves(ca.lattice, table, ca.lattice.join_table, ca.lattice.index(ca.bottom))


def _preserves(lat: ConceptLattice, table, op2, unit: int) -> bool:
    n = len(lat)
    table = [int(x) for x in table]
    op2 = op2.tolist()
    # depth-first over subsets carrying (combined argument, combined image)
    stack = [(0, unit, unit)]
    while stack:
        start, arg, img = stack.pop()
        if table[arg] != img:
            return False
        for k in range(start, n):
            stack.append((k + 1, op2[arg][k], op2[img][table[k]]))
    return True
