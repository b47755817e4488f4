"""Models on graph-based frames: evaluation, forcing, sequent truth, validity."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from . import frames as fr
from .fca import Concept
from .frames import ComplexAlgebra, GraphFrame
from .logic import (
    And,
    BlackBox,
    BlackDia,
    Bot,
    Box,
    Dia,
    Formula,
    Or,
    Prop,
    Sequent,
    Top,
    props_of,
    subformulas,
)
from .relcore import StateSet

DEFAULT_VALUATION_CAP = 10**6


class UnboundProposition(KeyError):
    pass


class ValuationCapExceeded(RuntimeError):
    pass


class UnstableValuation(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class Model:
    frame: GraphFrame
    valuation: Mapping[str, Concept] = field(default_factory=dict)

    @classmethod
    def from_sets(cls, frame: GraphFrame, sets: Mapping[str, StateSet | list]) -> "Model":
        """Close each raw set B to the concept (B^[10], B^[1]); warn if B was not stable."""
        val = {}
        for name, B in sets.items():
            if not isinstance(B, StateSet):
                B = StateSet.from_labels(frame.universe, B)
            c = frame.concept_of_extent(B)
            if c.extent != B:
                warnings.warn(
                    f"valuation of {name!r} is not stable; using its closure {c.extent.pretty()}",
                    UnstableValuation,
                    stacklevel=2,
                )
            val[name] = c
        return cls(frame, val)

    def with_valuation(self, valuation: Mapping[str, Concept]) -> "Model":
        return Model(self.frame, dict(valuation))


def evaluate(model: Model, phi: Formula, memo: dict | None = None) -> Concept:
    """The (extent, intent) pair assigned to ``phi``."""
    memo = {} if memo is None else memo
    frame = model.frame
    Z = frame.universe
    for f in subformulas(phi):
        if f in memo:
            continue
        if isinstance(f, Bot):
            c = Concept(StateSet.empty(Z), StateSet.full(Z))
        elif isinstance(f, Top):
            c = Concept(StateSet.full(Z), StateSet.empty(Z))
        elif isinstance(f, Prop):
            try:
                c = model.valuation[f.name]
            except KeyError:
                raise UnboundProposition(f"proposition {f.name!r} has no valuation") from None
        elif isinstance(f, And):
            B = memo[f.left].extent & memo[f.right].extent
            c = Concept(B, frame.up(B))
        elif isinstance(f, Or):
            Y = memo[f.left].intent & memo[f.right].intent
            c = Concept(frame.down(Y), Y)
        elif isinstance(f, Box):
            c = fr.op_box(frame, memo[f.arg])
        elif isinstance(f, Dia):
            c = fr.op_dia(frame, memo[f.arg])
        elif isinstance(f, BlackBox):
            c = fr.op_blackbox(frame, memo[f.arg])
        elif isinstance(f, BlackDia):
            c = fr.op_blackdia(frame, memo[f.arg])
        else:
            raise TypeError(f"not a formula: {f!r}")
        memo[f] = c
    return memo[phi]


# ``eval`` is the public name; ``evaluate`` avoids shadowing the builtin internally.
eval = evaluate


def forces(model: Model, z, phi: Formula) -> bool:
    return z in evaluate(model, phi).extent


def refutes(model: Model, z, phi: Formula) -> bool:
    return z in evaluate(model, phi).intent


def literal_checker(model: Model):
    """Forcing and refutation by the literal simultaneous recursion.

    Returns ``(forces, refutes)`` taking a state index and a formula. Slow;
    kept as an oracle for the set-based evaluation.
    """
    frame = model.frame
    n = len(frame.universe)
    E = frame.E.pairs
    rel = {
        Box: frame.Rbox.pairs,
        Dia: frame.Rdia.pairs,
        BlackBox: frame.Rblacksq.pairs,
        BlackDia: frame.Rblackdia.pairs,
    }

    @lru_cache(maxsize=None)
    def sat(z: int, f: Formula) -> bool:
        if isinstance(f, Bot):
            return False
        if isinstance(f, Top):
            return True
        if isinstance(f, Prop):
            if f.name not in model.valuation:
                raise UnboundProposition(f"proposition {f.name!r} has no valuation")
            return bool(model.valuation[f.name].extent.members[z])
        if isinstance(f, And):
            return sat(z, f.left) and sat(z, f.right)
        if isinstance(f, (Box, BlackBox)):
            R = rel[type(f)]
            return all(not cosat(w, f.arg) for w in range(n) if R[z, w])
        # or, dia, black dia: z forces f iff no E-successor co-satisfies f
        return all(not cosat(w, f) for w in range(n) if E[z, w])

    @lru_cache(maxsize=None)
    def cosat(z: int, f: Formula) -> bool:
        if isinstance(f, Bot):
            return True
        if isinstance(f, Top):
            return False
        if isinstance(f, Or):
            return cosat(z, f.left) and cosat(z, f.right)
        if isinstance(f, (Dia, BlackDia)):
            R = rel[type(f)]
            return all(not sat(w, f.arg) for w in range(n) if R[z, w])
        # prop, and, box, black box: no E-predecessor satisfies f
        return all(not sat(w, f) for w in range(n) if E[w, z])

    return sat, cosat


def literal_sets(model: Model, phi: Formula) -> tuple[StateSet, StateSet]:
    sat, cosat = literal_checker(model)
    Z = model.frame.universe
    n = len(Z)
    return (
        StateSet.from_indices(Z, [z for z in range(n) if sat(z, phi)]),
        StateSet.from_indices(Z, [z for z in range(n) if cosat(z, phi)]),
    )


def check_pointwise_vs_algebraic(model: Model, phi: Formula) -> bool:
    c = evaluate(model, phi)
    ext, intent = literal_sets(model, phi)
    return c.extent == ext and c.intent == intent


def sequent_true(model: Model, seq: Sequent) -> bool:
    """No state forcing the lhs is E-related to a state refuting the rhs."""
    memo: dict = {}
    B = evaluate(model, seq.lhs, memo).extent.members
    Y = evaluate(model, seq.rhs, memo).intent.members
    return not bool(np.any(model.frame.E.pairs[np.ix_(B, Y)]))


def sequent_counterexample(model: Model, seq: Sequent) -> tuple[str, str] | None:
    """A pair (z, z') with z forcing the lhs, z' refuting the rhs and z E z'."""
    memo: dict = {}
    B = evaluate(model, seq.lhs, memo).extent.members
    Y = evaluate(model, seq.rhs, memo).intent.members
    hits = np.argwhere(model.frame.E.pairs & B[:, None] & Y[None, :])
    if not len(hits):
        return None
    labels = model.frame.universe.labels
    return labels[hits[0][0]], labels[hits[0][1]]


@dataclass
class Validity:
    valid: bool
    checked: int
    countermodel: dict[str, Concept] | None = None
    witness: tuple[str, str] | None = None

    def __bool__(self) -> bool:
        return self.valid


def _valuations(ca: ComplexAlgebra, names: list[str], cap: int):
    concepts = ca.lattice.concepts
    total = len(concepts) ** len(names)
    if total > cap:
        raise ValuationCapExceeded(
            f"{len(concepts)} concepts ^ {len(names)} propositions = {total} valuations exceeds cap {cap}"
        )
    for combo in itertools.product(concepts, repeat=len(names)):
        yield dict(zip(names, combo))


def frame_valid(
    frame: GraphFrame | ComplexAlgebra, seq: Sequent, cap: int = DEFAULT_VALUATION_CAP
) -> Validity:
    """Truth of ``seq`` under every valuation into the concepts of the frame."""
    ca = frame if isinstance(frame, ComplexAlgebra) else ComplexAlgebra(frame)
    names = sorted(props_of(seq))
    checked = 0
    for val in _valuations(ca, names, cap):
        checked += 1
        m = Model(ca.frame, val)
        if not sequent_true(m, seq):
            return Validity(False, checked, val, sequent_counterexample(m, seq))
    return Validity(True, checked)


def algebra_valid(
    frame: GraphFrame | ComplexAlgebra, seq: Sequent, cap: int = DEFAULT_VALUATION_CAP
) -> Validity:
    """Validity in the complex algebra: lhs <= rhs as concepts under every valuation."""
    ca = frame if isinstance(frame, ComplexAlgebra) else ComplexAlgebra(frame)
    names = sorted(props_of(seq))
    checked = 0
    for val in _valuations(ca, names, cap):
        checked += 1
        m = Model(ca.frame, val)
        memo: dict = {}
        if not evaluate(m, seq.lhs, memo) <= evaluate(m, seq.rhs, memo):
            return Validity(False, checked, val)
    return Validity(True, checked)


def check_duality(
    frame: GraphFrame | ComplexAlgebra, seq: Sequent, cap: int = DEFAULT_VALUATION_CAP
) -> bool:
    return frame_valid(frame, seq, cap).valid == algebra_valid(frame, seq, cap).valid
