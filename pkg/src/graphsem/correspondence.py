"""E-parametric frame conditions and their modal axioms.

Each axiom over one proposition corresponds, on graph-based frames, to a
first-order condition relating the modal relations to E. ``check_correspondence``
evaluates both sides extensionally on a finite frame.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .fca import Concept
from .frames import ComplexAlgebra, GraphFrame, check_compat_parts
from .logic import Sequent, parse_sequent
from .relcore import Rel, Universe, comp_bullet, comp_circ
from .semantics import DEFAULT_VALUATION_CAP, Model, frame_valid, sequent_true


def is_E_reflexive(E: Rel, R: Rel) -> bool:
    return E <= R


def is_sub_E(E: Rel, R: Rel) -> bool:
    return R <= E


def is_circ_transitive(E: Rel, R: Rel) -> bool:
    return comp_circ(R, R, E) <= R


def is_bullet_transitive(E: Rel, R: Rel) -> bool:
    return comp_bullet(R, R, E) <= R


class AxiomId(enum.Enum):
    T_box = "[]p |- p"
    T_dia = "p |- <>p"
    Four_box = "[]p |- [][]p"
    Four_dia = "<><>p |- <>p"
    Tc_box = "p |- []p"
    Tc_dia = "<>p |- p"

    @property
    def sequent(self) -> Sequent:
        return parse_sequent(self.value)

    @property
    def condition_text(self) -> str:
        return _CONDITION_TEXT[self]

    @classmethod
    def lookup(cls, name: str) -> "AxiomId":
        key = name.strip().lower().replace("-", "_")
        for ax in cls:
            if ax.name.lower() == key:
                return ax
        raise KeyError(f"unknown axiom {name!r}; choose from {', '.join(a.name for a in cls)}")


_CONDITION_TEXT = {
    AxiomId.T_box: "E <= Rbox",
    AxiomId.T_dia: "E <= Rblacksq",
    AxiomId.Four_box: "Rbox .E Rbox <= Rbox",
    AxiomId.Four_dia: "Rdia oE Rdia <= Rdia",
    AxiomId.Tc_box: "Rbox <= E",
    AxiomId.Tc_dia: "Rblacksq <= E",
}


def condition_of(ax: AxiomId, frame: GraphFrame) -> bool:
    E = frame.E
    if ax is AxiomId.T_box:
        return is_E_reflexive(E, frame.Rbox)
    if ax is AxiomId.T_dia:
        return is_E_reflexive(E, frame.Rblacksq)
    if ax is AxiomId.Four_box:
        return is_bullet_transitive(E, frame.Rbox)
    if ax is AxiomId.Four_dia:
        return is_circ_transitive(E, frame.Rdia)
    if ax is AxiomId.Tc_box:
        return is_sub_E(E, frame.Rbox)
    if ax is AxiomId.Tc_dia:
        return is_sub_E(E, frame.Rblacksq)
    raise ValueError(ax)


@dataclass
class CorrespondenceVerdict:
    axiom: AxiomId
    frame_side: bool
    condition_side: bool
    countermodel: dict[str, Concept] | None = None
    witness: tuple[str, str] | None = None

    @property
    def agree(self) -> bool:
        return self.frame_side == self.condition_side

    def __bool__(self) -> bool:
        return self.agree


def check_correspondence(
    ax: AxiomId, frame: GraphFrame | ComplexAlgebra, cap: int = DEFAULT_VALUATION_CAP
) -> CorrespondenceVerdict:
    v = frame_valid(frame, ax.sequent, cap)
    f = frame.frame if isinstance(frame, ComplexAlgebra) else frame
    return CorrespondenceVerdict(ax, v.valid, condition_of(ax, f), v.countermodel, v.witness)


def t_box_witness(frame: GraphFrame) -> tuple[Model, tuple[str, str]] | None:
    """When E is not inside Rbox, the model refuting []p |- p.

    For (z, y) in E but not in Rbox, p is valued at the meet-generator of y,
    (y^[0], y^[01]); then z forces []p and y refutes p.
    """
    missing = np.argwhere(frame.E.pairs & ~frame.Rbox.pairs)
    if not len(missing):
        return None
    z, y = (int(i) for i in missing[0])
    labels = frame.universe.labels
    m = Model(frame, {"p": frame.concept_of_intent(frame.singleton(labels[y]))})
    m = Model(frame, {"p": frame.concept_of_extent(m.valuation["p"].extent)})
    assert not sequent_true(m, AxiomId.T_box.sequent)
    return m, (labels[z], labels[y])


# --- random E-compatible frames -----------------------------------------------

def _close_cols(E: np.ndarray, S: np.ndarray, ext: bool) -> np.ndarray:
    Ei = E.astype(np.int32)
    if ext:
        S1 = ~((Ei.T @ S.astype(np.int32)) > 0)
        return ~((Ei @ S1.astype(np.int32)) > 0)
    S0 = ~((Ei @ S.astype(np.int32)) > 0)
    return ~((Ei.T @ S0.astype(np.int32)) > 0)


def repair_compatible(E: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Largest box-type E-compatible relation contained in R.

    Alternately closes the columns of the complement of R as extents and its
    rows as intents; both steps only shrink R, so this reaches a fixpoint.
    """
    Rc = ~np.asarray(R, dtype=bool)
    while True:
        new = _close_cols(E, Rc, ext=True)
        new = _close_cols(E, new.T, ext=False).T
        if np.array_equal(new, Rc):
            return ~Rc
        Rc = new


def random_reflexive(rng: np.random.Generator, n: int, density: float | None = None) -> np.ndarray:
    p = rng.uniform(0.1, 0.6) if density is None else density
    E = rng.random((n, n)) < p
    np.fill_diagonal(E, True)
    return E


def _random_box_relation(rng: np.random.Generator, E: np.ndarray) -> np.ndarray:
    n = len(E)
    kind = rng.integers(0, 5)
    if kind == 0:
        start = rng.random((n, n)) < rng.uniform(0.2, 0.9)
    elif kind == 1:
        # supersets of E
        start = E | (rng.random((n, n)) < rng.uniform(0.1, 0.7))
    elif kind == 2:
        # subsets of E
        start = E & (rng.random((n, n)) < rng.uniform(0.4, 1.0))
    elif kind == 3:
        start = E.copy()
    else:
        start = np.ones((n, n), dtype=bool) & (rng.random((n, n)) < 0.95)
    return repair_compatible(E, start)


def random_frame(
    rng: np.random.Generator | int,
    n: int | None = None,
    max_states: int = 4,
    E: np.ndarray | None = None,
) -> GraphFrame:
    """A random E-compatible frame on ``n`` states (``1..max_states`` if None)."""
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    if n is None:
        n = int(rng.integers(1, max_states + 1))
    Eb = random_reflexive(rng, n) if E is None else np.asarray(E, dtype=bool)
    n = len(Eb)
    Rbox = _random_box_relation(rng, Eb)
    # Rdia is compatible exactly when its converse is a compatible box relation
    Rdia = _random_box_relation(rng, Eb).T
    Z = Universe.of_size(n)
    frame = GraphFrame(Z, Rel(Z, Z, Eb), Rel(Z, Z, Rbox), Rel(Z, Z, Rdia), check=False)
    assert check_compat_parts(frame.E, frame.Rbox, frame.Rdia).ok
    return frame


def random_frames(seed: int, count: int, max_states: int = 4) -> list[GraphFrame]:
    rng = np.random.default_rng(seed)
    return [random_frame(rng, max_states=max_states) for _ in range(count)]
