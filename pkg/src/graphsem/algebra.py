"""Finite lattices with normal modal operators, and their dual graph-based frames.

A finite lattice is given by its order matrix; meets and joins are derived.
``build_frame_FA`` turns a modal algebra into a graph-based frame whose states
are disjoint filter/ideal pairs, and ``check_canonical_extension`` confirms the
concept lattice of that frame is the lattice we started from.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from .fca import Concept
from .frames import ComplexAlgebra, GraphFrame
from .logic import And, BlackBox, BlackDia, Bot, Box, Dia, Formula, Or, Prop, Sequent, Top, props_of
from .relcore import Rel, StateSet, Universe, converse


class LatticeError(ValueError):
    pass


class NotNormal(ValueError):
    pass


def _transitive_closure(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    for k in range(len(m)):
        m |= m[:, k : k + 1] & m[k : k + 1, :]
    return m


@dataclass(frozen=True, eq=False)
class FiniteLattice:
    carrier: Universe
    leq: np.ndarray

    def __post_init__(self):
        le = np.asarray(self.leq, dtype=bool)
        n = len(self.carrier)
        if le.shape != (n, n):
            raise LatticeError(f"order matrix has shape {le.shape}, expected {(n, n)}")
        if n == 0:
            raise LatticeError("a bounded lattice has at least one element")
        if not le.diagonal().all():
            raise LatticeError("order is not reflexive")
        if (le & le.T & ~np.eye(n, dtype=bool)).any():
            raise LatticeError("order is not antisymmetric")
        if not np.array_equal(_transitive_closure(le), le):
            raise LatticeError("order is not transitive")
        le = le.copy()
        le.flags.writeable = False
        object.__setattr__(self, "leq", le)
        # force the tables so a non-lattice fails at construction
        self.meet_table, self.join_table  # noqa: B018

    @classmethod
    def from_order(cls, labels: Sequence, pairs) -> "FiniteLattice":
        """Lattice from generating pairs ``a <= b``; reflexive-transitive closure is taken."""
        U = Universe(tuple(labels))
        m = np.eye(len(U), dtype=bool)
        for a, b in pairs:
            m[U.index(a), U.index(b)] = True
        return cls(U, _transitive_closure(m))

    @classmethod
    def chain(cls, n: int) -> "FiniteLattice":
        idx = np.arange(n)
        return cls(Universe.of_size(n), idx[:, None] <= idx[None, :])

    def __len__(self) -> int:
        return len(self.carrier)

    @property
    def labels(self) -> tuple:
        return self.carrier.labels

    def _bound(self, m: np.ndarray, kind: str) -> int:
        hits = np.flatnonzero(m)
        if len(hits) != 1:
            raise LatticeError(f"no unique {kind}")
        return int(hits[0])

    @cached_property
    def top(self) -> int:
        return self._bound(self.leq.all(axis=0), "top")

    @cached_property
    def bottom(self) -> int:
        return self._bound(self.leq.all(axis=1), "bottom")

    @cached_property
    def meet_table(self) -> np.ndarray:
        n = len(self)
        le = self.leq
        t = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                lower = le[:, i] & le[:, j]
                # greatest lower bound: a lower bound above every lower bound
                g = np.flatnonzero(lower & le[lower].all(axis=0))
                if len(g) != 1:
                    raise LatticeError(f"{self.labels[i]} and {self.labels[j]} have no meet")
                t[i, j] = t[j, i] = g[0]
        t.flags.writeable = False
        return t

    @cached_property
    def join_table(self) -> np.ndarray:
        n = len(self)
        le = self.leq
        t = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                upper = le[i] & le[j]
                g = np.flatnonzero(upper & le[:, upper].all(axis=1))
                if len(g) != 1:
                    raise LatticeError(f"{self.labels[i]} and {self.labels[j]} have no join")
                t[i, j] = t[j, i] = g[0]
        t.flags.writeable = False
        return t

    def meet(self, a: int, b: int) -> int:
        return int(self.meet_table[a, b])

    def join(self, a: int, b: int) -> int:
        return int(self.join_table[a, b])

    def meet_all(self, xs) -> int:
        r = self.top
        for x in xs:
            r = self.meet(r, x)
        return r

    def join_all(self, xs) -> int:
        r = self.bottom
        for x in xs:
            r = self.join(r, x)
        return r

    def up_set(self, a: int) -> StateSet:
        return StateSet(self.carrier, self.leq[a])

    def down_set(self, a: int) -> StateSet:
        return StateSet(self.carrier, self.leq[:, a])


def is_lattice_order(le: np.ndarray) -> bool:
    try:
        FiniteLattice(Universe.of_size(len(le)), le)
    except LatticeError:
        return False
    return True


# --- modal algebras ------------------------------------------------------------

def _as_table(L: FiniteLattice, t) -> np.ndarray:
    t = np.asarray(t, dtype=np.int64)
    if t.shape != (len(L),) or (t < 0).any() or (t >= len(L)).any():
        raise LatticeError("operator table must map every element to an element")
    t = t.copy()
    t.flags.writeable = False
    return t


def is_normal_box(L: FiniteLattice, box) -> bool:
    box = np.asarray(box)
    if box[L.top] != L.top:
        return False
    m = L.meet_table
    return bool((box[m] == m[box[:, None], box[None, :]]).all())


def is_normal_dia(L: FiniteLattice, dia) -> bool:
    dia = np.asarray(dia)
    if dia[L.bottom] != L.bottom:
        return False
    j = L.join_table
    return bool((dia[j] == j[dia[:, None], dia[None, :]]).all())


@dataclass(frozen=True, eq=False)
class ModalAlgebra:
    lattice: FiniteLattice
    box: np.ndarray
    dia: np.ndarray
    check: bool = True

    def __post_init__(self):
        L = self.lattice
        object.__setattr__(self, "box", _as_table(L, self.box))
        object.__setattr__(self, "dia", _as_table(L, self.dia))
        if self.check:
            if not is_normal_box(L, self.box):
                raise NotNormal("box does not preserve top and binary meets")
            if not is_normal_dia(L, self.dia):
                raise NotNormal("dia does not preserve bottom and binary joins")

    @classmethod
    def identity(cls, L: FiniteLattice) -> "ModalAlgebra":
        idx = np.arange(len(L))
        return cls(L, idx, idx)

    def __len__(self) -> int:
        return len(self.lattice)

    @cached_property
    def blackdia(self) -> np.ndarray:
        """Left adjoint of box: the least b with a <= box b."""
        L = self.lattice
        out = [L.meet_all(np.flatnonzero(L.leq[a, self.box])) for a in range(len(L))]
        return _as_table(L, out)

    @cached_property
    def blackbox(self) -> np.ndarray:
        """Right adjoint of dia: the greatest b with dia b <= a."""
        L = self.lattice
        out = [L.join_all(np.flatnonzero(L.leq[self.dia, a])) for a in range(len(L))]
        return _as_table(L, out)


# --- filters and ideals --------------------------------------------------------

def is_filter(L: FiniteLattice, S: StateSet) -> bool:
    m = S.members
    if not m.any():
        return False
    up_closed = not (L.leq[m] & ~m[None, :]).any()
    idx = np.flatnonzero(m)
    meets = L.meet_table[np.ix_(idx, idx)]
    return up_closed and bool(m[meets].all())


def is_ideal(L: FiniteLattice, S: StateSet) -> bool:
    m = S.members
    if not m.any():
        return False
    down_closed = not (L.leq[:, m].T & ~m[None, :]).any()
    idx = np.flatnonzero(m)
    joins = L.join_table[np.ix_(idx, idx)]
    return down_closed and bool(m[joins].all())


def filters(L: FiniteLattice) -> list[StateSet]:
    """All (nonempty) filters; in a finite lattice these are the principal up-sets."""
    return [L.up_set(a) for a in range(len(L))]


def ideals(L: FiniteLattice) -> list[StateSet]:
    return [L.down_set(a) for a in range(len(L))]


def filter_gen(L: FiniteLattice, K) -> StateSet:
    """The filter generated by K; the empty set generates {top}."""
    idx = _indices(L, K)
    return L.up_set(L.meet_all(idx))


def ideal_gen(L: FiniteLattice, K) -> StateSet:
    """The ideal generated by K; the empty set generates {bottom}."""
    idx = _indices(L, K)
    return L.down_set(L.join_all(idx))


def _indices(L: FiniteLattice, K) -> list[int]:
    if isinstance(K, StateSet):
        return K.indices()
    return [int(k) for k in K]


def box_image(A: ModalAlgebra, K: StateSet) -> StateSet:
    return StateSet.from_indices(A.lattice.carrier, sorted({int(A.box[k]) for k in K.indices()}))


def dia_image(A: ModalAlgebra, K: StateSet) -> StateSet:
    return StateSet.from_indices(A.lattice.carrier, sorted({int(A.dia[k]) for k in K.indices()}))


def _filtidl_box(A: ModalAlgebra) -> bool:
    L = A.lattice
    for J in ideals(L):
        bJ = box_image(A, J)
        gen = ideal_gen(L, bJ)
        for F in filters(L):
            if (F & bJ).members.any() != (F & gen).members.any():
                return False
    return True


def _filtidl_dia(A: ModalAlgebra) -> bool:
    L = A.lattice
    for F in filters(L):
        dF = dia_image(A, F)
        gen = filter_gen(L, dF)
        for J in ideals(L):
            if (J & dF).members.any() != (J & gen).members.any():
                return False
    return True


def check_filtidl_lemma(A: ModalAlgebra) -> bool:
    """F meets box[J] iff F meets the ideal generated by box[J]; dually for dia."""
    return _filtidl_box(A) and _filtidl_dia(A)


# --- the dual graph and frame ---------------------------------------------------

@dataclass(frozen=True)
class FIPair:
    F: StateSet
    J: StateSet

    def label(self, L: FiniteLattice) -> str:
        f = ",".join(str(L.labels[i]) for i in self.F.indices())
        j = ",".join(str(L.labels[i]) for i in self.J.indices())
        return f"({f}|{j})"


def fi_pairs(L: FiniteLattice, strict: bool = True) -> list[FIPair]:
    """Disjoint filter/ideal pairs.

    In strict mode both parts are nonempty (hence proper). Otherwise a part may
    also be empty, provided any nonempty part is proper.
    """
    empty = StateSet.empty(L.carrier)
    Fs, Js = filters(L), ideals(L)
    if not strict:
        Fs = [F for F in Fs if F != StateSet.full(L.carrier)] + [empty]
        Js = [J for J in Js if J != StateSet.full(L.carrier)] + [empty]
    return [FIPair(F, J) for F in Fs for J in Js if not (F & J).members.any()]


def _meets(S: np.ndarray, T: np.ndarray) -> np.ndarray:
    """out[x, y] = S[x] and T[y] share an element."""
    return (S.astype(np.int32) @ T.astype(np.int32).T) > 0


def build_graph_XL(L: FiniteLattice, strict: bool = True) -> tuple[Universe, Rel, list[FIPair]]:
    """States are disjoint filter/ideal pairs; z E z' iff F_z and J_z' are disjoint."""
    pairs = fi_pairs(L, strict)
    Z = Universe(tuple(p.label(L) for p in pairs))
    F = np.array([p.F.members for p in pairs], dtype=bool).reshape(len(pairs), len(L))
    J = np.array([p.J.members for p in pairs], dtype=bool).reshape(len(pairs), len(L))
    return Z, Rel(Z, Z, ~_meets(F, J)), pairs


def build_frame_FA(A: ModalAlgebra, strict: bool = True, check: bool = False) -> GraphFrame:
    """x Rbox y iff F_x misses box[J_y]; x Rdia y iff J_x misses dia[F_y]."""
    L = A.lattice
    Z, E, pairs = build_graph_XL(L, strict)
    n = len(L)
    F = np.array([p.F.members for p in pairs], dtype=bool).reshape(len(pairs), n)
    J = np.array([p.J.members for p in pairs], dtype=bool).reshape(len(pairs), n)
    boxJ = np.array([box_image(A, p.J).members for p in pairs], dtype=bool).reshape(len(pairs), n)
    diaF = np.array([dia_image(A, p.F).members for p in pairs], dtype=bool).reshape(len(pairs), n)
    Rbox = Rel(Z, Z, ~_meets(F, boxJ))
    Rdia = Rel(Z, Z, ~_meets(J, diaF))
    return GraphFrame(Z, E, Rbox, Rdia, check=check)


# --- isomorphisms ----------------------------------------------------------------

def find_isomorphism(
    L1: FiniteLattice,
    L2: FiniteLattice,
    ops: Sequence[tuple[np.ndarray, np.ndarray]] = (),
) -> list[int] | None:
    """An order isomorphism L1 -> L2 (as an index list) commuting with each op pair."""
    n = len(L1)
    if n != len(L2):
        return None
    le1, le2 = L1.leq, L2.leq
    deg1 = le1.sum(axis=0) * 100 + le1.sum(axis=1)
    deg2 = le2.sum(axis=0) * 100 + le2.sum(axis=1)
    if sorted(deg1) != sorted(deg2):
        return None
    order = sorted(range(n), key=lambda i: -int(le1[i].sum() + le1[:, i].sum()))
    phi = [-1] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        for j in range(n):
            if phi[j] >= 0 and (le1[i, j] != le2[phi[i], phi[j]] or le1[j, i] != le2[phi[j], phi[i]]):
                return False
        return True

    def ops_ok() -> bool:
        return all(all(f2[phi[a]] == phi[f1[a]] for a in range(n)) for f1, f2 in ops)

    def search(k: int) -> bool:
        if k == n:
            return ops_ok()
        i = order[k]
        for c in range(n):
            if used[c] or deg1[i] != deg2[c]:
                continue
            phi[i] = c
            used[c] = True
            if consistent(i) and search(k + 1):
                return True
            used[c] = False
            phi[i] = -1
        return False

    return list(phi) if search(0) else None


def lattice_of_concepts(ca: ComplexAlgebra) -> FiniteLattice:
    lat = ca.lattice
    return FiniteLattice(Universe(tuple(f"c{i}" for i in range(len(lat)))), lat.order)


def complex_modal_algebra(ca: ComplexAlgebra | GraphFrame) -> ModalAlgebra:
    """The complex algebra of a frame as a table-based modal algebra."""
    if isinstance(ca, GraphFrame):
        ca = ComplexAlgebra(ca)
    return ModalAlgebra(lattice_of_concepts(ca), ca.box_table, ca.dia_table)


def canonical_map(L: FiniteLattice, frame_or_pairs, strict: bool = True) -> list[Concept]:
    """a goes to ({z | a in F_z}, {z | a in J_z})."""
    if isinstance(frame_or_pairs, GraphFrame):
        pairs = fi_pairs(L, strict)
        Z = frame_or_pairs.universe
    else:
        Z, pairs = frame_or_pairs
    out = []
    for a in range(len(L)):
        ext = StateSet(Z, np.array([bool(p.F.members[a]) for p in pairs], dtype=bool))
        intent = StateSet(Z, np.array([bool(p.J.members[a]) for p in pairs], dtype=bool))
        out.append(Concept(ext, intent))
    return out


def check_canonical_extension(L: FiniteLattice, strict: bool = True) -> bool:
    """The concept lattice of X_L is isomorphic to L (found by explicit search)."""
    Z, E, _ = build_graph_XL(L, strict)
    frame = GraphFrame(Z, E, E, converse(E), check=False)
    ca = ComplexAlgebra(frame)
    return find_isomorphism(L, lattice_of_concepts(ca)) is not None


def check_canonical_map(A: ModalAlgebra) -> bool:
    """In strict mode the map a -> (extent, intent) is an isomorphism onto F_A+
    commuting with box and dia."""
    L = A.lattice
    frame = build_frame_FA(A, strict=True)
    ca = ComplexAlgebra(frame)
    lat = ca.lattice
    h = canonical_map(L, frame)
    try:
        idx = [lat.index(c) for c in h]
    except KeyError:
        return False
    if any(lat.concepts[i] != c for i, c in zip(idx, h)) or len(set(idx)) != len(L):
        return False
    if len(lat) != len(L):
        return False
    if not np.array_equal(lat.order[np.ix_(idx, idx)], L.leq):
        return False
    box, dia = ca.box_table, ca.dia_table
    return all(box[idx[a]] == idx[A.box[a]] and dia[idx[a]] == idx[A.dia[a]] for a in range(len(L)))


def check_algebra_iso(A: ModalAlgebra, strict: bool = True) -> bool:
    """F_A+ is isomorphic to A as a modal algebra (explicit search)."""
    B = complex_modal_algebra(build_frame_FA(A, strict))
    return find_isomorphism(A.lattice, B.lattice, [(A.box, B.box), (A.dia, B.dia)]) is not None


# --- validity in an algebra ------------------------------------------------------

def algebra_eval(A: ModalAlgebra, phi: Formula, assignment: dict[str, int]) -> int:
    L = A.lattice
    if isinstance(phi, Bot):
        return L.bottom
    if isinstance(phi, Top):
        return L.top
    if isinstance(phi, Prop):
        return assignment[phi.name]
    if isinstance(phi, And):
        return L.meet(algebra_eval(A, phi.left, assignment), algebra_eval(A, phi.right, assignment))
    if isinstance(phi, Or):
        return L.join(algebra_eval(A, phi.left, assignment), algebra_eval(A, phi.right, assignment))
    table = {Box: A.box, Dia: A.dia, BlackBox: A.blackbox, BlackDia: A.blackdia}[type(phi)]
    return int(table[algebra_eval(A, phi.arg, assignment)])


def algebra_validates(A: ModalAlgebra, seq: Sequent, cap: int = 10**6) -> bool:
    names = sorted(props_of(seq))
    n = len(A)
    if n ** len(names) > cap:
        raise RuntimeError(f"{n ** len(names)} assignments exceeds cap {cap}")
    le = A.lattice.leq
    for combo in itertools.product(range(n), repeat=len(names)):
        asg = dict(zip(names, combo))
        if not le[algebra_eval(A, seq.lhs, asg), algebra_eval(A, seq.rhs, asg)]:
            return False
    return True


# --- enumeration -------------------------------------------------------------------

def _canonical_form(le: np.ndarray) -> bytes:
    n = len(le)
    best = None
    mid = list(range(1, n - 1))
    for perm in itertools.permutations(mid):
        p = [0, *perm, n - 1]
        key = le[np.ix_(p, p)].tobytes()
        if best is None or key < best:
            best = key
    return best


def enumerate_lattices(n: int) -> list[FiniteLattice]:
    """All lattices with n elements up to isomorphism; bottom is 0 and top n-1."""
    if n == 1:
        return [FiniteLattice(Universe.of_size(1), np.ones((1, 1), dtype=bool))]
    mid = list(range(1, n - 1))
    slots = [(i, j) for i in mid for j in mid if i < j]
    seen: set[bytes] = set()
    out = []
    for bits in itertools.product((0, 1), repeat=len(slots)):
        le = np.eye(n, dtype=bool)
        le[0, :] = True
        le[:, n - 1] = True
        for (i, j), b in zip(slots, bits):
            if b:
                le[i, j] = True
        if not np.array_equal(_transitive_closure(le), le):
            continue
        if not is_lattice_order(le):
            continue
        key = _canonical_form(le)
        if key in seen:
            continue
        seen.add(key)
        out.append(FiniteLattice(Universe.of_size(n), le))
    return out


def random_lattice(rng: np.random.Generator, n: int, tries: int = 10000) -> FiniteLattice:
    """A random lattice on n elements (naturally labelled, rejection sampled)."""
    if n <= 2:
        return FiniteLattice.chain(n)
    for _ in range(tries):
        le = np.eye(n, dtype=bool)
        le[0, :] = True
        le[:, n - 1] = True
        upper = np.triu(rng.random((n, n)) < rng.uniform(0.2, 0.8), 1)
        upper[0, :] = upper[:, n - 1] = False
        le |= upper
        le = _transitive_closure(le)
        if is_lattice_order(le):
            return FiniteLattice(Universe.of_size(n), le)
    raise RuntimeError("failed to sample a lattice")


def normal_boxes(L: FiniteLattice) -> Iterator[np.ndarray]:
    n = len(L)
    free = [a for a in range(n) if a != L.top]
    for vals in itertools.product(range(n), repeat=len(free)):
        t = np.empty(n, dtype=np.int64)
        t[L.top] = L.top
        t[free] = vals
        if is_normal_box(L, t):
            yield t


def normal_dias(L: FiniteLattice) -> Iterator[np.ndarray]:
    n = len(L)
    free = [a for a in range(n) if a != L.bottom]
    for vals in itertools.product(range(n), repeat=len(free)):
        t = np.empty(n, dtype=np.int64)
        t[L.bottom] = L.bottom
        t[free] = vals
        if is_normal_dia(L, t):
            yield t


def enumerate_modal_algebras(n_max: int = 5) -> Iterator[ModalAlgebra]:
    for n in range(1, n_max + 1):
        for L in enumerate_lattices(n):
            dias = list(normal_dias(L))
            for box in normal_boxes(L):
                for dia in dias:
                    yield ModalAlgebra(L, box, dia, check=False)


def random_normal_box(rng: np.random.Generator, L: FiniteLattice) -> np.ndarray:
    """A random normal box, by rejection after a monotone meet-closure repair."""
    n = len(L)
    for _ in range(1000):
        t = rng.integers(0, n, size=n)
        t[L.top] = L.top
        t = np.array([L.meet_all(t[np.flatnonzero(L.leq[a])]) for a in range(n)])
        if is_normal_box(L, t):
            return t
    return np.arange(n)


def random_normal_dia(rng: np.random.Generator, L: FiniteLattice) -> np.ndarray:
    n = len(L)
    for _ in range(1000):
        t = rng.integers(0, n, size=n)
        t[L.bottom] = L.bottom
        t = np.array([L.join_all(t[np.flatnonzero(L.leq[:, a])]) for a in range(n)])
        if is_normal_dia(L, t):
            return t
    return np.arange(n)


def random_modal_algebra(rng: np.random.Generator, n: int) -> ModalAlgebra:
    L = random_lattice(rng, n)
    return ModalAlgebra(L, random_normal_box(rng, L), random_normal_dia(rng, L))


@dataclass
class SweepReport:
    lattices: int = 0
    boxes: int = 0
    dias: int = 0
    algebras: int = 0
    failures: list = None

    def __post_init__(self):
        self.failures = [] if self.failures is None else self.failures

    @property
    def ok(self) -> bool:
        return not self.failures


def sweep_modal_algebras(n_max: int = 5) -> SweepReport:
    """Exhaustive check of every modal algebra with at most ``n_max`` elements.

    Every check factors into a box part and a dia part: E-compatibility is per
    relation, the canonical map is fixed by the lattice, and the filter/ideal
    lemma is a conjunction. So each (lattice, box) and (lattice, dia) is checked
    once, which covers all box x dia combinations. The lattice isomorphism
    itself is found by search for each lattice.
    """
    from .frames import compat_violations, dia_compat_violations

    rep = SweepReport()
    for n in range(1, n_max + 1):
        for L in enumerate_lattices(n):
            rep.lattices += 1
            if not check_canonical_extension(L):
                rep.failures.append(("lattice iso", L))
            ident = np.arange(n)
            boxes = list(normal_boxes(L))
            dias = list(normal_dias(L))
            rep.boxes += len(boxes)
            rep.dias += len(dias)
            rep.algebras += len(boxes) * len(dias)
            for box in boxes:
                # the other operator is the identity; it does not affect these checks
                A = ModalAlgebra(L, box, ident, check=False)
                f = build_frame_FA(A)
                if compat_violations(f.E, f.Rbox, "Rbox"):
                    rep.failures.append(("Rbox compat", L, box))
                if not _filtidl_box(A):
                    rep.failures.append(("filter lemma box", L, box))
                if not check_canonical_map(A):
                    rep.failures.append(("box iso", L, box))
            for dia in dias:
                A = ModalAlgebra(L, ident, dia, check=False)
                f = build_frame_FA(A)
                if dia_compat_violations(f.E, f.Rdia, "Rdia"):
                    rep.failures.append(("Rdia compat", L, dia))
                if not _filtidl_dia(A):
                    rep.failures.append(("filter lemma dia", L, dia))
                if not check_canonical_map(A):
                    rep.failures.append(("dia iso", L, dia))
    return rep

