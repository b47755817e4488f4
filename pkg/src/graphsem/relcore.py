"""Finite sets and binary relations over an ordered universe of states.

Every value carries the universe it lives on; mixing values from different
universes raises :class:`UniverseMismatch` instead of silently reindexing.
Membership and relation matrices are dense boolean numpy arrays marked
read-only, so values can be shared freely.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np


class UniverseMismatch(ValueError):
    pass


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=bool)
    arr.flags.writeable = False
    return arr


def _bool_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # boolean product: (a @ b)[i, j] = exists k. a[i, k] and b[k, j]
    return (a.astype(np.int32) @ b.astype(np.int32)) > 0


@dataclass(frozen=True)
class Universe:
    labels: tuple[str, ...]

    def __post_init__(self):
        labels = tuple(str(x) for x in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(set(labels)) != len(labels):
            dup = sorted({x for x in labels if labels.count(x) > 1})
            raise ValueError(f"duplicate state labels: {dup}")

    @classmethod
    def range(cls, lo: int, hi: int) -> "Universe":
        """Integer states ``lo..hi`` inclusive."""
        return cls(tuple(str(i) for i in range(lo, hi + 1)))

    @classmethod
    def of_size(cls, n: int) -> "Universe":
        return cls(tuple(str(i) for i in range(n)))

    @cached_property
    def _index(self) -> dict[str, int]:
        return {lab: i for i, lab in enumerate(self.labels)}

    @cached_property
    def is_numeric(self) -> bool:
        try:
            [int(x) for x in self.labels]
        except ValueError:
            return False
        return True

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)

    def index(self, label) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"unknown state {label!r}") from None


@dataclass(frozen=True, eq=False)
class StateSet:
    universe: Universe
    members: np.ndarray = field(repr=False)

    def __post_init__(self):
        members = _frozen(self.members)
        if members.shape != (len(self.universe),):
            raise ValueError(
                f"membership vector has shape {members.shape}, expected ({len(self.universe)},)"
            )
        object.__setattr__(self, "members", members)

    @classmethod
    def empty(cls, universe: Universe) -> "StateSet":
        return cls(universe, np.zeros(len(universe), dtype=bool))

    @classmethod
    def full(cls, universe: Universe) -> "StateSet":
        return cls(universe, np.ones(len(universe), dtype=bool))

    @classmethod
    def from_indices(cls, universe: Universe, indices: Iterable[int]) -> "StateSet":
        m = np.zeros(len(universe), dtype=bool)
        m[list(indices)] = True
        return cls(universe, m)

    @classmethod
    def from_labels(cls, universe: Universe, labels: Iterable) -> "StateSet":
        return cls.from_indices(universe, [universe.index(x) for x in labels])

    def indices(self) -> list[int]:
        return np.flatnonzero(self.members).tolist()

    def labels(self) -> list[str]:
        return [self.universe.labels[i] for i in self.indices()]

    def _check(self, other: "StateSet") -> None:
        if not isinstance(other, StateSet):
            raise TypeError(f"expected StateSet, got {type(other).__name__}")
        if other.universe != self.universe:
            raise UniverseMismatch("state sets live on different universes")

    def __len__(self) -> int:
        return int(self.members.sum())

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels())

    def __contains__(self, label) -> bool:
        return bool(self.members[self.universe.index(label)])

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateSet):
            return NotImplemented
        return self.universe == other.universe and np.array_equal(self.members, other.members)

    def __hash__(self) -> int:
        return hash((self.universe, self.members.tobytes()))

    def __and__(self, other: "StateSet") -> "StateSet":
        self._check(other)
        return StateSet(self.universe, self.members & other.members)

    def __or__(self, other: "StateSet") -> "StateSet":
        self._check(other)
        return StateSet(self.universe, self.members | other.members)

    def __sub__(self, other: "StateSet") -> "StateSet":
        self._check(other)
        return StateSet(self.universe, self.members & ~other.members)

    def __invert__(self) -> "StateSet":
        return StateSet(self.universe, ~self.members)

    def __le__(self, other: "StateSet") -> bool:
        self._check(other)
        return not bool(np.any(self.members & ~other.members))

    def __ge__(self, other: "StateSet") -> bool:
        return other <= self

    def __lt__(self, other: "StateSet") -> bool:
        return self <= other and self != other

    def __repr__(self) -> str:
        return "{" + ", ".join(self.labels()) + "}"

    def complement(self) -> "StateSet":
        return ~self

    def runs(self) -> list[tuple[int, int]]:
        """Maximal runs of consecutive integer labels (numeric universes only)."""
        out: list[list[int]] = []
        for v in sorted(int(x) for x in self.labels()):
            if out and out[-1][1] == v - 1:
                out[-1][1] = v
            else:
                out.append([v, v])
        return [(a, b) for a, b in out]

    def pretty(self) -> str:
        """``[370,512] ∪ [567,780]`` on numeric universes, otherwise ``{a, b}``."""
        if not self.members.any():
            return "∅"
        if self.universe.is_numeric:
            return " ∪ ".join(f"[{a},{b}]" for a, b in self.runs())
        return repr(self)

    def sort_key(self) -> tuple[int, ...]:
        return tuple(self.indices())


@dataclass(frozen=True, eq=False)
class Rel:
    source: Universe
    target: Universe
    pairs: np.ndarray = field(repr=False)

    def __post_init__(self):
        pairs = _frozen(self.pairs)
        shape = (len(self.source), len(self.target))
        if pairs.shape != shape:
            raise ValueError(f"relation matrix has shape {pairs.shape}, expected {shape}")
        object.__setattr__(self, "pairs", pairs)

    @classmethod
    def empty(cls, source: Universe, target: Universe | None = None) -> "Rel":
        target = source if target is None else target
        return cls(source, target, np.zeros((len(source), len(target)), dtype=bool))

    @classmethod
    def full(cls, source: Universe, target: Universe | None = None) -> "Rel":
        target = source if target is None else target
        return cls(source, target, np.ones((len(source), len(target)), dtype=bool))

    @classmethod
    def from_pairs(
        cls, source: Universe, pairs: Iterable[tuple], target: Universe | None = None
    ) -> "Rel":
        """Build from label pairs."""
        target = source if target is None else target
        m = np.zeros((len(source), len(target)), dtype=bool)
        for a, b in pairs:
            m[source.index(a), target.index(b)] = True
        return cls(source, target, m)

    @classmethod
    def from_index_pairs(
        cls, source: Universe, pairs: Iterable[tuple[int, int]], target: Universe | None = None
    ) -> "Rel":
        target = source if target is None else target
        m = np.zeros((len(source), len(target)), dtype=bool)
        for a, b in pairs:
            m[a, b] = True
        return cls(source, target, m)

    @classmethod
    def from_predicate(cls, universe: Universe, pred) -> "Rel":
        """``pred(a, b)`` called on labels of a square relation."""
        n = len(universe)
        labs = universe.labels
        m = np.array([[bool(pred(labs[i], labs[j])) for j in range(n)] for i in range(n)], dtype=bool)
        return cls(universe, universe, m.reshape(n, n))

    @property
    def is_square(self) -> bool:
        return self.source == self.target

    def index_pairs(self) -> list[tuple[int, int]]:
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(self.pairs))]

    def label_pairs(self) -> list[tuple[str, str]]:
        s, t = self.source.labels, self.target.labels
        return [(s[i], t[j]) for i, j in self.index_pairs()]

    def holds(self, a, b) -> bool:
        return bool(self.pairs[self.source.index(a), self.target.index(b)])

    def is_reflexive(self) -> bool:
        return self.is_square and bool(np.all(np.diagonal(self.pairs)))

    def _check_same(self, other: "Rel") -> None:
        if self.source != other.source or self.target != other.target:
            raise UniverseMismatch("relations live on different universes")

    def __eq__(self, other) -> bool:
        if not isinstance(other, Rel):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and np.array_equal(self.pairs, other.pairs)
        )

    def __hash__(self) -> int:
        return hash((self.source, self.target, self.pairs.tobytes()))

    def __le__(self, other: "Rel") -> bool:
        self._check_same(other)
        return not bool(np.any(self.pairs & ~other.pairs))

    def __ge__(self, other: "Rel") -> bool:
        return other <= self

    def __and__(self, other: "Rel") -> "Rel":
        self._check_same(other)
        return Rel(self.source, self.target, self.pairs & other.pairs)

    def __or__(self, other: "Rel") -> "Rel":
        self._check_same(other)
        return Rel(self.source, self.target, self.pairs | other.pairs)

    def __sub__(self, other: "Rel") -> "Rel":
        self._check_same(other)
        return Rel(self.source, self.target, self.pairs & ~other.pairs)

    def __len__(self) -> int:
        return int(self.pairs.sum())

    def __repr__(self) -> str:
        edges = " ".join(f"{a}>{b}" for a, b in self.label_pairs())
        return f"Rel({edges})"


def _expect(universe: Universe, s: StateSet, what: str) -> None:
    if not isinstance(s, StateSet):
        raise TypeError(f"{what} must be a StateSet")
    if s.universe != universe:
        raise UniverseMismatch(f"{what} is not a subset of the expected universe")


# --- relation plumbing -------------------------------------------------------

def identity(universe: Universe) -> Rel:
    return Rel(universe, universe, np.eye(len(universe), dtype=bool))


def complement(R: Rel) -> Rel:
    return Rel(R.source, R.target, ~R.pairs)


def converse(R: Rel) -> Rel:
    return Rel(R.target, R.source, R.pairs.T)


def rel_compose(R: Rel, S: Rel) -> Rel:
    """Ordinary composition: x (R;S) z iff x R y and y S z for some y."""
    if R.target != S.source:
        raise UniverseMismatch("cannot compose: middle universes differ")
    return Rel(R.source, S.target, _bool_matmul(R.pairs, S.pairs))


# --- images and classical modal operators ------------------------------------

def image(R: Rel, S: StateSet) -> StateSet:
    """Forward image R[S]."""
    _expect(R.source, S, "argument")
    return StateSet(R.target, np.any(R.pairs[S.members, :], axis=0))


def preimage(R: Rel, T: StateSet) -> StateSet:
    """Backward image R^-1[T]."""
    _expect(R.target, T, "argument")
    return StateSet(R.source, np.any(R.pairs[:, T.members], axis=1))


def dia_sem(R: Rel, W: StateSet) -> StateSet:
    return preimage(R, W)


def box_sem(R: Rel, W: StateSet) -> StateSet:
    """[R]W: the states all of whose R-successors lie in W."""
    return ~preimage(R, ~W)


# --- polarity-style operators ------------------------------------------------

def round1(T: Rel, U: StateSet) -> StateSet:
    """Targets related to every member of U (all targets when U is empty)."""
    _expect(T.source, U, "argument")
    return StateSet(T.target, np.all(T.pairs[U.members, :], axis=0))


def round0(T: Rel, V: StateSet) -> StateSet:
    """Sources related to every member of V."""
    _expect(T.target, V, "argument")
    return StateSet(T.source, np.all(T.pairs[:, V.members], axis=1))


def square1(T: Rel, U: StateSet) -> StateSet:
    """Targets related to no member of U."""
    _expect(T.source, U, "argument")
    return StateSet(T.target, ~np.any(T.pairs[U.members, :], axis=0))


def square0(T: Rel, V: StateSet) -> StateSet:
    """Sources related to no member of V."""
    _expect(T.target, V, "argument")
    return StateSet(T.source, ~np.any(T.pairs[:, V.members], axis=1))


# --- E-parametric composition ------------------------------------------------

def _check_square(*rels: Rel) -> Universe:
    u = rels[0].source
    for r in rels:
        if r.source != u or r.target != u:
            raise UniverseMismatch("E-composition needs relations on one square universe")
    return u


def comp_circ(R: Rel, S: Rel, E: Rel) -> Rel:
    """x (R o_E S) a iff x R b for some b whose E-successors all S-reach a."""
    u = _check_square(R, S, E)
    # witness[b, a]: no v with b E v and not v S a
    witness = ~_bool_matmul(E.pairs, ~S.pairs)
    return Rel(u, u, _bool_matmul(R.pairs, witness))


def comp_bullet(R: Rel, S: Rel, E: Rel) -> Rel:
    """a (R . S) x iff a R y for some y whose E-predecessors all S-reach x."""
    u = _check_square(R, S, E)
    # witness[y, x]: no u with u E y and not u S x
    witness = ~_bool_matmul(E.pairs.T, ~S.pairs)
    return Rel(u, u, _bool_matmul(R.pairs, witness))


def singleton(universe: Universe, label) -> StateSet:
    return StateSet.from_labels(universe, [label])


def subsets(universe: Universe) -> Iterator[StateSet]:
    """All 2^n subsets, in binary-counter order. Only sensible for small n."""
    n = len(universe)
    for mask in range(1 << n):
        yield StateSet(universe, np.array([(mask >> i) & 1 for i in range(n)], dtype=bool))


def same_universe(items: Sequence[StateSet]) -> Universe:
    u = items[0].universe
    for s in items:
        if s.universe != u:
            raise UniverseMismatch("state sets live on different universes")
    return u
