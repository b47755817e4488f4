"""Formal contexts, their Galois maps and concept lattices."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

import numpy as np

from .relcore import Rel, StateSet, Universe, UniverseMismatch, round0, round1

DEFAULT_CONCEPT_CAP = 1 << 16
SCAN_THRESHOLD = 12


class ConceptCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class FormalContext:
    objects: Universe
    attributes: Universe
    incidence: Rel

    def __post_init__(self):
        if self.incidence.source != self.objects or self.incidence.target != self.attributes:
            raise UniverseMismatch("incidence does not match objects x attributes")


@dataclass(frozen=True)
class Concept:
    extent: StateSet
    intent: StateSet

    def __le__(self, other: "Concept") -> bool:
        return self.extent <= other.extent

    def __ge__(self, other: "Concept") -> bool:
        return other.extent <= self.extent

    def __repr__(self) -> str:
        return f"Concept({self.extent!r}, {self.intent!r})"


def up(ctx: FormalContext, B: StateSet) -> StateSet:
    return round1(ctx.incidence, B)


def down(ctx: FormalContext, Y: StateSet) -> StateSet:
    return round0(ctx.incidence, Y)


def closure(ctx: FormalContext, B: StateSet) -> StateSet:
    return down(ctx, up(ctx, B))


def intent_closure(ctx: FormalContext, Y: StateSet) -> StateSet:
    return up(ctx, down(ctx, Y))


def is_stable(ctx: FormalContext, B: StateSet) -> bool:
    return closure(ctx, B) == B


def is_stable_intent(ctx: FormalContext, Y: StateSet) -> bool:
    return intent_closure(ctx, Y) == Y


def concept_of_extent(ctx: FormalContext, B: StateSet) -> Concept:
    """The concept generated by B: (B closed, B up)."""
    Y = up(ctx, B)
    return Concept(down(ctx, Y), Y)


def concept_of_intent(ctx: FormalContext, Y: StateSet) -> Concept:
    B = down(ctx, Y)
    return Concept(B, up(ctx, B))


def is_concept(ctx: FormalContext, c: Concept) -> bool:
    return up(ctx, c.extent) == c.intent and down(ctx, c.intent) == c.extent


# --- enumeration -------------------------------------------------------------
# Bitmask closures: bit i of an object mask is object i, likewise for attributes.

def _masks(ctx: FormalContext) -> tuple[list[int], list[int]]:
    I = ctx.incidence.pairs
    rows = [sum(1 << int(j) for j in np.flatnonzero(I[i])) for i in range(I.shape[0])]
    cols = [sum(1 << int(i) for i in np.flatnonzero(I[:, j])) for j in range(I.shape[1])]
    return rows, cols


def _closer(ctx: FormalContext):
    rows, cols = _masks(ctx)
    all_objs = (1 << len(rows)) - 1
    all_attrs = (1 << len(cols)) - 1

    def close(b: int) -> int:
        y = all_attrs
        i = 0
        while b >> i:
            if (b >> i) & 1:
                y &= rows[i]
            i += 1
        ext = all_objs
        j = 0
        while y >> j:
            if (y >> j) & 1:
                ext &= cols[j]
            j += 1
        return ext

    return close


def _scan_extents(ctx: FormalContext, cap: int) -> set[int]:
    close = _closer(ctx)
    seen: set[int] = set()
    for b in range(1 << len(ctx.objects)):
        seen.add(close(b))
        if len(seen) > cap:
            raise ConceptCapExceeded(f"more than {cap} concepts")
    return seen


def next_closure_extents(ctx: FormalContext, cap: int = DEFAULT_CONCEPT_CAP) -> Iterator[int]:
    """Closed object sets in lectic order (Ganter's NextClosure)."""
    n = len(ctx.objects)
    close = _closer(ctx)
    current = close(0)
    count = 1
    yield current
    while current != (1 << n) - 1:
        for i in range(n - 1, -1, -1):
            bit = 1 << i
            if current & bit:
                continue
            low = current & (bit - 1)
            candidate = close(low | bit)
            # lectic successor: no new element below i
            if candidate & (bit - 1) == low:
                current = candidate
                break
        else:  # pragma: no cover - the full set is always closed
            return
        count += 1
        if count > cap:
            raise ConceptCapExceeded(f"more than {cap} concepts")
        yield current


def _mask_to_set(universe: Universe, mask: int) -> StateSet:
    n = len(universe)
    return StateSet(universe, np.array([(mask >> i) & 1 for i in range(n)], dtype=bool))


@dataclass(frozen=True, eq=False)
class ConceptLattice:
    context: FormalContext
    concepts: tuple[Concept, ...]
    order: np.ndarray

    @cached_property
    def _by_extent(self) -> dict[bytes, int]:
        return {c.extent.members.tobytes(): i for i, c in enumerate(self.concepts)}

    def __len__(self) -> int:
        return len(self.concepts)

    def __iter__(self) -> Iterator[Concept]:
        return iter(self.concepts)

    def index(self, c: Concept) -> int:
        try:
            return self._by_extent[c.extent.members.tobytes()]
        except KeyError:
            raise KeyError(f"{c!r} is not a concept of this lattice") from None

    def __contains__(self, c: Concept) -> bool:
        return c.extent.members.tobytes() in self._by_extent and is_concept(self.context, c)

    @property
    def top(self) -> Concept:
        return self.concepts[int(np.argmax(self.order.sum(axis=0)))]

    @property
    def bottom(self) -> Concept:
        return self.concepts[int(np.argmax(self.order.sum(axis=1)))]

    @cached_property
    def meet_table(self) -> np.ndarray:
        n = len(self)
        t = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                t[i, j] = self.index(meet(self, self.concepts[i], self.concepts[j]))
        return t

    @cached_property
    def join_table(self) -> np.ndarray:
        n = len(self)
        t = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                t[i, j] = self.index(join(self, self.concepts[i], self.concepts[j]))
        return t

    def hasse_edges(self) -> list[tuple[int, int]]:
        """Covering pairs (lower, upper) as concept indices."""
        lt = self.order & ~np.eye(len(self), dtype=bool)
        # i < k < j for some k
        via = (lt.astype(np.int32) @ lt.astype(np.int32)) > 0
        cover = lt & ~via
        return [(int(i), int(j)) for i, j in zip(*np.nonzero(cover))]


def enumerate_concepts(
    ctx: FormalContext,
    cap: int = DEFAULT_CONCEPT_CAP,
    scan_threshold: int = SCAN_THRESHOLD,
    method: str | None = None,
) -> ConceptLattice:
    """All concepts of ``ctx``, sorted by extent, with their order matrix.

    ``method`` forces ``"scan"`` (every object subset is closed) or
    ``"nextclosure"``; by default the scan is used up to ``scan_threshold``
    objects.
    """
    if method is None:
        method = "scan" if len(ctx.objects) <= scan_threshold else "nextclosure"
    if method == "scan":
        masks = _scan_extents(ctx, cap)
    elif method == "nextclosure":
        masks = set(next_closure_extents(ctx, cap))
    else:
        raise ValueError(f"unknown enumeration method {method!r}")

    extents = sorted((_mask_to_set(ctx.objects, m) for m in masks), key=StateSet.sort_key)
    concepts = tuple(Concept(b, up(ctx, b)) for b in extents)
    ext = np.array([c.extent.members for c in concepts], dtype=bool).reshape(len(concepts), -1)
    # order[i, j]: extent i is a subset of extent j
    order = ~((ext.astype(np.int32) @ (~ext).T.astype(np.int32)) > 0)
    order.flags.writeable = False
    return ConceptLattice(ctx, concepts, order)


def meet(lat: ConceptLattice | FormalContext, c: Concept, d: Concept) -> Concept:
    ctx = lat.context if isinstance(lat, ConceptLattice) else lat
    B = c.extent & d.extent
    return Concept(B, up(ctx, B))


def join(lat: ConceptLattice | FormalContext, c: Concept, d: Concept) -> Concept:
    ctx = lat.context if isinstance(lat, ConceptLattice) else lat
    Y = c.intent & d.intent
    return Concept(down(ctx, Y), Y)


def meet_all(ctx: FormalContext, cs) -> Concept:
    B = StateSet.full(ctx.objects)
    for c in cs:
        B = B & c.extent
    return Concept(B, up(ctx, B))


def join_all(ctx: FormalContext, cs) -> Concept:
    Y = StateSet.full(ctx.attributes)
    for c in cs:
        Y = Y & c.intent
    return Concept(down(ctx, Y), Y)
