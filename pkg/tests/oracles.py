"""Independent brute-force oracles over plain Python sets.

Nothing here imports the package; relations are sets of pairs over range(n).
"""
from __future__ import annotations

import itertools


def sq0(Z, T, V):
    return frozenset(u for u in Z if all((u, v) not in T for v in V))


def sq1(Z, T, U):
    return frozenset(v for v in Z if all((u, v) not in T for u in U))


def rd0(Z, T, V):
    return frozenset(u for u in Z if all((u, v) in T for v in V))


def rd1(Z, T, U):
    return frozenset(v for v in Z if all((u, v) in T for u in U))


def powerset(Z):
    Z = list(Z)
    for r in range(len(Z) + 1):
        for c in itertools.combinations(Z, r):
            yield frozenset(c)


def concepts(Z, E):
    """All (extent, intent) pairs of the polarity with incidence E^c."""
    out = set()
    for B in powerset(Z):
        Y = sq1(Z, E, B)
        out.add((sq0(Z, E, Y), Y))
    return sorted(out, key=lambda c: (len(c[0]), sorted(c[0])))


def circ(Z, R, S, E):
    return frozenset(
        (x, a)
        for x in Z
        for a in Z
        if any((x, b) in R and all((v, a) in S for v in Z if (b, v) in E) for b in Z)
    )


def bullet(Z, R, S, E):
    return frozenset(
        (a, x)
        for a in Z
        for x in Z
        if any((a, y) in R and all((u, x) in S for u in Z if (u, y) in E) for y in Z)
    )


def compose(Z, R, S):
    return frozenset((x, z) for x in Z for z in Z if any((x, y) in R and (y, z) in S for y in Z))


def box_compatible(Z, E, R):
    for y in Z:
        s = sq0(Z, R, {y})
        if sq0(Z, E, sq1(Z, E, s)) != s:
            return False
    for b in Z:
        s = sq1(Z, R, {b})
        if sq1(Z, E, sq0(Z, E, s)) != s:
            return False
    return True


def box_op(Z, E, R, c):
    """[R](B, Y): extent R^[0][Y]."""
    B = sq0(Z, R, c[1])
    return B, sq1(Z, E, B)


def dia_op(Z, E, R, c):
    """<R>(B, Y): intent R^[0][B]."""
    Y = sq0(Z, R, c[0])
    return sq0(Z, E, Y), Y


def kripke(Z, R, val, f):
    """Textbook Kripke truth set of a formula given as nested tuples.

    ('var', name), ('bot',), ('top',), ('and', f, g), ('or', f, g), ('box', f),
    ('dia', f), ('bbox', f), ('bdia', f); the black modalities use the
    converse relation.
    """
    tag = f[0]
    if tag == "bot":
        return frozenset()
    if tag == "top":
        return frozenset(Z)
    if tag == "and":
        return kripke(Z, R, val, f[1]) & kripke(Z, R, val, f[2])
    if tag == "or":
        return kripke(Z, R, val, f[1]) | kripke(Z, R, val, f[2])
    if tag in ("box", "dia", "bbox", "bdia"):
        inner = kripke(Z, R, val, f[1])
        rel = {
            "box": R["box"],
            "dia": R["dia"],
            "bbox": frozenset((y, x) for x, y in R["dia"]),
            "bdia": frozenset((y, x) for x, y in R["box"]),
        }[tag]
        if tag in ("box", "bbox"):
            return frozenset(z for z in Z if all(w in inner for w in Z if (z, w) in rel))
        return frozenset(z for z in Z if any(w in inner for w in Z if (z, w) in rel))
    if tag == "var":
        return val[f[1]]
    raise ValueError(f)
