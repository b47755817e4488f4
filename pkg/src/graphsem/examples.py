"""Built-in example frames: lexical synonymy and colour perception."""
from __future__ import annotations

import re

import numpy as np

from .frames import GraphFrame
from .io import save_frame
from .relcore import Rel, StateSet, Universe

SYNONYMY_STATES = ("fries", "chips", "crisps")
SYNONYMY_E = [("chips", "fries"), ("chips", "crisps")]
SYNONYMY_R = [("fries", "chips"), ("chips", "fries"), ("chips", "crisps")]


def synonymy_frame(check: bool = False) -> GraphFrame:
    """Three words; chips is confusable with both others, and the agent's
    relation also links fries back to chips. Loops are implied."""
    return GraphFrame.from_edges(
        SYNONYMY_STATES,
        SYNONYMY_E,
        SYNONYMY_R + [(s, s) for s in SYNONYMY_STATES],
        SYNONYMY_R + [(s, s) for s in SYNONYMY_STATES],
        reflexive_closure=True,
        check=check,
    )


def synonymy_document() -> str:
    frame = synonymy_frame()
    val = {"p": StateSet.from_labels(frame.universe, ["fries", "crisps"])}
    return save_frame(
        frame,
        val,
        comments=[
            "lexical synonymy: chips is indiscernible from fries and from crisps",
            "Rbox = Rdia is the agent's (dashed) relation; the full check fails at fries",
        ],
    )


# Discrimination thresholds in nm per wavelength band: (lo, hi, delta, delta_A).
COLOUR_TABLE = [(370, 519, 3, 7), (520, 550, 4, 8), (551, 570, 3, 7), (571, 780, 2, 6)]
COLOUR_RANGE = (370, 780)
COLOUR_TERMS = {"green": (520, 560), "yellow": (560, 590), "orange": (590, 635)}


def parse_delta_table(spec: str) -> list[tuple[int, int, int]]:
    """``"370-519:3,520-550:4"`` -> [(370, 519, 3), (520, 550, 4)]."""
    out = []
    for part in spec.split(","):
        m = re.fullmatch(r"\s*(\d+)-(\d+):(\d+)\s*", part)
        if not m:
            raise ValueError(f"bad band {part!r}; expected lo-hi:delta")
        out.append((int(m.group(1)), int(m.group(2)), int(m.group(3))))
    return out


def _per_state(Z: Universe, table: list[tuple[int, int, int]]) -> np.ndarray:
    vals = np.array([int(x) for x in Z.labels])
    d = np.full(len(vals), -1)
    for lo, hi, delta in table:
        d[(vals >= lo) & (vals <= hi)] = delta
    if (d < 0).any():
        raise ValueError(f"no threshold for wavelength {vals[np.argmax(d < 0)]}")
    return d


def threshold_relation(Z: Universe, table: list[tuple[int, int, int]]) -> Rel:
    """x T y iff |x - y| < delta(x)."""
    vals = np.array([int(x) for x in Z.labels])
    d = _per_state(Z, table)
    return Rel(Z, Z, np.abs(vals[:, None] - vals[None, :]) < d[:, None])


def colour_frame(
    delta: list[tuple[int, int, int]] | None = None,
    delta_a: list[tuple[int, int, int]] | None = None,
    check: bool = False,
) -> GraphFrame:
    """Wavelengths 370..780; E uses the perceptual threshold delta, both modal
    relations use the agent's threshold delta_A."""
    Z = Universe.range(*COLOUR_RANGE)
    delta = delta or [(lo, hi, d) for lo, hi, d, _ in COLOUR_TABLE]
    delta_a = delta_a or [(lo, hi, da) for lo, hi, _, da in COLOUR_TABLE]
    E = threshold_relation(Z, delta)
    R = threshold_relation(Z, delta_a)
    return GraphFrame(Z, E, R, R, check=check)


def colour_valuation(frame: GraphFrame) -> dict[str, StateSet]:
    Z = frame.universe
    return {
        name: StateSet.from_labels(Z, [str(i) for i in range(lo, hi + 1)])
        for name, (lo, hi) in COLOUR_TERMS.items()
    }


def colour_document(delta=None, delta_a=None) -> str:
    frame = colour_frame(delta, delta_a)
    return save_frame(
        frame,
        colour_valuation(frame),
        comments=[
            "colour perception: states are wavelengths in nm",
            "the visible spectrum is usually taken to start at 380; the threshold",
            "table starts at 370, so the universe here is 370..780",
            "x E y iff |x-y| < delta(x); Rbox = Rdia: |x-y| < delta_A(x)",
            "colour terms are raw intervals; loading closes them to concepts",
        ],
    )
