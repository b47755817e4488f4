"""Plain-text codecs for frames, models and modal algebras.

Frame documents are line oriented::

    # comment
    options: no-check reflexive-closure
    states: 370..780            (or a list of labels)
    E: a>b b>c
      c>a                       (indented lines continue the previous section)
    Rbox: ...
    Rdia: ...
    val p: a b 520..560

Algebra documents::

    elements: bot a b top
    leq: bot<=a bot<=b a<=top b<=top
    box: a->a b->top            (unlisted elements map to themselves)
    dia: ...
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .algebra import FiniteLattice, ModalAlgebra
from .fca import Concept
from .frames import GraphFrame
from .relcore import Rel, StateSet, Universe
from .semantics import Model

KNOWN_OPTIONS = {"no-check", "reflexive-closure"}
_HEADER = re.compile(r"^([A-Za-z][\w ]*?)\s*:(.*)$")
_RANGE = re.compile(r"^(-?\d+)\.\.(-?\d+)$")


class FormatError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class FrameDocument:
    states: list[str]
    E: list[tuple[str, str]] = field(default_factory=list)
    Rbox: list[tuple[str, str]] = field(default_factory=list)
    Rdia: list[tuple[str, str]] = field(default_factory=list)
    valuations: dict[str, list[str]] = field(default_factory=dict)
    options: set[str] = field(default_factory=set)
    comments: list[str] = field(default_factory=list)


def _sections(text: str) -> list[tuple[str, str, int]]:
    """(key, body, line number) with continuation lines folded in."""
    out: list[list] = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line[0].isspace():
            if not out:
                raise FormatError("continuation line before any section", no)
            out[-1][1] += " " + line.strip()
            continue
        m = _HEADER.match(line)
        if not m:
            raise FormatError(f"expected 'section: ...', got {line.strip()!r}", no)
        out.append([m.group(1).strip(), m.group(2).strip(), no])
    return [(k, b, n) for k, b, n in out]


def _expand(tokens: list[str], no: int) -> list[str]:
    out = []
    for tok in tokens:
        m = _RANGE.match(tok)
        if m:
            lo, hi = int(m.group(1)), int(m.group(2))
            if hi < lo:
                raise FormatError(f"empty range {tok}", no)
            out.extend(str(i) for i in range(lo, hi + 1))
        else:
            out.append(tok)
    return out


def _edges(body: str, no: int) -> list[tuple[str, str]]:
    out = []
    for tok in body.split():
        a, sep, b = tok.partition(">")
        if not sep or not a or not b:
            raise FormatError(f"bad edge {tok!r}; expected a>b", no)
        out.append((a, b))
    return out


def parse_frame_document(text: str) -> FrameDocument:
    doc = None
    rest = []
    comments = [ln[1:].strip() for ln in text.splitlines() if ln.startswith("#")]
    for key, body, no in _sections(text):
        if key == "states":
            if doc is not None:
                raise FormatError("duplicate states section", no)
            states = _expand(body.split(), no)
            if len(set(states)) != len(states):
                raise FormatError("duplicate state labels", no)
            doc = FrameDocument(states, comments=comments)
        else:
            rest.append((key, body, no))
    if doc is None:
        raise FormatError("missing states section")
    declared = set(doc.states)
    for key, body, no in rest:
        if key == "options":
            opts = set(body.split())
            unknown = opts - KNOWN_OPTIONS
            if unknown:
                raise FormatError(f"unknown option(s) {sorted(unknown)}", no)
            doc.options |= opts
        elif key in ("E", "Rbox", "Rdia"):
            edges = _edges(body, no)
            for a, b in edges:
                for s in (a, b):
                    if s not in declared:
                        raise FormatError(f"undeclared state {s!r} in {key}", no)
            getattr(doc, key).extend(edges)
        elif key.startswith("val "):
            name = key[4:].strip()
            members = _expand(body.split(), no)
            for s in members:
                if s not in declared:
                    raise FormatError(f"undeclared state {s!r} in valuation of {name}", no)
            doc.valuations.setdefault(name, []).extend(members)
        else:
            raise FormatError(f"unknown section {key!r}", no)
    return doc


def frame_from_document(doc: FrameDocument, check: bool | None = None, reflexive_closure: bool = False) -> GraphFrame:
    if check is None:
        check = "no-check" not in doc.options
    closure = reflexive_closure or "reflexive-closure" in doc.options
    return GraphFrame.from_edges(doc.states, doc.E, doc.Rbox, doc.Rdia, reflexive_closure=closure, check=check)


def load_model(text: str, check: bool | None = None, reflexive_closure: bool = False) -> Model:
    doc = parse_frame_document(text)
    frame = frame_from_document(doc, check, reflexive_closure)
    return Model.from_sets(frame, doc.valuations)


def load_frame(text: str, check: bool | None = None, reflexive_closure: bool = False) -> GraphFrame:
    return frame_from_document(parse_frame_document(text), check, reflexive_closure)


# --- writing ----------------------------------------------------------------------

def _numeric_run(labels) -> tuple[int, int] | None:
    try:
        vals = [int(x) for x in labels]
    except ValueError:
        return None
    if [str(v) for v in vals] != list(labels) or len(vals) < 2:
        return None
    if vals != list(range(vals[0], vals[0] + len(vals))):
        return None
    return vals[0], vals[-1]


def _wrap(key: str, tokens: list[str], per_line: int = 12) -> list[str]:
    if not tokens:
        return [f"{key}:"]
    lines = []
    for i in range(0, len(tokens), per_line):
        chunk = " ".join(tokens[i : i + per_line])
        lines.append(f"{key}: {chunk}" if i == 0 else f"  {chunk}")
    return lines


def _compress(universe: Universe, S: StateSet) -> list[str]:
    """Member labels, with consecutive integer runs written as lo..hi."""
    if not universe.is_numeric:
        return list(S.labels())
    out = []
    for lo, hi in runs(S):
        out.append(str(lo) if lo == hi else f"{lo}..{hi}")
    return out


def save_frame(frame: GraphFrame, valuation=None, options=(), comments=()) -> str:
    Z = frame.universe
    lines = [f"# {c}" if c else "#" for c in comments]
    opts = set(options)
    if not frame.check:
        opts.add("no-check")
    if opts:
        lines.append("options: " + " ".join(sorted(opts)))
    run = _numeric_run(Z.labels)
    lines.append(f"states: {run[0]}..{run[1]}" if run else "states: " + " ".join(Z.labels))
    for name in ("E", "Rbox", "Rdia"):
        rel = getattr(frame, name)
        lines.extend(_wrap(name, [f"{a}>{b}" for a, b in rel.label_pairs()]))
    for p, c in (valuation or {}).items():
        ext = c.extent if isinstance(c, Concept) else c
        lines.extend(_wrap(f"val {p}", _compress(Z, ext), per_line=20))
    return "\n".join(lines) + "\n"


def save_model(model: Model, **kw) -> str:
    return save_frame(model.frame, model.valuation, **kw)


# --- set printing -------------------------------------------------------------------

def runs(S: StateSet) -> list[tuple[int, int]]:
    return S.runs()


def format_set(S: StateSet) -> str:
    return S.pretty()


def format_set_machine(S: StateSet) -> str:
    return ",".join(S.labels())


# --- algebras --------------------------------------------------------------------

def parse_algebra(text: str) -> ModalAlgebra:
    elements = None
    leq: list[tuple[str, str]] = []
    maps: dict[str, dict[str, str]] = {"box": {}, "dia": {}}
    for key, body, no in _sections(text):
        if key == "elements":
            elements = body.split()
        elif key == "leq":
            for tok in body.split():
                a, sep, b = tok.partition("<=")
                if not sep or not a or not b:
                    raise FormatError(f"bad order pair {tok!r}; expected a<=b", no)
                leq.append((a, b))
        elif key in maps:
            for tok in body.split():
                a, sep, b = tok.partition("->")
                if not sep or not a or not b:
                    raise FormatError(f"bad mapping {tok!r}; expected a->b", no)
                maps[key][a] = b
        else:
            raise FormatError(f"unknown section {key!r}", no)
    if not elements:
        raise FormatError("missing elements section")
    known = set(elements)
    for a, b in leq + [kv for m in maps.values() for kv in m.items()]:
        for s in (a, b):
            if s not in known:
                raise FormatError(f"undeclared element {s!r}")
    L = FiniteLattice.from_order(elements, leq)
    U = L.carrier
    box = [U.index(maps["box"].get(a, a)) for a in U.labels]
    dia = [U.index(maps["dia"].get(a, a)) for a in U.labels]
    return ModalAlgebra(L, box, dia)


def save_algebra(A: ModalAlgebra) -> str:
    L = A.lattice
    lab = L.labels
    cover = L.leq & ~np.eye(len(L), dtype=bool)
    via = (cover.astype(np.int32) @ cover.astype(np.int32)) > 0
    hasse = cover & ~via
    lines = ["elements: " + " ".join(lab)]
    lines.append("leq: " + " ".join(f"{lab[i]}<={lab[j]}" for i, j in zip(*np.nonzero(hasse))))
    lines.append("box: " + " ".join(f"{lab[a]}->{lab[b]}" for a, b in enumerate(A.box)))
    lines.append("dia: " + " ".join(f"{lab[a]}->{lab[b]}" for a, b in enumerate(A.dia)))
    return "\n".join(lines) + "\n"
