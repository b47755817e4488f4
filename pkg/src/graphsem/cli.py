"""Command-line front end.

Exit codes: 0 pass/true, 1 fail/false (with a witness), 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import sys
import warnings

from . import algebra as alg
from . import examples as ex
from .correspondence import AxiomId, check_correspondence, condition_of
from .fca import ConceptCapExceeded
from .frames import ComplexAlgebra, FrameError, NotAConcept, check_e_compat
from .io import FormatError, format_set, format_set_machine, load_frame, load_model, parse_algebra, save_frame
from .logic import ParseError, parse_formula, parse_sequent
from .semantics import (
    UnboundProposition,
    UnstableValuation,
    ValuationCapExceeded,
    evaluate,
    frame_valid,
    sequent_counterexample,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Out:
    """Human-readable or ``key=value`` output."""

    def __init__(self, machine: bool, stream=None):
        self.machine = machine
        self.stream = stream or sys.stdout

    def kv(self, key: str, value, human: str | None = None) -> None:
        if self.machine:
            print(f"{key}={value}", file=self.stream)
        else:
            print(human if human is not None else f"{key}: {value}", file=self.stream)

    def set(self, key: str, S) -> None:
        if self.machine:
            print(f"{key}={format_set_machine(S)}", file=self.stream)
        else:
            print(f"{key}: {format_set(S)}", file=self.stream)

    def text(self, line: str) -> None:
        if not self.machine:
            print(line, file=self.stream)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _check_flag(args) -> bool | None:
    return False if args.no_check else None


def _model(args):
    return load_model(_read(args.file), _check_flag(args), args.reflexive_closure)


# --- commands -----------------------------------------------------------------

def cmd_check(args, out: Out) -> int:
    try:
        frame = load_frame(_read(args.file), check=False, reflexive_closure=args.reflexive_closure)
    except FrameError as e:
        out.kv("reflexive", "false", f"FAIL: {e}")
        return EXIT_FAIL
    out.kv("states", len(frame.universe))
    out.kv("reflexive", "true", "E reflexive: yes")
    report = check_e_compat(frame)
    for v in report.violations:
        out.kv("violation", f"{v.relation}|{v.condition}|{v.state}", f"  {v.relation}: {v.condition} at state {v.state}")
    out.kv("compatible", str(report.ok).lower(), "PASS" if report.ok else f"FAIL ({len(report.violations)} violation(s))")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_lattice(args, out: Out) -> int:
    frame = load_frame(_read(args.file), _check_flag(args), args.reflexive_closure)
    lat = ComplexAlgebra(frame).lattice
    edges = lat.hasse_edges()
    if args.dot:
        print("digraph concepts {")
        print("  rankdir=BT;")
        for i, c in enumerate(lat.concepts):
            label = format_set(c.extent).replace('"', '\\"')
            print(f'  c{i} [label="{label}"];')
        for i, j in edges:
            print(f"  c{i} -> c{j};")
        print("}")
        return EXIT_OK
    out.kv("concepts", len(lat))
    for i, c in enumerate(lat.concepts):
        if out.machine:
            out.kv(f"extent.{i}", format_set_machine(c.extent))
            out.kv(f"intent.{i}", format_set_machine(c.intent))
        else:
            out.text(f"  c{i}: extent {format_set(c.extent)}  intent {format_set(c.intent)}")
    out.kv("hasse", " ".join(f"c{i}<c{j}" for i, j in edges), "hasse: " + " ".join(f"c{i}<c{j}" for i, j in edges))
    return EXIT_OK


def cmd_eval(args, out: Out) -> int:
    model = _model(args)
    c = evaluate(model, parse_formula(args.formula))
    out.set("extent", c.extent)
    out.set("intent", c.intent)
    return EXIT_OK


def cmd_sequent(args, out: Out) -> int:
    model = _model(args)
    seq = parse_sequent(args.sequent)
    w = sequent_counterexample(model, seq)
    if w is None:
        out.kv("true", "true", f"TRUE: {seq}")
        return EXIT_OK
    out.kv("true", "false", f"FALSE: {seq}")
    out.kv("witness", f"{w[0]},{w[1]}", f"  {w[0]} forces the left side, {w[1]} refutes the right side, {w[0]} E {w[1]}")
    return EXIT_FAIL


def cmd_valid(args, out: Out) -> int:
    frame = load_frame(_read(args.file), _check_flag(args), args.reflexive_closure)
    seq = parse_sequent(args.sequent)
    v = frame_valid(frame, seq, args.cap)
    out.kv("valuations", v.checked, f"valuations checked: {v.checked}")
    if v.valid:
        out.kv("valid", "true", f"VALID: {seq}")
        return EXIT_OK
    out.kv("valid", "false", f"NOT VALID: {seq}")
    for p, c in sorted(v.countermodel.items()):
        out.set(f"countermodel.{p}", c.extent)
    if v.witness:
        out.kv("witness", f"{v.witness[0]},{v.witness[1]}", f"  witness: {v.witness[0]} E {v.witness[1]}")
    return EXIT_FAIL


def cmd_correspond(args, out: Out) -> int:
    frame = load_frame(_read(args.file), _check_flag(args), args.reflexive_closure)
    axioms = list(AxiomId) if args.axiom == "all" else [_axiom(args.axiom)]
    ca = ComplexAlgebra(frame, cap=args.concept_cap)
    code = EXIT_OK
    for ax in axioms:
        cond = condition_of(ax, frame)
        try:
            valid = check_correspondence(ax, ca, args.cap).frame_side
        except (ConceptCapExceeded, ValuationCapExceeded) as e:
            valid = None
            reason = str(e)
        agree = None if valid is None else valid == cond
        if agree is False:
            code = EXIT_FAIL
        elif agree is None and code == EXIT_OK:
            code = EXIT_USAGE
        if out.machine:
            out.kv(f"{ax.name}.valid", _tri(valid))
            out.kv(f"{ax.name}.condition", _tri(cond))
            out.kv(f"{ax.name}.agree", _tri(agree))
        else:
            shown = "?" if valid is None else ("yes" if valid else "no")
            verdict = "agree" if agree else ("MISMATCH" if agree is False else f"validity not computed: {reason}")
            out.text(
                f"{ax.name:9s} {ax.value:14s} valid={shown:3s} "
                f"{ax.condition_text:22s} holds={'yes' if cond else 'no':3s} {verdict}"
            )
    return code


def _tri(v: bool | None) -> str:
    return "unknown" if v is None else str(v).lower()


def _axiom(name: str) -> AxiomId:
    try:
        return AxiomId.lookup(name)
    except KeyError as e:
        raise UsageError(e.args[0]) from None


def cmd_algebra(args, out: Out) -> int:
    A = parse_algebra(_read(args.file))
    strict = not args.lenient
    if args.action == "frame":
        frame = alg.build_frame_FA(A, strict=strict)
        sys.stdout.write(save_frame(frame))
        return EXIT_OK
    if args.action == "canonext":
        frame = alg.build_frame_FA(A, strict=strict)
        compat = check_e_compat(frame).ok
        iso = alg.check_algebra_iso(A, strict=strict)
        lemma = alg.check_filtidl_lemma(A)
        out.kv("states", len(frame.universe))
        out.kv("compatible", str(compat).lower())
        out.kv("isomorphic", str(iso).lower())
        out.kv("filter_ideal_lemma", str(lemma).lower())
        return EXIT_OK if compat and iso and lemma else EXIT_FAIL
    if args.sequent is None:
        raise UsageError("algebra validate needs a sequent")
    seq = parse_sequent(args.sequent)
    ok = alg.algebra_validates(A, seq, args.cap)
    out.kv("valid", str(ok).lower(), f"{'VALID' if ok else 'NOT VALID'}: {seq}")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_example(args, out: Out) -> int:
    if args.name == "synonymy":
        sys.stdout.write(ex.synonymy_document())
        return EXIT_OK
    delta = ex.parse_delta_table(args.delta) if args.delta else None
    if args.delta_a == "delta":
        delta_a = delta or [(lo, hi, d) for lo, hi, d, _ in ex.COLOUR_TABLE]
    elif args.delta_a:
        delta_a = ex.parse_delta_table(args.delta_a)
    else:
        delta_a = None
    sys.stdout.write(ex.colour_document(delta, delta_a))
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", default=argparse.SUPPRESS, help="key=value output")
    common.add_argument("--no-check", action="store_true", default=argparse.SUPPRESS, help="skip E-compatibility check on load")
    common.add_argument(
        "--reflexive-closure", action="store_true", default=argparse.SUPPRESS, help="add loops to E on load"
    )

    p = argparse.ArgumentParser(prog="graphsem", description="Graph-based semantics workbench.", parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="reflexivity and E-compatibility")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("lattice", parents=[common], help="concepts and Hasse diagram")
    s.add_argument("file")
    s.add_argument("--dot", action="store_true", help="emit the Hasse diagram in DOT format")
    s.set_defaults(func=cmd_lattice)

    s = sub.add_parser("eval", parents=[common], help="extent and intent of a formula")
    s.add_argument("file")
    s.add_argument("formula")
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("sequent", parents=[common], help="truth of a sequent in the model")
    s.add_argument("file")
    s.add_argument("sequent")
    s.set_defaults(func=cmd_sequent)

    s = sub.add_parser("valid", parents=[common], help="validity of a sequent on the frame")
    s.add_argument("file")
    s.add_argument("sequent")
    s.add_argument("--cap", type=int, default=10**6, help="maximum number of valuations")
    s.set_defaults(func=cmd_valid)

    s = sub.add_parser("correspond", parents=[common], help="axiom validity against its frame condition")
    s.add_argument("file")
    s.add_argument("axiom", help=f"one of {', '.join(a.name for a in AxiomId)}, or 'all'")
    s.add_argument("--cap", type=int, default=10**6, help="maximum number of valuations")
    s.add_argument("--concept-cap", type=int, default=4096, help="maximum number of concepts")
    s.set_defaults(func=cmd_correspond)

    s = sub.add_parser("algebra", parents=[common], help="finite modal algebra tools")
    s.add_argument("action", choices=["frame", "canonext", "validate"])
    s.add_argument("file")
    s.add_argument("sequent", nargs="?")
    s.add_argument("--lenient", action="store_true", help="allow empty filter or ideal parts in X_L")
    s.add_argument("--cap", type=int, default=10**6)
    s.set_defaults(func=cmd_algebra)

    s = sub.add_parser("example", parents=[common], help="print a built-in frame document")
    s.add_argument("name", choices=["synonymy", "colour"])
    s.add_argument("--delta", help="perceptual thresholds, e.g. 370-519:3,520-550:4")
    s.add_argument("--delta-a", help="agent thresholds in the same format, or 'delta'")
    s.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    for flag in ("machine", "no_check", "reflexive_closure"):
        if not hasattr(args, flag):
            setattr(args, flag, False)
    out = Out(args.machine)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", UnstableValuation)
            code = args.func(args, out)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        return code
    except (
        UsageError,
        FormatError,
        ParseError,
        FrameError,
        UnboundProposition,
        ValuationCapExceeded,
        ConceptCapExceeded,
        NotAConcept,
        alg.LatticeError,
        alg.NotNormal,
        ValueError,
    ) as e:
        msg = e.args[0] if isinstance(e, (UnboundProposition, KeyError)) and e.args else str(e)
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
