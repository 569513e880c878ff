"""Command line interface: ``hktlab <command> INPUT [options]``.

INPUT is a path to a JSON document or the name of a bundled fixture.
Exit codes: 0 success, 1 structural validation failure, 2 parse error,
3 insufficient data for a requested check.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from . import fixtures
from .document import DocumentError, InputDocument, emit_document, parse_path
from .exterior import form_add, format_form, monomial_form, sort_sign
from .report import CHECKS, EXIT_PARSE, HARMONIC_TAGS, Report, render, run
from .scalars import ScalarParseError, parse_scalar

__all__ = ["main", "build_parser", "load_input", "parse_class"]


def load_input(source: str) -> InputDocument:
    if os.path.exists(source):
        return parse_path(source)
    if source in fixtures.names():
        return fixtures.load(source)
    raise DocumentError(f"{source!r} is neither a readable file nor a bundled fixture")


def parse_class(text: str) -> tuple[int, dict]:
    """Parse a (p,0)-form like ``1`` (phi^1), ``13`` or ``-2i:3,1:24`` into (degree, form).

    Each comma-separated term is ``[coefficient:]indices`` with 1-based digits.
    """
    form: dict = {}
    degree = None
    for term in text.split(","):
        coeff_txt, _, idx = term.rpartition(":")
        if not idx.isdigit() or "0" in idx:
            raise DocumentError(f"class term {term!r}: indices must be digits 1-9")
        try:
            coeff = parse_scalar(coeff_txt) if coeff_txt else parse_scalar("1")
        except ScalarParseError as exc:
            raise DocumentError(f"class term {term!r}: {exc}") from exc
        sign, mono = sort_sign([int(ch) - 1 for ch in idx])
        if mono is None:
            raise DocumentError(f"class term {term!r} repeats an index")
        if degree is None:
            degree = len(mono)
        elif degree != len(mono):
            raise DocumentError(f"class {text!r} mixes degrees")
        form = form_add(form, monomial_form(mono, coeff * sign))
    return degree or 0, form


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hktlab", description="Exact quaternionic Dolbeault calculator.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="path to a JSON document or a bundled fixture name")
        p.add_argument("--format", choices=("text", "machine"), default="text")
        p.add_argument("--timing", action="store_true", help="include wall-clock timings")
        return p

    add("validate", "structural validation only")
    add("report", "run every analysis").add_argument("--denominator", choices=("full", "pointed"), default="full")
    p = add("cohomology", "cohomology dimensions and representatives")
    p.add_argument("--theory", choices=("del", "del_j", "bc", "aeppli"))
    p.add_argument("--degree", type=int)
    p = add("harmonic", "harmonic forms of one Laplacian")
    p.add_argument("--laplacian", choices=HARMONIC_TAGS + ("bc_full", "aeppli_full"), default="d")
    p.add_argument("--degree", type=int)
    p = add("massey", "triple del-Massey products")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--scan", action="store_true", help="scan all triples of basis classes (default)")
    group.add_argument("--triple", nargs=3, metavar=("A", "B", "C"), help="classes such as 1, 13 or -2i:3")
    p.add_argument("--denominator", choices=("full", "pointed"), default="full")
    p.add_argument("--span", action="store_true", help="also scan sums of two basis classes")
    p.add_argument("--budget", type=int, help="maximum number of triples to examine")
    p = add("check", "a single verdict")
    p.add_argument("check", choices=CHECKS)
    p.add_argument("--theory", choices=("del", "del_j", "bc", "aeppli", "d_lambda"))
    sub_export = sub.add_parser("export", help="re-emit the input document in canonical form")
    sub_export.add_argument("input")
    sub_export.add_argument("--format", choices=("text", "machine"), default="machine")
    sub.add_parser("fixtures", help="list bundled fixtures")
    return parser


def _emit(text: str) -> None:
    sys.stdout.write(text)
    sys.stdout.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "fixtures":
        _emit("\n".join(fixtures.names()) + "\n")
        return 0
    try:
        doc = load_input(args.input)
        options: dict = {"timing": getattr(args, "timing", False)}
        if args.command == "export":
            _emit(emit_document(doc) if args.format == "machine" else _document_text(doc))
            return 0
        for key in ("theory", "degree", "laplacian", "denominator", "check", "span", "budget"):
            if getattr(args, key, None) is not None:
                options[key] = getattr(args, key)
        if args.command == "massey" and args.triple:
            options["triple"] = [parse_class(t) for t in args.triple]
    except DocumentError as exc:
        sys.stderr.write(f"hktlab: parse error: {exc}\n")
        return EXIT_PARSE
    report: Report = run(doc, args.command, options)
    _emit(render(report, args.format))
    if report.status and "error" in report.data:
        sys.stderr.write(f"hktlab: {report.data['error']}\n")
    return report.status


def _document_text(doc: InputDocument) -> str:
    lines = [f"name: {doc.name}", f"mode: {doc.mode}"]
    if doc.description:
        lines.append(f"description: {doc.description}")
    if doc.mode == "lie_algebra":
        lines.append(f"dim: {doc.dim}")
        for i, j, k, c in doc.brackets:
            lines.append(f"[e{i + 1}, e{j + 1}] += {c} e{k + 1}")
    else:
        lines.append(f"n: {doc.n}")
        for a, f in enumerate(doc.partial):
            lines.append(f"del phi{a + 1} = {format_form(f)}")
    if doc.omega is not None:
        lines.append(f"omega = {format_form(doc.omega)}")
    return "\n".join(lines) + "\n"


if __name__ == "__main__":
    raise SystemExit(main())
