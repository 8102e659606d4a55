"""Command line front end.

Subcommands: ``validate``, ``convert``, ``detect``, ``lift``, ``lower``,
``fix``, ``prov-wrap``, ``diff``.  ``-`` means stdin/stdout; the input format
is inferred from content (a file extension only orders the attempts) and can
be forced with ``--from``.  Exit codes: 0 success, 1 domain failure
(transformation errors, replacement conflicts, datasets differ), 2 I/O or
parse failure; ``validate`` reports parse failures as its domain, exit 1.

The ``METASTAR_MAX_DEPTH`` environment variable overrides the quoted-triple
nesting limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .model import Iri, Literal, PrefixMap, Term, Triple
from .parser import ParseError, ParseOptions, parse, parse_nquads_star
from .patterns import (
    NaryShape,
    PatternError,
    apply_subject_replacements,
    detect_meta,
    lift_nary_to_star,
    lower_star_to_nary,
    wrap_provenance,
)
from .serializer import nquads_term, serialize_nquads, serialize_trig
from .store import Dataset, canonicalized, isomorphic
from .vocab import NAMESPACES


class _CliError(Exception):
    def __init__(self, exit_code: int, message: str):
        super().__init__(message)
        self.exit_code = exit_code


def _parse_options() -> ParseOptions:
    opts = ParseOptions()
    env = os.environ.get("METASTAR_MAX_DEPTH")
    if env:
        try:
            opts.max_quote_depth = int(env)
        except ValueError:
            raise _CliError(2, f"METASTAR_MAX_DEPTH must be an integer, got {env!r}")
        if opts.max_quote_depth < 1:
            raise _CliError(2, "METASTAR_MAX_DEPTH must be >= 1")
    return opts


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise _CliError(2, f"{path}: {exc.strerror or exc}")


def _load(path: str, forced: str, parse_error_exit: int = 2) -> tuple[Dataset, PrefixMap, str]:
    """Parse a file or stdin; returns (dataset, prefix map, detected format)."""
    text = _read_input(path)
    opts = _parse_options()
    name = "<stdin>" if path == "-" else path
    if forced == "trig":
        attempts = ["trig"]
    elif forced == "nquads":
        attempts = ["nquads"]
    elif path.endswith((".nq", ".nt")):
        attempts = ["nquads", "trig"]
    else:
        attempts = ["trig", "nquads"]
    first_error: Optional[ParseError] = None
    for fmt in attempts:
        try:
            if fmt == "trig":
                ds, pm = parse(text, opts)
                return ds, pm, "trig"
            ds = parse_nquads_star(text, opts)
            return ds, PrefixMap(NAMESPACES), "nquads"
        except ParseError as exc:
            if first_error is None:
                first_error = exc
    assert first_error is not None
    raise _CliError(
        parse_error_exit,
        f"{name}:{first_error.line}:{first_error.column}: {first_error.message}",
    )


def _write_output(ds: Dataset, pm: PrefixMap, fmt: str, canonical: bool) -> None:
    if fmt == "nquads":
        sys.stdout.write(serialize_nquads(ds, canonical=canonical))
    else:
        sys.stdout.write(serialize_trig(ds, pm, canonical=canonical))


def _term_from_text(text: str, pm: PrefixMap) -> Term:
    """Parse one term given in TriG syntax (IRI, prefixed name, or literal)
    against the input's prefix map."""
    doc = []
    for label, ns in pm.namespaces():
        doc.append(f"@prefix {label}: <{ns.value}> .")
    doc.append(f"<tag:metastar,cli:s> <tag:metastar,cli:p> {text} .")
    try:
        ds, _ = parse("\n".join(doc), _parse_options())
    except ParseError as exc:
        raise _CliError(2, f"cannot parse term {text!r}: {exc.message}")
    return next(iter(ds)).triple.object


def _resource_from_text(text: str, pm: PrefixMap) -> Iri:
    term = _term_from_text(text, pm)
    if not isinstance(term, Iri):
        raise _CliError(2, f"{text!r} must be an IRI")
    return term


# ---------------------------------------------------------------------------
# commands


def _cmd_validate(args) -> int:
    try:
        ds, _, _ = _load(args.input, args.from_format, parse_error_exit=1)
    except _CliError as exc:
        print(exc, file=sys.stderr)
        return exc.exit_code
    print(f"{len(ds)} quads, {len(ds.graph_names())} named graphs")
    return 0


def _cmd_convert(args) -> int:
    ds, pm, _ = _load(args.input, args.from_format)
    _write_output(ds, pm, args.to, args.canonical)
    return 0


def _cmd_detect(args) -> int:
    ds, _, _ = _load(args.input, args.from_format)
    report = detect_meta(ds)
    if args.json:
        print(json.dumps(report.to_json()))
    else:
        print(f"subject-quoted quads: {report.subject_quoted_count}")
        print(f"object-quoted quads:  {report.object_quoted_count}")
        print(f"named graphs:         {report.named_graph_count}")
        described = ", ".join(nquads_term(g) for g in report.graphs_with_meta) or "none"
        print(f"described graphs:     {described}")
        print(f"meta-level present:   {'yes' if report.has_meta_level else 'no'}")
    return 0


def _load_shape(path: str, pm: PrefixMap) -> NaryShape:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise _CliError(2, f"{path}: {exc.strerror or exc}")
    except json.JSONDecodeError as exc:
        raise _CliError(2, f"{path}: invalid JSON: {exc}")
    try:
        return NaryShape.from_json(data, pm)
    except (KeyError, ValueError) as exc:
        raise _CliError(2, f"{path}: invalid shape: {exc}")


def _cmd_lift(args) -> int:
    ds, pm, _ = _load(args.input, args.from_format)
    shape = _load_shape(args.shape, pm)
    out = lift_nary_to_star(ds, shape)
    _write_output(out, pm, args.to, args.canonical)
    return 0


def _cmd_lower(args) -> int:
    ds, pm, _ = _load(args.input, args.from_format)
    shape = _load_shape(args.shape, pm)
    out = lower_star_to_nary(ds, shape)
    _write_output(out, pm, args.to, args.canonical)
    return 0


def _cmd_fix(args) -> int:
    ds, pm, _ = _load(args.input, args.from_format)
    out, report = apply_subject_replacements(ds)
    if report.conflicts:
        for t in report.conflicts:
            print(f"conflicting replacement targets for {nquads_term(t)}", file=sys.stderr)
        return 1
    _write_output(out, pm, args.to, args.canonical)
    return 0


def _cmd_prov_wrap(args) -> int:
    ds, pm, _ = _load(args.input, args.from_format)
    graph = _resource_from_text(args.graph, pm)
    subjects = [_resource_from_text(s, pm) for s in args.subject]
    prov = []
    for pair in args.prov or []:
        pred_text, sep, obj_text = pair.partition("=")
        if not sep:
            raise _CliError(2, f"--prov takes predicate=object pairs, got {pair!r}")
        pred = _resource_from_text(pred_text, pm)
        obj = _term_from_text(obj_text, pm)
        prov.append((pred, obj))
    out, _report = wrap_provenance(ds, subjects, graph, prov)
    _write_output(out, pm, args.to, args.canonical)
    return 0


def _cmd_diff(args) -> int:
    ds_a, _, _ = _load(args.a, args.from_format)
    ds_b, _, _ = _load(args.b, args.from_format)
    if isomorphic(ds_a, ds_b):
        return 0
    lines_a = serialize_nquads(canonicalized(ds_a), canonical=True).splitlines()
    lines_b = serialize_nquads(canonicalized(ds_b), canonical=True).splitlines()
    only_a = [ln for ln in lines_a if ln not in set(lines_b)]
    only_b = [ln for ln in lines_b if ln not in set(lines_a)]
    if only_a:
        print(f"- {only_a[0]}")
    elif only_b:
        print(f"+ {only_b[0]}")
    else:
        # isomorphism can fail on blank node structure even when the
        # canonical line sets coincide line-by-line; report the counts
        print(f"- datasets differ ({len(ds_a)} vs {len(ds_b)} quads)")
    return 1


def _add_io_arguments(sub: argparse.ArgumentParser, output: bool = True) -> None:
    sub.add_argument("input", help="input file, or - for stdin")
    sub.add_argument(
        "--from",
        dest="from_format",
        choices=["auto", "trig", "nquads"],
        default="auto",
        help="input format (default: inferred from content)",
    )
    if output:
        sub.add_argument("--to", choices=["trig", "nquads"], default="trig", help="output format")
        sub.add_argument("--canonical", action="store_true", help="canonical, byte-stable output")


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="metastar",
        description="Parse, transform, and compare RDF-star datasets with named graphs.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse the input and print a quad count summary")
    _add_io_arguments(p, output=False)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("convert", help="convert between TriG-star and N-Quads-star")
    _add_io_arguments(p)
    p.set_defaults(func=_cmd_convert)

    p = sub.add_parser("detect", help="report the meta-level a dataset uses")
    _add_io_arguments(p, output=False)
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("lift", help="fold n-ary records into quoted-triple annotations")
    _add_io_arguments(p)
    p.add_argument("--shape", required=True, help="shape description (JSON)")
    p.set_defaults(func=_cmd_lift)

    p = sub.add_parser("lower", help="expand quoted-triple annotations into n-ary records")
    _add_io_arguments(p)
    p.add_argument("--shape", required=True, help="shape description (JSON)")
    p.set_defaults(func=_cmd_lower)

    p = sub.add_parser("fix", help="apply replaceSubjectBy directives")
    _add_io_arguments(p)
    p.set_defaults(func=_cmd_fix)

    p = sub.add_parser("prov-wrap", help="move statements into a named graph with provenance")
    _add_io_arguments(p)
    p.add_argument("--graph", required=True, help="target graph IRI")
    p.add_argument("--subject", action="append", required=True, help="subject to move (repeatable)")
    p.add_argument("--prov", action="append", help="provenance pair predicate=object (repeatable)")
    p.set_defaults(func=_cmd_prov_wrap)

    p = sub.add_parser("diff", help="compare two datasets up to isomorphism")
    p.add_argument("a", help="first input file, or - for stdin")
    p.add_argument("b", help="second input file")
    p.add_argument(
        "--from",
        dest="from_format",
        choices=["auto", "trig", "nquads"],
        default="auto",
    )
    p.set_defaults(func=_cmd_diff)
    return ap


def main(argv: Optional[list[str]] = None) -> int:
    ap = build_arg_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(exc, file=sys.stderr)
        return exc.exit_code
    except PatternError as exc:
        print(exc, file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 2


if __name__ == "__main__":
    sys.exit(main())
