"""Command-line interface.

Exit codes: 0 on success (affirmative verdicts included), 1 for a
negative verdict (not primitive, no blocking witness), 2 for usage,
parse, or input errors.  All delimited output is deterministic byte for
byte; PRIMSTAB_THREADS caps the report workers without changing output.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import report as rendering
from .h3 import H3Point
from .reps import load_representation, ps_report
from .whitehead import (
    blocking_witness,
    connectivity_report,
    enumerate_primitive_classes,
    graph_to_adjacency,
    graph_to_dot,
    minimize,
    whitehead_graph,
    whitehead_separability_test,
)
from .words import letter_to_ascii, parse_cyclic_word

__all__ = ["main", "build_parser"]


def _base_point(text: str) -> H3Point:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("base point must be re,im,t")
    re, im, t = (float(p) for p in parts)
    return H3Point(complex(re, im), t)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primstab",
        description="Primitive classes in free groups and stability "
        "diagnostics for PSL(2,C) representations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("primitive", help="decide primitivity of a word's class")
    p.add_argument("word", help="word in letters a..z / A..Z")
    p.add_argument("--rank", type=int, default=2)
    p.set_defaults(func=cmd_primitive)

    p = sub.add_parser("enumerate", help="list primitive classes up to a length")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--max-length", type=int, default=8)
    p.add_argument("--no-invert-dedup", action="store_true",
                   help="keep a class and its inverse as separate rows")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("whgraph", help="emit the Whitehead graph of a word")
    p.add_argument("word")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_whgraph)

    p = sub.add_parser("blocking", help="bounded search for a blocking power")
    p.add_argument("word")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--l-max", type=int, default=10)
    p.set_defaults(func=cmd_blocking)

    p = sub.add_parser("psreport", help="stability metrics for all primitive classes")
    p.add_argument("representation",
                   help="JSON file, or builtin:schottky / builtin:sanov / builtin:ptorus")
    p.add_argument("--max-length", type=int, default=8)
    p.add_argument("--reps", type=int, default=None,
                   help="repetitions of each class (default: auto)")
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--base-point", type=_base_point, default=H3Point(0.0, 1.0),
                   metavar="RE,IM,T")
    p.add_argument("--tol-parabolic", type=float, default=1e-9)
    p.add_argument("--no-invert-dedup", action="store_true")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.add_argument("--figures", metavar="DIR",
                   help="also render figures from the computed table into DIR")
    p.set_defaults(func=cmd_psreport)

    p = sub.add_parser("examples", help="write a builtin representation as JSON")
    p.add_argument("name", choices=("schottky", "sanov", "ptorus"))
    p.add_argument("--s", type=float, default=None,
                   help="translation length for schottky (default 2*ln 4)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_examples)

    return parser


def _emit(text: str, out: "str | None") -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _fail(message: str) -> int:
    print(f"primstab: error: {message}", file=sys.stderr)
    return 2


def cmd_primitive(args) -> int:
    try:
        c = parse_cyclic_word(args.word, args.rank)
    except ValueError as exc:
        return _fail(str(exc))
    graph = whitehead_graph(c)
    conn = connectivity_report(graph)
    sep = whitehead_separability_test(c)
    verdict = minimize(c)
    cuts = ",".join(letter_to_ascii(v) for v in conn.cut_vertices) or "none"
    lines = [
        f"input: {args.word}",
        f"cyclic form: {c} (length {len(c)})",
        f"whitehead graph: connected={'yes' if conn.is_connected else 'no'}"
        f" cut-vertices={cuts}",
        f"separability test: {sep.value}",
    ]
    if verdict.trace:
        lines.append("minimize trace:")
        for phi, image in verdict.trace:
            lines.append(f"  {phi} -> {image} [length {len(image)}]")
    else:
        lines.append("minimize trace: already minimal")
    lines.append(f"minimal length: {verdict.minimal_length}")
    lines.append(
        f"verdict: {'primitive' if verdict.is_primitive else 'not primitive'}"
    )
    print("\n".join(lines))
    return 0 if verdict.is_primitive else 1


def cmd_enumerate(args) -> int:
    if args.max_length < 1 or args.rank < 1:
        return _fail("rank and max length must be positive")
    classes = enumerate_primitive_classes(
        args.rank, args.max_length, include_inversion=not args.no_invert_dedup
    )
    if args.format == "csv":
        text = rendering.enumeration_to_csv(classes)
    else:
        text = rendering.dumps_json(rendering.enumeration_to_json(classes))
    _emit(text, args.out)
    return 0


def cmd_whgraph(args) -> int:
    try:
        c = parse_cyclic_word(args.word, args.rank)
    except ValueError as exc:
        return _fail(str(exc))
    graph = whitehead_graph(c)
    if args.format == "dot":
        text = graph_to_dot(graph)
    else:
        data = {"word": str(c), **graph_to_adjacency(graph)}
        text = rendering.dumps_json(data)
    _emit(text, args.out)
    return 0


def cmd_blocking(args) -> int:
    try:
        c = parse_cyclic_word(args.word, args.rank)
    except ValueError as exc:
        return _fail(str(exc))
    if args.n_max < 1 or args.l_max < 1:
        return _fail("bounds must be positive")
    result = blocking_witness(c, n_max=args.n_max, l_max=args.l_max)
    lines = [f"word: {c}", f"evidence: {result.evidence_label}"]
    if result.bound_limited:
        lines.append(
            f"witness: n = 1, but the word is longer than l-max={result.l_max}"
            " so the search was vacuous (bound-limited)"
        )
    elif result.witness_n is not None:
        lines.append(
            f"witness: n = {result.witness_n}; no occurrence in any of"
            f" {result.classes_checked} primitive classes"
        )
    else:
        lines.append(
            f"witness: none up to n = {result.n_max}; inconclusive at these bounds"
            f" ({result.classes_checked} primitive classes checked)"
        )
    print("\n".join(lines))
    return 0 if result.witness_n is not None else 1


def cmd_psreport(args) -> int:
    try:
        rho = load_representation(args.representation)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        return _fail(str(exc))
    if args.max_length < 1:
        return _fail("max length must be positive")
    try:
        result = ps_report(
            rho,
            args.max_length,
            repetitions=args.reps,
            window=args.window,
            base=args.base_point,
            include_inversion=not args.no_invert_dedup,
            tol_parabolic=args.tol_parabolic,
        )
    except ValueError as exc:
        return _fail(str(exc))
    if args.format == "csv":
        text = rendering.report_to_csv(result)
    else:
        text = rendering.dumps_json(rendering.report_to_json(result))
    _emit(text, args.out)
    if args.figures:
        for path in rendering.render_figures(result, args.figures):
            print(f"wrote {path}", file=sys.stderr)
    return 0


def cmd_examples(args) -> int:
    from .reps import make_schottky_pair, make_sanov, make_punctured_torus, rep_to_json

    if args.s is not None and args.name != "schottky":
        return _fail("--s only applies to schottky")
    try:
        if args.name == "schottky":
            rho = make_schottky_pair() if args.s is None else make_schottky_pair(args.s)
        elif args.name == "sanov":
            rho = make_sanov()
        else:
            rho = make_punctured_torus()
    except ValueError as exc:
        return _fail(str(exc))
    _emit(rendering.dumps_json(rep_to_json(rho)), args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
