"""Command-line front end: check, analyze, perform, render.

Exit codes: 0 success, 1 score errors, 2 I/O or usage errors,
3 enumeration cap exceeded.  All output is deterministic; the enumeration
cap honors the ``QMUS_ENUM_CAP`` environment variable.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import perform as perform_mod
from .perform import EnumerationTooLargeError, render_csv, render_midi, \
    render_text, sample_performance, score_distribution
from .score import ScoreAST, parse

EXIT_OK = 0
EXIT_SCORE_ERRORS = 1
EXIT_IO = 2
EXIT_ENUM_CAP = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmus",
        description="Quantum score toolkit: validate scores, compute "
                    "listening distributions, sample performances, and "
                    "render MIDI/CSV/text.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="validate a score file")
    check.add_argument("input", help="path to a .qms score")

    analyze = sub.add_parser("analyze",
                             help="exact melody distribution as CSV")
    analyze.add_argument("input")
    analyze.add_argument("--out", metavar="PATH")

    performer = sub.add_parser("perform",
                               help="sample classical performances")
    performer.add_argument("input")
    performer.add_argument("--seed", type=int, default=0, metavar="UINT64")
    performer.add_argument("--count", type=int, default=1, metavar="UINT")
    performer.add_argument("--out", metavar="PATH")

    render = sub.add_parser("render", help="render a score")
    render.add_argument("input")
    render.add_argument("--format", required=True,
                        choices=("csv", "midi", "text"))
    render.add_argument("--seed", type=int, default=0, metavar="UINT64")
    render.add_argument("--count", type=int, default=1, metavar="UINT")
    render.add_argument("--out", metavar="PATH")
    return parser


def _enum_cap() -> int:
    raw = os.environ.get("QMUS_ENUM_CAP")
    if raw is None:
        return perform_mod.ENUM_CAP
    try:
        return int(raw)
    except ValueError:
        print(f"qmus: ignoring invalid QMUS_ENUM_CAP={raw!r}",
              file=sys.stderr)
        return perform_mod.ENUM_CAP


def _load_score(path: str) -> ScoreAST | int:
    try:
        source = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"qmus: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_IO
    result = parse(source)
    if isinstance(result, list):
        for error in result:
            print(f"{error.line}:{error.col}: {error.message}",
                  file=sys.stderr)
        return EXIT_SCORE_ERRORS
    return result


def _emit_text(text: str, out: str | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(out).write_text(text, encoding="utf-8")
    except OSError as exc:
        print(f"qmus: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _emit_bytes(data: bytes, out: str | None) -> int:
    if out is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return EXIT_OK
    try:
        Path(out).write_bytes(data)
    except OSError as exc:
        print(f"qmus: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _performance_log(samples) -> str:
    lines = [
        f"{s.index} {'-'.join(s.melody)} {format(s.probability, '.12g')}"
        for s in samples
    ]
    return "\n".join(lines) + "\n"


def run(argv: list[str]) -> int:
    """Execute one command; returns the process exit code."""
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_IO

    if getattr(args, "count", 1) < 1:
        print("qmus: --count must be at least 1", file=sys.stderr)
        return EXIT_IO

    loaded = _load_score(args.input)
    if isinstance(loaded, int):
        return loaded
    ast = loaded

    if args.command == "check":
        print("OK")
        return EXIT_OK

    if args.command == "analyze":
        try:
            dist = score_distribution(ast, _enum_cap())
        except EnumerationTooLargeError as exc:
            print(f"qmus: {exc}", file=sys.stderr)
            return EXIT_ENUM_CAP
        return _emit_text(render_csv(dist), args.out)

    if args.command == "perform":
        samples = sample_performance(ast, args.seed, args.count)
        return _emit_text(_performance_log(samples), args.out)

    if args.command == "render":
        if args.format == "text":
            return _emit_text(render_text(ast), args.out)
        if args.format == "csv":
            try:
                dist = score_distribution(ast, _enum_cap())
            except EnumerationTooLargeError as exc:
                print(f"qmus: {exc}", file=sys.stderr)
                return EXIT_ENUM_CAP
            return _emit_text(render_csv(dist), args.out)
        samples = sample_performance(ast, args.seed, args.count)
        return _emit_bytes(render_midi(samples, ast.tempo_bpm or 120),
                           args.out)

    raise AssertionError(f"unhandled command {args.command!r}")


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
