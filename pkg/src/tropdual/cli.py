"""Command-line entry point: ``tropdual mutate|verify|scan``.

Exit codes: 0 success, 1 an identity failed, 2 unreadable input or bad flags,
3 matrix not skew-symmetrizable, 4 invalid mutation word, 5 sign-coherence
violated.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .errors import InvalidWord, MixedSigns, NotSkewSymmetrizable, NotUnimodular
from .matrix import ExchangeMatrix
from .pattern import parse_word, walk, words_up_to
from .scan import SCAN_CHECKS, ConfigError, ScanConfig, run_scan
from .verdict import FAIL, VIOLATED
from .verify import parse_checks, run_checks

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_NOT_SKEW = 3
EXIT_BAD_WORD = 4
EXIT_MIXED_SIGNS = 5

SHOW_FIELDS = ("b", "c", "g", "f")


class UsageError(Exception):
    pass


def load_matrix(path: str) -> ExchangeMatrix:
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read matrix file {path}: {exc}") from None
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: expected a JSON object with 'entries'")
    try:
        return ExchangeMatrix.from_json(obj)
    except NotSkewSymmetrizable:
        raise
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_show(text: str) -> tuple[str, ...]:
    fields = tuple(t.strip() for t in text.split(",") if t.strip())
    bad = [f for f in fields if f not in SHOW_FIELDS]
    if bad:
        raise UsageError(f"unknown --show fields {bad}; choose from {list(SHOW_FIELDS)}")
    return fields


def cmd_mutate(args) -> int:
    b0 = load_matrix(args.matrix)
    word = parse_word(args.word or "", b0.n)
    show = _parse_show(args.show)
    point = walk(b0, word, track_f="f" in show)
    out = {"word": list(word)}
    if "b" in show:
        out["b"] = point.b_t.to_json()
    if "c" in show:
        out["c"] = point.c.to_json()
    if "g" in show:
        out["g"] = point.g.to_json()
    if "f" in show:
        out["f"] = [fj.to_json() for fj in point.f]
    _emit(out, args.out)
    return EXIT_OK


def _status_code(status: str) -> int:
    if status == FAIL:
        return EXIT_FAIL
    if status == VIOLATED:
        return EXIT_MIXED_SIGNS
    return EXIT_OK


def cmd_verify(args) -> int:
    b0 = load_matrix(args.matrix)
    try:
        checks = parse_checks(args.checks)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.word is not None:
        words = [parse_word(args.word, b0.n)]
    else:
        words = list(words_up_to(b0.n, args.depth))
    report = run_checks(b0, words, checks)
    out = {"matrix": b0.to_json(), "depth": args.depth, "checks": list(checks), "words": len(words)}
    out.update(report.to_json())
    _emit(out, args.out)
    return _status_code(report.status)


def cmd_scan(args) -> int:
    try:
        checks = parse_checks(args.checks) if args.checks else SCAN_CHECKS
        cfg = ScanConfig(
            rank=args.rank,
            max_entry=args.max_entry,
            samples=args.samples,
            max_depth=args.depth,
            strategy=args.strategy,
            seed=args.seed,
            words=args.words,
            min_rank=args.min_rank,
            budget=args.budget,
            checks=checks,
        )
    except (ConfigError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    report = run_scan(cfg, jobs=args.jobs)
    _emit(report, args.out)
    return _status_code(report["summary"]["status"])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropdual",
        description="C-matrices, G-matrices and F-polynomials of cluster seed patterns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mutate", help="print the tropical data at one vertex")
    p.add_argument("-m", "--matrix", required=True, help="exchange matrix JSON file")
    p.add_argument("-w", "--word", default="", help="comma-separated 1-based directions")
    p.add_argument("--show", default="b,c,g,f", help="fields among b,c,g,f (default: all)")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("verify", help="run checks over all words up to a depth")
    p.add_argument("-m", "--matrix", required=True)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("-w", "--word", default=None, help="check this single word instead")
    p.add_argument("--checks", default="all", help="comma-separated check names, or 'all'")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="seeded sweep over random skew-symmetrizable matrices")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--min-rank", type=int, default=None, help="sample ranks in [min-rank, rank]")
    p.add_argument("--max-entry", type=int, default=2)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--depth", type=int, default=4, help="maximum word length")
    p.add_argument("--strategy", choices=("random", "exhaustive"), default="random")
    p.add_argument("--words", type=int, default=200, help="random words per sample")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=100_000, help="max word-checks per sample")
    p.add_argument("--checks", default=None, help=f"default: {','.join(SCAN_CHECKS)}")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tropdual: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotSkewSymmetrizable as exc:
        print(f"tropdual: not skew-symmetrizable: {exc}", file=sys.stderr)
        return EXIT_NOT_SKEW
    except InvalidWord as exc:
        print(f"tropdual: invalid word: {exc}", file=sys.stderr)
        return EXIT_BAD_WORD
    except MixedSigns as exc:
        print(f"tropdual: sign-coherence violated: {exc}", file=sys.stderr)
        _emit({"error": "mixed-signs", "witness": exc.witness()}, None)
        return EXIT_MIXED_SIGNS
    except NotUnimodular as exc:
        print(f"tropdual: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
