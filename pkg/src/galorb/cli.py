"""Command-line interface: JSON in, JSON out.

Exit codes: 0 ok, 1 usage or malformed input, 2 scope error, 3 property
violation.  Payloads go to stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Sequence, TextIO

from . import galilean
from .catalog import (
    encode_atlas,
    enumerate_atlas,
    render_table,
    representative,
    representative_for_row,
    table_order,
    tuple_to_algebra,
)
from .classifier import classify
from .linalg import ViolationError
from .serialize import (
    DecodeError,
    decode_algebra,
    decode_group,
    decode_tuple,
    dumps,
    encode_algebra,
    encode_decomposition,
    encode_tuple,
)
from .suites import SUITE_NAMES, result_payload, run_suite
from .summands import IndexMismatch, ScopeError

EXIT_OK, EXIT_INPUT, EXIT_SCOPE, EXIT_VIOLATION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # route argparse failures to exit 1
        raise UsageError(message)


def _read_json(path: str | None, stdin: TextIO) -> Any:
    try:
        if path is None or path == "-":
            text = stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        where = path or "<stdin>"
        raise DecodeError(f"{where}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _scope_payload(exc: Exception, code: str) -> dict[str, str]:
    return {"error": code, "message": str(exc)}


def cmd_classify(args: argparse.Namespace, out: TextIO, stdin: TextIO) -> int:
    t = decode_tuple(_read_json(args.input, stdin))
    out.write(dumps(encode_decomposition(classify(t))))
    return EXIT_OK


def cmd_act(args: argparse.Namespace, out: TextIO, stdin: TextIO) -> int:
    g = decode_group(_read_json(args.group, stdin))
    a = decode_algebra(_read_json(args.algebra, stdin))
    if g.space.gram != a.space.gram:
        raise DecodeError("group and algebra element live on different spaces")
    action = galilean.twisted_ad if args.twisted else galilean.ad
    out.write(dumps(encode_algebra(action(g, a))))
    return EXIT_OK


def _atlas_totals(args: argparse.Namespace, default: tuple[int, int] | None) -> tuple[int, int]:
    has_n = args.n is not None
    has_dim = args.dim is not None or args.index is not None
    if has_n and has_dim:
        raise UsageError("--n conflicts with --dim/--index")
    if has_n:
        if args.n < 0:
            raise UsageError("--n must be nonnegative")
        return args.n + 2, 1
    if args.dim is not None and args.index is not None:
        if args.dim < 0 or args.index < 0:
            raise UsageError("--dim and --index must be nonnegative")
        return args.dim, args.index
    if has_dim:
        raise UsageError("--dim and --index must be given together")
    if default is None:
        raise UsageError("one of --n or --dim/--index is required")
    return default


def cmd_enumerate(args: argparse.Namespace, out: TextIO, stdin: TextIO) -> int:
    atlas = enumerate_atlas(*_atlas_totals(args, None))
    if args.table:
        out.write("\n".join(render_table(table_order(atlas))) + "\n")
    else:
        out.write(dumps(encode_atlas(atlas)))
    return EXIT_OK


def cmd_representative(args: argparse.Namespace, out: TextIO, stdin: TextIO) -> int:
    atlas = enumerate_atlas(*_atlas_totals(args, (5, 1)))
    rows = table_order(atlas)
    if not 1 <= args.atlas_row <= len(rows):
        raise UsageError(f"--atlas-row must be between 1 and {len(rows)}")
    try:
        moduli = json.loads(args.moduli)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"--moduli: invalid JSON: {exc.msg}") from None
    if not isinstance(moduli, dict):
        raise DecodeError("--moduli: expected a JSON object")
    try:
        d = representative_for_row(rows[args.atlas_row - 1].shapes, moduli)
    except (ValueError, TypeError) as exc:
        raise DecodeError(f"--moduli: {exc}") from None
    t = representative(d)
    payload = {
        "decomposition": encode_decomposition(d),
        "tuple": encode_tuple(t),
        "algebra": encode_algebra(tuple_to_algebra(t)),
    }
    out.write(dumps(payload))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, out: TextIO, stdin: TextIO) -> int:
    seed = args.seed
    if seed is None:
        env = os.environ.get("GALORB_SEED")
        if env is None:
            raise UsageError("--seed is required when GALORB_SEED is unset")
        try:
            seed = int(env)
        except ValueError:
            raise UsageError(f"GALORB_SEED must be an integer, got {env!r}") from None
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    names = args.suite or list(SUITE_NAMES)
    unknown = [n for n in names if n not in SUITE_NAMES]
    if unknown:
        raise UsageError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITE_NAMES)}")
    results = []
    for name in names:
        r = run_suite(name, seed, args.trials)
        print(r.line(), file=sys.stderr)
        results.append(r)
    passed = all(r.passed for r in results)
    payload = {"seed": seed, "trials": args.trials, "passed": passed, "suites": [result_payload(r) for r in results]}
    out.write(dumps(payload))
    return EXIT_OK if passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="galorb", description="Exact coadjoint-orbit classification for generalized Galilean groups.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("classify", help="classify a special tuple read as JSON")
    p.add_argument("--in", dest="input", metavar="PATH", help="input file (default: stdin)")
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("act", help="apply the adjoint or twisted adjoint action")
    p.add_argument("--group", required=True, metavar="PATH")
    p.add_argument("--algebra", required=True, metavar="PATH")
    p.add_argument("--twisted", action="store_true")
    p.set_defaults(handler=cmd_act)

    for name, helptext in (("enumerate", "list orbit decompositions"),
                           ("representative", "build a tuple realizing an atlas row")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--n", type=int, help="vector dimension n; totals become (n+2, 1)")
        p.add_argument("--dim", type=int)
        p.add_argument("--index", type=int)
        if name == "enumerate":
            p.add_argument("--table", action="store_true", help="print an aligned text table instead of JSON")
            p.set_defaults(handler=cmd_enumerate)
        else:
            p.add_argument("--atlas-row", type=int, required=True, metavar="R",
                           help="1-based row in table order (reference rows first)")
            p.add_argument("--moduli", required=True, metavar="JSON",
                           help='e.g. \'{"y1": "2", "beta_sq": ["1", "4"]}\'')
            p.set_defaults(handler=cmd_representative)

    p = sub.add_parser("verify", help="run seeded property suites")
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--suite", action="append", metavar="NAME")
    p.set_defaults(handler=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None, stdout: TextIO | None = None, stdin: TextIO | None = None) -> int:
    out = stdout or sys.stdout
    source = stdin or sys.stdin
    try:
        args = build_parser().parse_args(argv)
        return args.handler(args, out, source)
    except UsageError as exc:
        print(f"galorb: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DecodeError, ViolationError) as exc:
        print(f"galorb: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (IndexMismatch, ScopeError) as exc:
        out.write(dumps(_scope_payload(exc, exc.code)))
        print(f"galorb: {exc}", file=sys.stderr)
        return EXIT_SCOPE


if __name__ == "__main__":
    sys.exit(main())
