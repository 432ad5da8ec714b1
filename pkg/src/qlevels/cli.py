"""Command-line front end.

Exit codes: 0 success, 2 usage or parse error, 3 mathematical failure
(pole, non-convergence, or an identity that does not verify).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import catalog, selfcheck
from .errors import ConvergenceError, PoleError, SchemaError, UnmappedSymbolError
from .iseries import DEFAULT_DEGREE_CAP, ChargeModel, i_function
from .symfactor import Specialization

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 2, 3


class UsageError(Exception):
    pass


def _load_json(path: str, what: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {what} file {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} file {path} is not valid JSON: {exc}") from None


def _emit(args, text: str, payload) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_expand(args) -> int:
    raw_model = _load_json(args.model, "model")
    raw_spec = _load_json(args.spec, "specialization")
    try:
        model, conv = ChargeModel.from_json(raw_model)
        spec = Specialization.from_json(raw_spec)
    except SchemaError as exc:
        raise UsageError(str(exc)) from None
    missing = spec.missing(model.symbols(), model.s)
    if missing:
        raise UsageError(f"specialization does not map: {', '.join(missing)}")
    trunc = args.trunc if args.trunc is not None else catalog.DEFAULT_TRUNC
    series = i_function(model, conv, spec, trunc, args.degree_cap)
    _emit(args, str(series), series.to_json())
    return EXIT_OK


def cmd_verify(args) -> int:
    name = args.name
    trunc = args.trunc
    if name == "all":
        idents = catalog.registry()
        family = True
    elif name == catalog.PROP4_NAME:
        idents, family = [], True
    else:
        ident = catalog.lookup(name)
        if ident is None:
            raise UsageError(f"unknown identity {name!r}; see 'qlevels catalog'")
        idents, family = [ident], False
    reports = [catalog.verify_identity(i, trunc) for i in idents]
    if family:
        ftrunc = trunc if trunc is not None and name != "all" else catalog.PROP4_TRUNC
        trials = catalog.verify_prop4_family(args.seed, ftrunc)
        reports.append(catalog.summarize_family(trials, ftrunc))
    ok = all(r.passed for r in reports)
    passed = sum(r.passed for r in reports)
    text = "\n".join(str(r) for r in reports) + f"\n{passed}/{len(reports)} passed"
    _emit(args, text, [r.to_json() for r in reports])
    return EXIT_OK if ok else EXIT_MATH


def cmd_catalog(args) -> int:
    rows = catalog.list_identities()
    if args.format == "json":
        payload = [i.summary() for i in catalog.registry()]
        payload.append({"name": rows[-1][0], "reference": rows[-1][1], "description": rows[-1][2],
                        "shapes": [list(s) for s in catalog.PROP4_SHAPES],
                        "trials": catalog.PROP4_TRIALS, "trunc": catalog.PROP4_TRUNC})
        print(json.dumps(payload, indent=2))
    else:
        width = max(len(r[0]) for r in rows)
        for name, ref, desc in rows:
            print(f"{name:<{width}}  {ref}: {desc}")
    return EXIT_OK


def cmd_mock(args) -> int:
    oracle = args.oracle
    ident = catalog.lookup(oracle)
    if ident is not None:
        oracle = ident.rhs_oracle
    if oracle not in catalog.oracle_ids():
        raise UsageError(f"unknown oracle {args.oracle!r}; known: {', '.join(catalog.oracle_ids())}")
    trunc = args.trunc if args.trunc is not None else catalog.DEFAULT_TRUNC
    series = catalog.mock_theta(oracle, trunc)
    _emit(args, str(series), series.to_json())
    return EXIT_OK


def cmd_selfcheck(args) -> int:
    results = selfcheck.run_all(args.seed, small=not args.full)
    ok = all(r.passed for r in results)
    text = "\n".join(str(r) for r in results)
    text += f"\n{sum(r.passed for r in results)}/{len(results)} suites clean (seed {args.seed})"
    _emit(args, text, {"seed": args.seed, "suites": [r.to_json() for r in results]})
    return EXIT_OK if ok else EXIT_MATH


def _common(suppress: bool) -> argparse.ArgumentParser:
    # subcommand copies use SUPPRESS so they do not clobber flags given before the subcommand
    def default(value):
        return argparse.SUPPRESS if suppress else value

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--trunc", type=_nonneg, default=default(None),
                        help="q-order through which to compute (default 30)")
    common.add_argument("--format", choices=("text", "json"), default=default("text"))
    common.add_argument("--seed", type=int, default=default(0), help="seed for randomized checks")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlevels", parents=[_common(False)],
        description="Exact q-series for level-l toric I-functions and mock theta identities.",
    )
    common = _common(True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[common], help="expand a model under a specialization")
    p.add_argument("model", help="model JSON file")
    p.add_argument("spec", help="specialization JSON file")
    p.add_argument("--degree-cap", type=_positive, default=DEFAULT_DEGREE_CAP,
                   help=f"give up after this many degrees (default {DEFAULT_DEGREE_CAP})")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("verify", parents=[common], help="verify a cataloged identity or 'all'")
    p.add_argument("name")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", parents=[common], help="list the identity registry")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("mock", parents=[common], help="print a right-hand-side oracle series")
    p.add_argument("oracle", help="oracle id or identity name")
    p.set_defaults(func=cmd_mock)

    p = sub.add_parser("selfcheck", parents=[common], help="run the randomized invariant suites")
    p.add_argument("--full", action="store_true", help="use the full case counts")
    p.set_defaults(func=cmd_selfcheck)
    return parser


def _nonneg(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _positive(text: str) -> int:
    value = _nonneg(text)
    if value == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qlevels: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnmappedSymbolError as exc:
        print(f"qlevels: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PoleError, ConvergenceError) as exc:
        print(f"qlevels: math error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
