"""Command-line interface.

Subcommands:

* ``stats TREE``       — the four statistics of one tree given as text.
* ``enumerate N``      — list all trees of size N, optionally with stats.
* ``series NAME``      — print a solved series as JSON.
* ``verify ID``        — check one of the identities 0..6, print a verdict.
* ``moments STAT``     — exact moment table as JSON or CSV, with optional
                         closed-form checks.
* ``guess STAT``       — fit a rational function in n to a moment column.
* ``limits``           — reference closed forms and their limits.

Exit codes: 0 success, 1 a verification or fit failed, 2 usage or parse
error, 3 a resource cap refused the request.

Every value-taking flag can be defaulted from the environment as
JUMPSTAT_<FLAG> (dashes to underscores, upper case), e.g. JUMPSTAT_ORDER=24.
Explicit flags always win over the environment.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import genfunc, moments
from .guess import GuessError, guess_rational
from .trees import (DEFAULT_ENUMERATION_CAP, EnumerationCapError,
                    TreeParseError, compute_stats, enumerate_trees_with_stats,
                    format_tree, parse_tree)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_REFUSED = 3

SERIES_ALIASES = {
    "f": "f", "catalan": "f",
    "F": "F", "trivariate": "F",
    "H": "H", "jumps": "H",
    "J": "J", "depth": "J",
    "K": "K", "jumpdist": "K",
}

_SOLVERS = {
    "f": genfunc.solve_catalan,
    "F": genfunc.solve_F,
    "H": genfunc.solve_H,
    "J": genfunc.solve_Jdepth,
    "K": genfunc.solve_K,
}


class _UsageError(Exception):
    pass


def _env_name(flag: str) -> str:
    return "JUMPSTAT_" + flag.lstrip("-").upper().replace("-", "_")


def _env_int(flag: str, fallback: int) -> int:
    raw = os.environ.get(_env_name(flag))
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"{_env_name(flag)} must be an integer, got {raw!r}")


def _env_str(flag: str, fallback: str) -> str:
    return os.environ.get(_env_name(flag), fallback)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jumpstat",
        description="Exact jump statistics on full binary trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="statistics of one tree")
    p.add_argument("tree", help="tree text, e.g. '[[.,.],.]'")

    p = sub.add_parser("enumerate", help="list all trees of a size")
    p.add_argument("n", type=int)
    p.add_argument("--cap", type=int, default=_env_int("--cap", DEFAULT_ENUMERATION_CAP),
                   help="refuse sizes above this (default %(default)s)")
    p.add_argument("--with-stats", action="store_true",
                   help="print JSON lines with statistics instead of bare trees")

    p = sub.add_parser("series", help="print a solved series as JSON")
    p.add_argument("name", choices=sorted(SERIES_ALIASES),
                   help="f/catalan, F/trivariate, H/jumps, J/depth, K/jumpdist")
    p.add_argument("--order", type=int, default=_env_int("--order", 10))

    p = sub.add_parser("verify", help="check one identity, print a verdict")
    p.add_argument("theorem", choices=list(genfunc.THEOREM_IDS))
    p.add_argument("--order", type=int, default=_env_int("--order", 40))
    p.add_argument("--oracle-cap", type=int,
                   default=_env_int("--oracle-cap", genfunc.DEFAULT_ORACLE_CAP),
                   help="exhaustive-enumeration bound for id 1 "
                        "(default %(default)s)")

    p = sub.add_parser("moments", help="exact moment table")
    p.add_argument("stat", choices=list(moments.STATS))
    p.add_argument("--max-moment", type=int,
                   default=_env_int("--max-moment", moments.DEFAULT_MAX_MOMENT))
    p.add_argument("--nmax", type=int,
                   default=_env_int("--nmax", moments.DEFAULT_N_MAX))
    p.add_argument("--format", choices=["json", "csv"],
                   default=_env_str("--format", "json"))
    p.add_argument("--check", action="store_true",
                   help="also check the reference closed forms "
                        "(results on stderr; failures set exit code 1)")

    p = sub.add_parser("guess", help="fit a rational function to a moment column")
    p.add_argument("stat", choices=list(moments.STATS))
    p.add_argument("--moment", required=True,
                   help="mean | variance | raw:R | central:R | scaled:R "
                        "(odd scaled moments use their squared values)")
    p.add_argument("--n-from", type=int, default=_env_int("--n-from", 2))
    p.add_argument("--n-to", type=int, default=_env_int("--n-to", 40))
    p.add_argument("--holdout", type=int, default=_env_int("--holdout", 5))
    p.add_argument("--max-total-degree", type=int,
                   default=_env_int("--max-total-degree", 24))

    p = sub.add_parser("limits", help="reference closed forms and their limits")
    p.add_argument("--stat", choices=["all", *moments.STATS],
                   default=_env_str("--stat", "all"))

    return parser


def _cmd_stats(args) -> int:
    st = compute_stats(parse_tree(args.tree))
    print(json.dumps({"internal": st.internal, "jumps": st.jumps,
                      "depth": st.depth, "jumpdist": st.jumpdist}))
    return EXIT_OK


def _cmd_enumerate(args) -> int:
    for tree, st in enumerate_trees_with_stats(args.n, cap=args.cap):
        if args.with_stats:
            print(json.dumps({"tree": format_tree(tree),
                              "internal": st.internal, "jumps": st.jumps,
                              "depth": st.depth, "jumpdist": st.jumpdist}))
        else:
            print(format_tree(tree))
    return EXIT_OK


def _cmd_series(args) -> int:
    name = SERIES_ALIASES[args.name]
    if args.order < 0:
        raise _UsageError("--order must be >= 0")
    series = _SOLVERS[name](args.order)
    print(json.dumps({"name": name, "order": series.order,
                      "series": series.to_json()}))
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.order < 0:
        raise _UsageError("--order must be >= 0")
    verdict = genfunc.verify_theorem(args.theorem, args.order,
                                     oracle_cap=args.oracle_cap)
    print(json.dumps(verdict.to_json()))
    return EXIT_OK if verdict.passed else EXIT_FAIL


def _cmd_moments(args) -> int:
    table = moments.moment_table(args.stat, max_moment=args.max_moment,
                                 n_max=args.nmax)
    if args.format == "csv":
        sys.stdout.write(table.to_csv())
    else:
        print(table.to_json_text())
    if not args.check:
        return EXIT_OK
    checks = moments.check_closed_forms(table)
    for check in checks:
        status = "pass" if check.passed else "FAIL"
        extra = "" if check.passed else (
            f" (first mismatch n={check.first_mismatch_n}: {check.detail})")
        print(f"check {check.tag}: {status} "
              f"[n={check.checked_from}..{check.checked_to}]{extra}",
              file=sys.stderr)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def _parse_moment_spec(spec: str) -> tuple[str, int]:
    if spec == "mean":
        return "raw", 1
    if spec == "variance":
        return "central", 2
    kind, sep, digits = spec.partition(":")
    if sep and digits.isdigit():
        r = int(digits)
        if kind == "raw" and r >= 1:
            return kind, r
        if kind in ("central", "scaled") and r >= 2:
            return kind, r
    raise _UsageError(
        f"bad --moment {spec!r}: expected mean, variance, raw:R, "
        f"central:R (R>=2), or scaled:R (R>=2)")


def _cmd_guess(args) -> int:
    kind, r = _parse_moment_spec(args.moment)
    if args.n_to <= args.n_from:
        raise _UsageError("--n-to must exceed --n-from")
    table = moments.moment_table(args.stat, max_moment=r, n_max=args.n_to)
    start = max(args.n_from, 0)
    if kind == "scaled":
        # scaled moments only exist where the variance is positive
        start = max(start, 2)
    points = []
    label = kind
    for n in range(start, args.n_to + 1):
        row = table.row(n)
        if kind == "raw":
            points.append((n, row.raw_moment(r)))
        elif kind == "central":
            points.append((n, row.central_moment(r)))
        elif r % 2 == 0:
            label = "scaled"
            if r in row.scaled_even:
                points.append((n, row.scaled_even[r]))
        else:
            label = "scaled_squared"
            if r in row.scaled_odd_squared:
                points.append((n, row.scaled_odd_squared[r][1]))
    result = guess_rational(points, holdout=args.holdout,
                            max_total_degree=args.max_total_degree)
    out = {"stat": args.stat, "moment": {"kind": label, "r": r},
           "points": {"from": points[0][0], "to": points[-1][0],
                      "holdout": args.holdout}}
    out.update(result.to_json())
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_limits(args) -> int:
    refs = [ref for ref in moments.REFERENCE_FORMULAS
            if args.stat in ("all", ref.stat)]
    print(json.dumps([ref.to_json() for ref in refs], indent=2))
    return EXIT_OK


_COMMANDS = {
    "stats": _cmd_stats,
    "enumerate": _cmd_enumerate,
    "series": _cmd_series,
    "verify": _cmd_verify,
    "moments": _cmd_moments,
    "guess": _cmd_guess,
    "limits": _cmd_limits,
}


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except _UsageError as exc:  # bad environment default
        print(f"jumpstat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"jumpstat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TreeParseError as exc:
        print(f"jumpstat: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EnumerationCapError as exc:
        print(f"jumpstat: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except GuessError as exc:
        print(f"jumpstat: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, ZeroDivisionError) as exc:
        print(f"jumpstat: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
