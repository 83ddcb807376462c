"""Command-line entry points: the verification battery and experiment scans.

Exit status is 0 when every asserted check passes, 1 otherwise.  CSV goes
to --csv (stdout default); the verify report serializes to --json.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .experiments import (
    convex_scan,
    coverage_scan,
    doubling_stats,
    expansion_scan,
    level_set_profile,
    progression_batch,
    subgroup_scan,
    write_csv,
)
from .verify import Report, run_identity_suite, run_inequality_suite, run_subgroup_suite


def _emit_rows(rows, out_path: str | None) -> None:
    if out_path:
        write_csv(out_path, rows)
        return
    import csv as _csv
    from dataclasses import fields

    from .experiments import _fmt

    writer = _csv.writer(sys.stdout)
    names = [f.name for f in fields(rows[0])]
    writer.writerow(names)
    for row in rows:
        writer.writerow([_fmt(getattr(row, n)) for n in names])


def _cmd_verify(args) -> int:
    identity_trials = args.trials if args.trials else 200
    inequality_trials = args.trials if args.trials else 1000
    suites = [
        run_identity_suite(args.seed, identity_trials),
        run_inequality_suite(args.seed, inequality_trials),
        run_subgroup_suite([int(p) for p in args.primes.split(",")], args.seed),
    ]
    report = Report(suites)
    for s in suites:
        status = "pass" if s.passed else f"FAIL at {s.halted or 'checks'}"
        print(
            f"{s.name}: {s.n_checks} checks, {s.n_failed} failed, "
            f"{s.runtime:.1f}s [{status}]"
        )
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
    return 0 if report.passed else 1


def _cmd_subgroup_scan(args) -> int:
    rows = subgroup_scan(args.pmax, args.tmin, args.tmax, seed=args.seed)
    _emit_rows(rows, args.csv)
    finite = [r.ratio_52 for r in rows if r.ratio_52 is not None]
    print(f"rows: {len(rows)}, worst ratio_52: {max(finite):.6g}", file=sys.stderr)
    return 0


def _cmd_level_profile(args) -> int:
    rows = level_set_profile(args.p, args.t)
    if rows:
        _emit_rows(rows, args.csv)
    else:
        print("no super-threshold values", file=sys.stderr)
    return 0


def _cmd_coverage(args) -> int:
    rows = coverage_scan(args.pmax, args.cap)
    _emit_rows(rows, args.csv)
    return 0


def _cmd_expansion(args) -> int:
    rows = expansion_scan(args.p, args.t, args.trials, args.seed)
    _emit_rows(rows, args.csv)
    return 0


def _cmd_convex_scan(args) -> int:
    sizes = []
    n = 4
    while n < args.nmax:
        sizes.append(n)
        n *= 2
    sizes.append(args.nmax)
    rows = convex_scan(sizes, args.generator, args.seed)
    _emit_rows(rows, args.csv)
    return 0


def _cmd_doubling(args) -> int:
    rows = []
    with open(args.file, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            vals = [int(v) for v in line.replace(",", " ").split()]
            rows.append(doubling_stats(vals, args.shift))
    if not rows:
        print("no sets found", file=sys.stderr)
        return 1
    _emit_rows(rows, args.csv)
    return 0


def _cmd_ap_scan(args) -> int:
    rows = progression_batch(args.pmax)
    _emit_rows(rows, args.csv)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="addcomb",
        description="exact additive-combinatorics checks and experiments",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the full check battery")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--trials", type=int, default=0,
                   help="override trial counts (default 200 identity / 1000 inequality)")
    p.add_argument("--json", help="write the machine-readable report here")
    p.add_argument("--primes", default="7,13,31,101",
                   help="comma-separated primes for the subgroup suite")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("subgroup-scan", help="energy/sumset scan over subgroups")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--tmin", type=int, default=1)
    p.add_argument("--tmax", type=int, default=None)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_subgroup_scan)

    p = sub.add_parser("level-profile", help="dyadic autocorrelation profile")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_level_profile)

    p = sub.add_parser("coverage-6gamma", help="iterated-sumset coverage scan")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--cap", type=int, default=12)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_coverage)

    p = sub.add_parser("expansion-scan", help="|A + Gamma| expansion ratios")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_expansion)

    p = sub.add_parser("convex-scan", help="convex sequence energy scan")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--generator", choices=("squares", "perturbed"), default="squares")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_convex_scan)

    p = sub.add_parser("doubling-stats", help="product-set statistics from a file")
    p.add_argument("--file", required=True,
                   help="one integer set per line, comma or space separated")
    p.add_argument("--shift", type=int, default=1)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_doubling)

    p = sub.add_parser("ap-scan", help="longest progressions inside subgroups")
    p.add_argument("--pmax", type=int, required=True)
    p.add_argument("--csv")
    p.set_defaults(func=_cmd_ap_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
