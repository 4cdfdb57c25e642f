"""``kmdecomp`` command line: estimate, decompose, simulate, verify, plotdata."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import plotdata
from .decomposition import UnitDecomposition, aggregate, decompose
from .errors import DomainError, ParseError, VerificationError
from .estimator import km_product
from .population import Population, build_population, format_csv, ingest_csv
from .simulation import PAPER_CENSORING, PAPER_FAILURE, SimConfig, WeibullSpec, simulate_population
from .steps import max_abs_diff
from .verification import corrupt, run_checks

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_DOMAIN = 4
EXIT_VERIFY = 5
EXIT_IO = 6


def _read_population(path: str) -> Population:
    if path == "-":
        text = sys.stdin.read()
    else:
        text = Path(path).read_text(encoding="utf-8")
    pop = build_population(ingest_csv(text))
    if pop.n == 0:
        raise DomainError("empty population")
    return pop


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _grid(args, d: UnitDecomposition):
    if args.grid:
        return plotdata.parse_grid(args.grid)
    return d.grid()


def cmd_estimate(args) -> int:
    pop = _read_population(args.input)
    records = plotdata.breakpoint_records(km_product(pop), "km")
    _write(args.output, plotdata.to_json(records) if args.format == "json" else plotdata.to_csv(records))
    return EXIT_OK


def cmd_decompose(args) -> int:
    pop = _read_population(args.input)
    d = decompose(pop)
    km = km_product(pop)
    sum_check = max_abs_diff(aggregate(d), km, d.grid())
    grid = _grid(args, d)
    records = (plotdata.sampled_records(km, "km", grid)
               + plotdata.unit_records(d, grid)
               + plotdata.layer_records(d, grid)
               + plotdata.split_records(d, grid))
    if args.format == "json":
        text = plotdata.to_json(records, sum_check=sum_check)
    else:
        text = plotdata.to_csv(records, extra_rows=[("sum_check", "", plotdata.fmt(sum_check))])
    _write(args.output, text)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = SimConfig(
        n=args.n,
        failure=WeibullSpec(args.failure_shape, args.failure_scale),
        censoring=WeibullSpec(args.censor_shape, args.censor_scale),
        seed=args.seed,
    )
    pop, _ = simulate_population(cfg)
    _write(args.output, format_csv(pop.units))
    failed = int(pop.events.sum())
    print(f"n={pop.n} failed={failed} censored={pop.n - failed}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    pop = _read_population(args.input)
    d = decompose(pop)
    if args.self_test:
        d = corrupt(d)
    results = run_checks(pop, decomposition=d)
    for r in results:
        print(r)
    failed = [r for r in results if not r.passed]
    if failed:
        for r in failed:
            print(f"error: {VerificationError(r.name, r.deviation, r.tol)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_plotdata(args) -> int:
    pop = _read_population(args.input)
    d = decompose(pop)
    grid = _grid(args, d)
    if args.output.lower().endswith(".svg"):
        _write(args.output, plotdata.render_svg(d, args.style, grid if args.grid else None))
        return EXIT_OK
    if args.style == "km":
        records = plotdata.breakpoint_records(km_product(pop), "km")
    elif args.style == "stacked":
        records = plotdata.layer_records(d, grid)
    elif args.style == "split":
        records = plotdata.split_records(d, grid)
    else:
        records = plotdata.unit_records(d, grid)
    _write(args.output, plotdata.to_json(records) if args.format == "json" else plotdata.to_csv(records))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kmdecomp",
        description="Kaplan-Meier estimator and its unit-level decomposition.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def io_args(p, output=True):
        p.add_argument("--input", "-i", required=True, help="CSV with header time,event ('-' for stdin)")
        if output:
            p.add_argument("--output", "-o", default="-", help="output path ('-' for stdout)")
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("estimate", help="Kaplan-Meier curve as breakpoint/value pairs")
    io_args(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("decompose", help="unit curves, stacked layers and empirical/predicted split")
    io_args(p)
    p.add_argument("--grid", help="uniform grid start:stop:step (default: breakpoints + midpoints)")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("simulate", help="Weibull failure/censoring population as time,event CSV")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--failure-shape", type=float, default=PAPER_FAILURE.shape)
    p.add_argument("--failure-scale", type=float, default=PAPER_FAILURE.scale)
    p.add_argument("--censor-shape", type=float, default=PAPER_CENSORING.shape)
    p.add_argument("--censor-scale", type=float, default=PAPER_CENSORING.scale)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", help="check the sum, redistribution, consistency and fixed-point identities")
    io_args(p, output=False)
    p.add_argument("--self-test", action="store_true",
                   help="corrupt one unit curve first; the checks must then fail")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("plotdata", help="long-format plot data, or SVG when --output ends in .svg")
    io_args(p)
    p.add_argument("--style", choices=plotdata.STYLES, default="stacked")
    p.add_argument("--grid", help="uniform grid start:stop:step")
    p.set_defaults(func=cmd_plotdata)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
