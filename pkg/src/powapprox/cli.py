"""Command-line driver.

    powapprox approx --alpha 0.5 --n 6 --m auto --prec 256
    powapprox sweep --alpha 1/2 --n 4..14 --prec 672 --format csv --out sweep.csv
    powapprox constant --alpha 0.5 --n 4..14 --prec 512
    powapprox bernstein --max-m 40
    powapprox bounds --name Newman --n 4..20
    powapprox potential --ladder 1e2,1e3,1e4 --nodes 400
    powapprox transforms --alpha 0.5 --n 4,6,8 --R 4

Exit status: 0 success, 1 some sub-job failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import logging
import sys
import time
from pathlib import Path

from . import __version__
from .asymptotics import (
    BOUNDS,
    Family,
    bernstein_constant_estimate,
    constant_estimate,
    epsilon_relation_check,
    historical_bound,
    refuted_bernstein_conjecture,
)
from .cache import open_cache
from .green import GreenSolverError, check_inequality, solve_extremal, verify_limits
from .numeric import MIN_PRECISION_BITS, make_context, to_decimal
from .remez import RemezError, equioscillation_diagnostics
from .serialize import result_to_dict
from .sweep import CSV_COLUMNS, make_target, numerator_degree, parse_range, run_sweep, solve_one
from .transforms import TransformContext, boundary_spot_check, stability

log = logging.getLogger("powapprox")

EXIT_OK, EXIT_PARTIAL, EXIT_INVALID = 0, 1, 2


class InvalidInput(ValueError):
    pass


# ---------------------------------------------------------------- output

def _emit(text: str, out: str | None):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _plot_path(out, stem):
    base = Path(out) if out else Path(stem)
    return base.with_suffix(".png")


def _plot(args, draw, stem):
    """Render a figure next to the main output when ``--plot`` is given."""
    if not args.plot:
        return
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        log.warning("--plot needs matplotlib (pip install 'artifact[plot]'); skipped")
        return
    fig, ax = plt.subplots(figsize=(6, 4))
    draw(ax)
    fig.tight_layout()
    path = _plot_path(args.out, stem)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    log.info("figure written to %s", path)


# ---------------------------------------------------------------- commands

def cmd_approx(args) -> int:
    f = make_target(args.alpha, args.family)
    n = args.n
    m = numerator_degree(args.m, n, f.exact_alpha)
    cache = open_cache(args.cache)
    t0 = time.perf_counter()
    result = solve_one(f, m, n, args.prec, cache)
    payload = result_to_dict(result)
    if args.diagnostics and not result.degenerate:
        payload["diagnostics"] = equioscillation_diagnostics(result).to_dict(result.ctx)
    payload["elapsed_seconds"] = round(time.perf_counter() - t0, 3)
    if args.format == "csv":
        ctx = result.ctx
        row = [f.alpha, n, m, args.prec, to_decimal(ctx, result.error), to_decimal(ctx, result.levelness),
               result.iterations, result.defect]
        _emit(_csv_text(["alpha", "n", "m", "precision_bits", "E", "levelness", "iterations", "defect"],
                        [row]), args.out)
    else:
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return EXIT_OK if result.converged else EXIT_PARTIAL


def _sweep_rows(args, stream_csv: bool = False):
    cache = open_cache(args.cache)
    n_values = parse_range(args.n)
    ctx = make_context(args.prec)
    stream = None
    if stream_csv and args.out and args.format == "csv":
        # rows are appended as they finish so an interrupted run keeps them
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        stream = open(args.out, "w", newline="")
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)

    def on_row(row):
        if row.error:
            log.warning("alpha=%s n=%d failed: %s", row.alpha, row.n, row.error)
        else:
            log.info("alpha=%s n=%d m=%d E=%s", row.alpha, row.n, row.m, ctx.mp.nstr(row.E, 12))
        if stream:
            writer.writerow(row.csv_fields(ctx))
            stream.flush()

    try:
        rows = run_sweep(args.alpha, n_values, args.prec, args.family, args.m, cache,
                         args.workers, on_row)
    finally:
        if stream:
            stream.close()
    return rows, ctx


def _rows_payload(rows, ctx):
    return [dict(zip(CSV_COLUMNS, r.csv_fields(ctx)), converged=r.converged, error=r.error)
            for r in rows]


def cmd_sweep(args) -> int:
    rows, ctx = _sweep_rows(args, stream_csv=True)
    if args.format == "csv":
        if not args.out:
            _emit(_csv_text(CSV_COLUMNS, [r.csv_fields(ctx) for r in rows]), None)
    else:
        _emit(json.dumps({"rows": _rows_payload(rows, ctx)}, indent=2) + "\n", args.out)

    def draw(ax):
        ok = [r for r in rows if r.normalized is not None]
        ax.plot([r.n for r in ok], [float(r.normalized) for r in ok], "o-")
        ax.set_xlabel("n")
        ax.set_ylabel("normalized error")

    _plot(args, draw, "sweep")
    return EXIT_PARTIAL if any(r.error for r in rows) else EXIT_OK


def cmd_constant(args) -> int:
    rows, ctx = _sweep_rows(args)
    good = [(r.n, r.E) for r in rows if r.error is None and r.E is not None and r.E > 0]
    status = EXIT_PARTIAL if len(good) < len(rows) else EXIT_OK
    if len(good) < 4:
        log.error("need at least 4 converged entries, have %d", len(good))
        return EXIT_PARTIAL
    est = constant_estimate(args.alpha, good, ctx, args.family, args.model)
    report = est.to_dict(ctx)
    if Family(args.family) is Family.ON01:
        report["epsilon_relation"] = [
            {"n": r.n, "ratio": ctx.mp.nstr(r.ratio, 15), "root": ctx.mp.nstr(r.root, 15)}
            for r in epsilon_relation_check(good, args.alpha, ctx)
        ]
    print(f"target   {ctx.mp.nstr(est.target, 12)}", file=sys.stderr)
    print(f"estimate {ctx.mp.nstr(est.extrapolated, 12)} +- {ctx.mp.nstr(est.error_bar, 3)} "
          f"({est.model}, heuristic error bar)", file=sys.stderr)
    if args.format == "csv":
        _emit(_csv_text(["n", "E", "normalized"],
                        [[n, to_decimal(ctx, E), to_decimal(ctx, y)] for n, E, y in est.entries]),
              args.out)
    else:
        _emit(json.dumps(report, indent=2) + "\n", args.out)

    def draw(ax):
        ax.plot([n for n, _, _ in est.entries], [float(y) for _, _, y in est.entries], "o-",
                label="computed")
        ax.axhline(float(est.target), color="k", lw=0.8, ls="--", label="limit")
        ax.set_xlabel("n")
        ax.set_ylabel("normalized error")
        ax.legend()

    _plot(args, draw, "constant")
    return status


def cmd_bernstein(args) -> int:
    ctx = make_context(args.prec)
    cache = open_cache(args.cache)
    f = make_target(1, Family.ON_SYM)

    def solver(m):
        return solve_one(f, m, 0, args.prec, cache).error

    est = bernstein_constant_estimate(args.max_m, ctx, solver)
    report = est.to_dict(ctx)
    report["refuted_conjecture"] = to_decimal(ctx, refuted_bernstein_conjecture(ctx), 20)
    if args.format == "csv":
        _emit(_csv_text(["m", "E", "mE"],
                        [[m, to_decimal(ctx, E), to_decimal(ctx, y)] for m, E, y in est.entries]),
              args.out)
    else:
        _emit(json.dumps(report, indent=2) + "\n", args.out)
    print(f"estimate {ctx.mp.nstr(est.extrapolated, 10)} +- {ctx.mp.nstr(est.error_bar, 3)}; "
          f"reference {ctx.mp.nstr(est.target, 10)}", file=sys.stderr)

    def draw(ax):
        ax.plot([m for m, _, _ in est.entries], [float(y) for _, _, y in est.entries], "o-")
        ax.axhline(float(est.target), color="k", lw=0.8, ls="--")
        ax.set_xlabel("m")
        ax.set_ylabel("m E_m")

    _plot(args, draw, "bernstein")
    return EXIT_OK


def cmd_bounds(args) -> int:
    spec = BOUNDS.get(args.name)
    if spec is None:
        raise InvalidInput(f"unknown bound {args.name!r}; choose from {', '.join(BOUNDS)}")
    ctx = make_context(args.prec)
    alpha = spec.alpha or args.alpha
    rows = []
    for n in parse_range(args.n):
        b = historical_bound(spec, n, alpha, ctx)
        rows.append([n, "" if b.lower is None else to_decimal(ctx, b.lower, 20),
                     "" if b.upper is None else to_decimal(ctx, b.upper, 20)])
    if args.format == "csv":
        _emit(_csv_text(["n", "lower", "upper"], rows), args.out)
    else:
        _emit(json.dumps({"name": spec.name, "constants_known": spec.constants_known,
                          "lower_formula": spec.lower_formula, "upper_formula": spec.upper_formula,
                          "rows": [dict(zip(["n", "lower", "upper"], r)) for r in rows]},
                         indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_potential(args) -> int:
    try:
        ladder = [float(v) for v in args.ladder.split(",")]
    except ValueError:
        raise InvalidInput(f"bad ladder {args.ladder!r}") from None
    table = verify_limits(ladder, args.nodes, args.workers)
    header = ["a", "b", "b_minus_sqrt2", "mass_ratio", "mass_ratio_minus_4", "total_mass", "residual",
              "doubling_change"]
    rows = [[repr(r.a), repr(r.b), repr(r.b_gap), repr(r.mass_ratio), repr(r.mass_gap),
             repr(r.total_mass), repr(r.residual), repr(d)]
            for r, d in zip(table["rows"], table["doubling_relative_change"])]
    if args.format == "csv":
        _emit(_csv_text(header, rows), args.out)
    else:
        solutions = []
        for a in ladder:
            sol = solve_extremal(a, args.nodes)
            entry = sol.to_dict()
            entry["inequality"] = check_inequality(sol)
            solutions.append(entry)
        _emit(json.dumps({"rows": [dict(zip(header, r)) for r in rows],
                          "flags": {k: v for k, v in table.items() if k != "rows"},
                          "solutions": solutions}, indent=2) + "\n", args.out)

    def draw(ax):
        a = [r.a for r in table["rows"]]
        ax.semilogx(a, [r.b for r in table["rows"]], "o-", label="b")
        ax.semilogx(a, [r.mass_ratio for r in table["rows"]], "s-", label="mass ratio")
        ax.set_xlabel("a")
        ax.legend()

    _plot(args, draw, "potential")
    return EXIT_OK


def cmd_transforms(args) -> int:
    f = make_target(args.alpha, Family.ON01)
    cache = open_cache(args.cache)
    reports = []
    status = EXIT_OK
    for n in parse_range(args.n):
        m = numerator_degree("auto", n, f.exact_alpha)
        result = solve_one(f, m, n, args.prec, cache)
        tctx = TransformContext.from_result(result, args.R, args.upper_sign)
        rep = boundary_spot_check(tctx, samples=args.samples)
        if not rep.nonvanishing:
            status = EXIT_PARTIAL
        reports.append(rep)
    payload = {"reports": [json.loads(r.to_json()) for r in reports], "stability": stability(reports)}
    if args.format == "csv":
        _emit(_csv_text(["n", "R", "empirical_c1", "empirical_c2", "empirical_c3", "failures", "nonvanishing"],
                        [[r.n, r.R, r.empirical_c1, r.empirical_c2, r.empirical_c3, r.failures, r.nonvanishing]
                         for r in reports]), args.out)
    else:
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return status


# ---------------------------------------------------------------- parser

def _read_config(path) -> dict:
    """``key = value`` lines, optionally under section headers (all merged)."""
    text = Path(path).read_text()
    parser = configparser.ConfigParser()
    parser.read_string(text if text.lstrip().startswith("[") else "[defaults]\n" + text)
    values = {}
    for section in parser.sections():
        for k, v in parser.items(section):
            values[k.replace("-", "_")] = v
    return values


def _precision(text) -> int:
    bits = int(text)
    if bits < MIN_PRECISION_BITS:
        raise argparse.ArgumentTypeError(f"precision must be at least {MIN_PRECISION_BITS} bits")
    return bits


def _positive_int(text) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prec", type=_precision, default=256, help="working precision in bits")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--cache", help="cache directory")
    common.add_argument("--workers", type=_positive_int, default=1)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--config", help="key = value file with defaults; flags take precedence")
    common.add_argument("--plot", action="store_true", help="also write a PNG figure (needs matplotlib)")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="powapprox", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("approx", parents=[common], help="one best approximation")
    a.add_argument("--alpha", required=True)
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--m", default="auto", help="auto (paradiagonal), n, n+K or an integer")
    a.add_argument("--family", choices=[f.value for f in Family], default="on01")
    a.add_argument("--diagnostics", action="store_true")
    a.set_defaults(func=cmd_approx)

    for name, func, help_ in (("sweep", cmd_sweep, "errors over a degree range"),
                              ("constant", cmd_constant, "sweep, normalize and extrapolate")):
        s = sub.add_parser(name, parents=[common], help=help_)
        s.add_argument("--alpha", required=True)
        s.add_argument("--n", required=True, help="range such as 4..14, 4..20:2 or 2,4,6")
        s.add_argument("--m", default="auto")
        s.add_argument("--family", choices=[f.value for f in Family], default="on01")
        if name == "constant":
            s.add_argument("--model", choices=("richardson_sqrt", "aitken"), default="richardson_sqrt")
        s.set_defaults(func=func)

    b = sub.add_parser("bernstein", parents=[common], help="polynomial constant for |x|")
    b.add_argument("--max-m", type=int, default=40)
    b.set_defaults(func=cmd_bernstein, prec=128)

    h = sub.add_parser("bounds", parents=[common], help="tabulate a published bound")
    h.add_argument("--name", required=True, choices=sorted(BOUNDS))
    h.add_argument("--n", required=True)
    h.add_argument("--alpha", default="1/2")
    h.set_defaults(func=cmd_bounds)

    g = sub.add_parser("potential", parents=[common], help="Green potential ladder")
    g.add_argument("--ladder", default="1e2,1e3,1e4")
    g.add_argument("--nodes", type=int, default=200)
    g.set_defaults(func=cmd_potential)

    t = sub.add_parser("transforms", parents=[common], help="transform chain spot checks")
    t.add_argument("--alpha", required=True)
    t.add_argument("--n", default="4,6,8")
    t.add_argument("--R", type=float, default=4.0)
    t.add_argument("--samples", type=int, default=60)
    t.add_argument("--upper-sign", type=int, choices=(1, -1), default=1)
    t.set_defaults(func=cmd_transforms, prec=128)
    p.subcommands = sub.choices
    return p


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    values = _read_config(known.config)
    for sub in parser.subcommands.values():
        sub.set_defaults(**values)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except (OSError, configparser.Error) as exc:
        print(f"powapprox: cannot read config: {exc}", file=sys.stderr)
        return EXIT_INVALID
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    # config values arrive as strings
    for name, conv in (("prec", _precision), ("workers", _positive_int)):
        if isinstance(getattr(args, name, None), str):
            setattr(args, name, conv(getattr(args, name)))
    try:
        return args.func(args)
    except (RemezError, GreenSolverError) as exc:
        print(f"powapprox: computation failed: {exc}", file=sys.stderr)
        return EXIT_PARTIAL
    except (InvalidInput, ValueError) as exc:
        print(f"powapprox: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
