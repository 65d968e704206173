"""
Command-line interface.

Subcommands: ``fit``, ``rank``, ``frontier``, ``plot``, ``sensitivity`` and
``path``. Commands that work on candidate models read either a dataset plus
a model list (fitting on the fly) or a precomputed ``label,f1,f2`` CSV given
with ``--fixture``; ``--fixture paper`` uses the bundled avian species
richness table.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from . import data as data_mod
from .errors import DataError, NumericalError, UsageError
from .fixtures import TABLE2_N, load_points, table2_points
from .glm import FAMILIES, fit_models, neg_log_likelihood
from .objectives import (ObjectivePoint, criterion, estimate_c_hat,
                         rank_models, sensitivity_report)
from .pareto import pareto_frontier
from .penalized import regularization_path, write_path_csv
from .svgplot import render_frontier_svg

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3
RANKABLE = ("aic", "aicc", "qaic", "qaicc", "bic")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_source(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("candidate models")
    g.add_argument("--fixture", help="precomputed label,f1,f2 CSV, or 'paper' for the bundled table")
    g.add_argument("--data", help="observation CSV")
    g.add_argument("--response", help="response column in --data")
    g.add_argument("--models", help="model-list file, or 'paper' for the bundled 24-model list")
    g.add_argument("--enumerate", action="store_true",
                   help="use every hierarchical linear/quadratic model of all covariates")
    g.add_argument("--family", choices=FAMILIES, default="poisson")
    g.add_argument("--no-standardize", dest="standardize", action="store_false")
    g.add_argument("--no-constant", dest="include_constant", action="store_false",
                   help="drop the data-only constant from f1")
    g.add_argument("--n", type=int, help="sample size (fixture mode, for AICc/BIC)")
    g.add_argument("--c-hat", type=float, help="overdispersion for QAIC/QAICc")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paretosel",
                     description="Model selection as fit-vs-complexity Pareto analysis.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit candidate models, write per-model results CSV")
    _add_source(p)
    p.add_argument("--output", required=True)

    p = sub.add_parser("rank", help="rank models under one criterion")
    _add_source(p)
    p.add_argument("--criterion", default="aic", type=str.lower)
    p.add_argument("--output")

    p = sub.add_parser("frontier", help="Pareto frontier report as JSON")
    _add_source(p)
    p.add_argument("--output")

    p = sub.add_parser("plot", help="SVG scatter of f1 against f2")
    _add_source(p)
    p.add_argument("--highlight", type=str.lower, default="",
                   help="ring the top model under this criterion")
    p.add_argument("--output", required=True)

    p = sub.add_parser("sensitivity", help="compare top models across criteria")
    _add_source(p)
    p.add_argument("--criterion", action="append", default=[],
                   help="criterion name; repeat or comma-separate, at least two")
    p.add_argument("--output")

    p = sub.add_parser("path", help="ridge or LASSO regularization path")
    p.add_argument("--data", required=True)
    p.add_argument("--response", required=True)
    p.add_argument("--formula", help="model formula; default: all covariates, linear")
    p.add_argument("--penalty", choices=("ridge", "lasso"), required=True)
    p.add_argument("--grid", required=True, help="comma-separated ascending w2 values")
    p.add_argument("--no-standardize", dest="standardize", action="store_false")
    p.add_argument("--output", required=True)
    return parser


def _specs(args, dataset):
    if args.enumerate == bool(args.models):
        raise UsageError("give exactly one of --models or --enumerate")
    if args.enumerate:
        return data_mod.enumerate_hierarchical_models(dataset.covariate_names)
    if args.models == "paper":
        specs = data_mod.paper_model_list()
        for s in specs:
            data_mod.parse_model_formula(s.label, dataset.covariate_names)
    else:
        specs = data_mod.load_model_list(args.models, dataset.covariate_names)
    if not specs:
        raise DataError("model list is empty")
    return specs


def _fit_all(args):
    if not args.data or not args.response:
        raise UsageError("--data and --response are required unless --fixture is given")
    dataset = data_mod.load_dataset(args.data, args.response)
    if args.family == "poisson":
        dataset.check_counts()
    fits = fit_models(dataset, _specs(args, dataset), args.family, args.standardize)
    if not any(f.converged for f in fits):
        raise NumericalError("no candidate model could be fit")
    return dataset, fits


def _points(args):
    """Objective points, sample size and c_hat for the chosen source."""
    if args.fixture:
        if args.data or args.models or args.enumerate:
            raise UsageError("--fixture cannot be combined with --data/--models/--enumerate")
        if args.fixture == "paper":
            return table2_points(), args.n or TABLE2_N, args.c_hat
        ps = load_points(args.fixture)
        if not ps.points:
            raise DataError(f"{args.fixture}: no usable rows")
        return ps.points, args.n or ps.n, args.c_hat
    dataset, fits = _fit_all(args)
    ok = [f for f in fits if f.converged]
    pts = [ObjectivePoint(f.label, neg_log_likelihood(f, args.include_constant),
                          float(f.p), f.p) for f in ok]
    c_hat = args.c_hat
    if c_hat is None and args.family == "poisson":
        c_hat = estimate_c_hat(ok)
    return pts, dataset.n, c_hat


def _criterion(name, c_hat):
    if name not in RANKABLE:
        raise UsageError(f"unknown criterion {name!r}; valid: {', '.join(RANKABLE)}")
    return criterion(name, c_hat=c_hat)


def cmd_fit(args) -> int:
    dataset, fits = _fit_all(args)
    with Path(args.output).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["label", "p", "n", "converged", "f1", "f2", "rss",
                    "pearson_chi_sq", "iterations", "message"])
        for f in fits:
            f1 = neg_log_likelihood(f, args.include_constant) if f.converged else float("nan")
            w.writerow([f.label, f.p, dataset.n, int(f.converged), repr(f1), f.p,
                        repr(f.rss), repr(f.pearson_chi_sq), f.iterations, f.message])
    n_ok = sum(f.converged for f in fits)
    print(f"fit {len(fits)} models ({n_ok} converged) -> {args.output}")
    return EXIT_OK


def cmd_rank(args) -> int:
    pts, n, c_hat = _points(args)
    table = rank_models(pts, _criterion(args.criterion, c_hat), n=n)
    print(table.format())
    print(f"\ntop model: {table.top.label}")
    if args.output:
        table.to_csv(args.output)
    return EXIT_OK


def cmd_frontier(args) -> int:
    pts, _, _ = _points(args)
    report = pareto_frontier(pts)
    text = report.to_json(args.output)
    if not args.output:
        print(text)
    print(f"{len(report.frontier)} Pareto optimal, {report.dominated_count} dominated "
          f"of {len(report.all_points)} models", file=sys.stderr if not args.output else sys.stdout)
    return EXIT_OK


def cmd_plot(args) -> int:
    pts, n, c_hat = _points(args)
    report = pareto_frontier(pts)
    target = None
    if args.highlight:
        target = rank_models(pts, _criterion(args.highlight, c_hat), n=n).top.label
    Path(args.output).write_text(render_frontier_svg(report, highlight=target), encoding="utf-8")
    print(f"wrote {args.output}")
    return EXIT_OK


def cmd_sensitivity(args) -> int:
    names = [c.strip().lower() for item in args.criterion for c in item.split(",") if c.strip()]
    if len(names) < 2:
        raise UsageError("sensitivity needs at least two criteria")
    pts, n, c_hat = _points(args)
    crits = [_criterion(name, c_hat) for name in names]
    report = sensitivity_report(pts, crits, n=n)
    print(report.format())
    if args.output:
        with Path(args.output).open("w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["criterion", "label", "p", "score", "agree"])
            for name, row in report.winners:
                w.writerow([name, row.label, row.p, repr(row.score), int(report.agree)])
    return EXIT_OK


def _grid(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse grid {text!r}") from None


def cmd_path(args) -> int:
    dataset = data_mod.load_dataset(args.data, args.response)
    if args.formula is None:
        spec = data_mod.ModelSpec(tuple((c, 1) for c in dataset.covariate_names))
    else:
        spec = data_mod.parse_model_formula(args.formula, dataset.covariate_names)
    design = data_mod.build_design_matrix(dataset, spec, standardize=args.standardize)
    gamma = 2 if args.penalty == "ridge" else 1
    points = regularization_path(design, dataset.response, gamma, _grid(args.grid))
    write_path_csv(points, args.output, design.column_names)
    print(f"wrote {len(points)} path points -> {args.output}")
    return EXIT_OK


COMMANDS = {
    "fit": cmd_fit, "rank": cmd_rank, "frontier": cmd_frontier, "plot": cmd_plot,
    "sensitivity": cmd_sensitivity, "path": cmd_path,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"paretosel: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, OSError) as exc:
        print(f"paretosel: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"paretosel: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
