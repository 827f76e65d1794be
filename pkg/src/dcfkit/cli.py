"""Command-line entry point: ``dcfkit value|sensitivity|wacc|comps``.

Exit status: 0 success, 2 parse error, 3 validation error, 4 numeric
divergence (perpetual growth not below the discount rate).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from .document import PeerDocument, ValuationDocument
from .errors import DivergentPerpetuityError, DocumentParseError, InputValidationError, ValuationError
from .report import ReportOptions, render_comps, render_grid, render_value, render_wacc
from .sensitivity import run_scenario, sweep

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_DIVERGENT = 0, 2, 3, 4

AXIS_PARAMS = {"wacc": "wacc", "growth": "perpetual_growth_rate", "cagr": "sales_cagr"}


class UsageError(Exception):
    pass


def parse_axis(spec: str) -> tuple[str, tuple[float, ...]]:
    """``growth=0,0.005,0.01`` (list) or ``growth=0.0:0.005:7`` (start:step:count)."""
    name, sep, values = spec.partition("=")
    name = name.strip()
    if not sep or name not in AXIS_PARAMS:
        raise UsageError(f"axis must look like <param>=<values> with param in {sorted(AXIS_PARAMS)}: {spec!r}")
    values = values.strip()
    try:
        if ":" in values:
            start, step, n = values.split(":")
            n = int(n)
            if n < 1:
                raise UsageError(f"axis count must be >= 1: {spec!r}")
            grid = tuple(round(float(start) + i * float(step), 12) for i in range(n))
        else:
            grid = tuple(float(v) for v in values.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"cannot read axis values: {spec!r}") from None
    if not grid:
        raise UsageError(f"axis has no values: {spec!r}")
    return AXIS_PARAMS[name], grid


def _options(args) -> ReportOptions:
    return ReportOptions(format=args.format)


def cmd_value(args) -> str:
    doc = ValuationDocument.load(args.input)
    scenario = doc.scenario(args.scenario)
    result = run_scenario(scenario)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    title = f"{doc.name}: DCF valuation ({args.scenario})"
    return render_value(result, _options(args), title=title, currency=doc.currency)


def cmd_sensitivity(args) -> str:
    row_param, row_values = parse_axis(args.rows)
    col_param, col_values = parse_axis(args.cols)
    if row_param == col_param:
        raise UsageError("--rows and --cols must name different parameters")
    doc = ValuationDocument.load(args.input)
    grid = sweep(doc.scenario(args.scenario), row_param, row_values, col_param, col_values)
    return render_grid(grid, _options(args), title=f"{doc.name}: sensitivity analysis ({args.scenario})")


def cmd_wacc(args) -> str:
    doc = ValuationDocument.load(args.input)
    build = doc.wacc_build(args.scenario)
    if build is None:
        raise DocumentParseError(f"{args.input}: missing section", field="capital")
    return render_wacc(build, _options(args), title=f"{doc.name}: WACC calculation")


def cmd_comps(args) -> str:
    doc = PeerDocument.load(args.input)
    return render_comps(doc, _options(args))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcfkit", description="Deterministic DCF valuation engine")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=True):
        p.add_argument("--input", "-i", required=True, help="JSON input document")
        if scenario:
            p.add_argument("--scenario", default="base", help="scenario label (default: base)")
        p.add_argument("--format", choices=("table", "csv"), default="table")
        p.add_argument("--out", "-o", help="write report here instead of stdout")

    p = sub.add_parser("value", help="full DCF valuation")
    common(p)
    p.set_defaults(func=cmd_value)

    p = sub.add_parser("sensitivity", help="two-way sensitivity grid of the fair share price")
    common(p)
    p.add_argument("--rows", required=True, help="e.g. growth=0:0.005:7 or wacc=0.085,0.09")
    p.add_argument("--cols", required=True, help="e.g. wacc=0.07:0.005:9")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("wacc", help="WACC build-up")
    common(p)
    p.set_defaults(func=cmd_wacc)

    p = sub.add_parser("comps", help="trading or transaction comparables table")
    common(p, scenario=False)
    p.set_defaults(func=cmd_comps)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except DocumentParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except DivergentPerpetuityError as exc:
        print(f"divergent perpetuity: {exc}", file=sys.stderr)
        return EXIT_DIVERGENT
    except (InputValidationError, ValuationError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.out:
        Path(args.out).write_text(report, encoding="utf-8", newline="")
    else:
        sys.stdout.write(report)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
