"""Plain-text and CSV rendering of valuation outputs.

Tables are presentation views: numbers are rounded only here.  CSV output
carries full float precision (shortest round-trip repr), a dot decimal
separator, no thousands separators, and ``\\n`` line endings.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .capital import WaccBuild
from .comps import MAJORITY_PREMIUM_NOTE, MULTIPLE_LABELS, MULTIPLES, aggregate_multiples
from .dcf import ValuationResult
from .errors import EmptyAggregateError
from .sensitivity import SensitivityGrid

FORMATS = ("table", "csv")

PARAM_LABELS = {
    "wacc": "WACC",
    "perpetual_growth_rate": "Perpetual growth rate",
    "sales_cagr": "Sales CAGR",
}


@dataclass(frozen=True)
class ReportOptions:
    format: str = "table"
    money_decimals: int = 2
    rate_decimals: int = 1
    offset_decimals: int = 1
    multiple_decimals: int | None = None

    def __post_init__(self) -> None:
        if self.format not in FORMATS:
            raise ValueError(f"unknown output format {self.format!r}; expected one of {FORMATS}")


# --- number formatting ----------------------------------------------------

def money(x: float, decimals: int = 2, negative_parens: bool = False) -> str:
    if negative_parens:
        return f"({abs(x):,.{decimals}f})"
    s = f"{x:,.{decimals}f}"
    return s[1:] if s.startswith("-") and float(s[1:].replace(",", "")) == 0 else s


def pct(x: float, decimals: int = 1) -> str:
    s = f"{x * 100:.{decimals}f}%"
    return s[1:] if s.startswith("-") and float(s[1:-1]) == 0 else s


def axis_pct(x: float) -> str:
    """Shortest of 1-3 decimals that shows the axis value exactly."""
    for d in (1, 2, 3):
        if abs(round(x * 100, d) - x * 100) < 1e-9:
            return pct(x, d)
    return pct(x, 4)


def count(x: float) -> str:
    return f"{x:,.0f}" if float(x).is_integer() else f"{x:,.2f}"


def _layout(rows: Sequence[Sequence[str]], left: int = 1) -> str:
    """Left-align the first ``left`` columns and right-align the rest."""
    width = max(len(r) for r in rows)
    cols = [max((len(r[i]) for r in rows if i < len(r)), default=0) for i in range(width)]
    out = []
    for r in rows:
        cells = [
            (c.ljust(cols[i]) if i < left else c.rjust(cols[i])) for i, c in enumerate(r)
        ]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out) + "\n"


# --- CSV ------------------------------------------------------------------

def emit_csv(rows: Iterable[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(["" if c is None else (repr(float(c)) if isinstance(c, float) else c) for c in row])
    return buf.getvalue()


def parse_csv(text: str) -> list[list[str]]:
    return [row for row in csv.reader(io.StringIO(text))]


def parse_value_csv(text: str) -> dict[tuple[str, str], float]:
    """Read a ``value`` CSV back into ``{(item, period): value}``."""
    rows = parse_csv(text)
    if not rows or rows[0] != ["item", "period", "value"]:
        raise ValueError("not a valuation CSV (expected header item,period,value)")
    return {(item, period): float(value) for item, period, value in rows[1:]}


# --- valuation ------------------------------------------------------------

_BRIDGE_LABELS = (
    ("minority_interests", "Minorities"),
    ("pension_deficit", "Pension deficit"),
    ("off_balance_obligations", "Off-balance obligations"),
    ("associated_companies", "Associated companies"),
)


def value_rows(result: ValuationResult) -> list[list[object]]:
    rows: list[list[object]] = [["item", "period", "value"]]
    for year, f, d in zip(result.years, result.fcffs, result.discounted_fcffs):
        rows.append(["fcff", str(year), f])
        rows.append(["npv", str(year), d])
    rows += [
        ["fcff", "TV", result.post_horizon_fcff],
        ["terminal_value", "TV", result.terminal_value],
        ["npv", "TV", result.discounted_tv],
        ["enterprise_value", "", result.enterprise_value],
        ["net_debt", "", result.net_debt],
    ]
    for key, _ in _BRIDGE_LABELS:
        rows.append([key, "", float(getattr(result.bridge, key))])
    rows += [
        ["equity_value", "", result.equity_value],
        ["shares_outstanding", "", float(result.shares_outstanding)],
        ["fair_share_price", "", result.fair_share_price],
        ["discount_rate", "", result.discount_rate],
        ["perpetual_growth_rate", "", result.perpetual_growth_rate],
    ]
    return rows


def render_value(
    result: ValuationResult, options: ReportOptions, title: str = "", currency: str = "EUR"
) -> str:
    if options.format == "csv":
        return emit_csv(value_rows(result))
    dp = options.money_decimals
    unit = f"({currency}m)"
    periods = [f"{y}E" for y in result.years]
    rows = [
        ["Period", *periods, "TV"],
        [f"FCFF {unit}", *(money(f, dp) for f in result.fcffs), "-"],
        [f"NPV {unit}", *(money(d, dp) for d in result.discounted_fcffs), money(result.discounted_tv, dp)],
    ]
    summary = [
        [f"EV {unit}", money(result.enterprise_value, dp)],
        [f"Net debt {unit}", money(result.net_debt, dp, negative_parens=True)],
    ]
    for key, label in _BRIDGE_LABELS:
        value = getattr(result.bridge, key)
        if key == "minority_interests" or value:
            summary.append([f"{label} {unit}", money(value, dp, negative_parens=True)])
    summary += [
        [f"Eq.V. {unit}", money(result.equity_value, dp)],
        ["No. of shares (m)", count(result.shares_outstanding)],
        ["Fair share price", money(result.fair_share_price, dp)],
    ]
    head = []
    if title:
        head.append(title)
    head.append(
        f"WACC {pct(result.discount_rate, options.rate_decimals)}, "
        f"perpetual growth {pct(result.perpetual_growth_rate, options.rate_decimals)}, "
        f"TV {result.terminal_value:,.{dp}f} ({pct(result.tv_share_of_ev, 1)} of EV)"
    )
    return "\n".join(head) + "\n\n" + _layout(rows) + "\n" + _layout(summary)


# --- sensitivity ----------------------------------------------------------

def grid_rows(grid: SensitivityGrid) -> list[list[object]]:
    rows: list[list[object]] = [["row_param", "col_param", "row_value", "col_value", "price", "offset"]]
    for i, rv in enumerate(grid.row_values):
        for j, cv in enumerate(grid.col_values):
            price, off = grid.prices[i, j], grid.offsets[i, j]
            rows.append(
                [
                    grid.row_param,
                    grid.col_param,
                    rv,
                    cv,
                    None if math.isnan(price) else float(price),
                    None if math.isnan(off) else float(off),
                ]
            )
    return rows


def render_grid(grid: SensitivityGrid, options: ReportOptions, title: str = "") -> str:
    if options.format == "csv":
        return emit_csv(grid_rows(grid))
    corner = f"{PARAM_LABELS[grid.row_param]} \\ {PARAM_LABELS[grid.col_param]}"
    rows = [[corner, *(axis_pct(v) for v in grid.col_values)]]
    for i, rv in enumerate(grid.row_values):
        cells = []
        for j in range(len(grid.col_values)):
            off = grid.offsets[i, j]
            text = "n/a" if math.isnan(off) else pct(off, options.offset_decimals)
            cells.append(f"[{text}]" if grid.base_cell == (i, j) else text)
        rows.append([axis_pct(rv), *cells])
    head = (title + "\n") if title else ""
    head += (
        f"Offsets from base fair share price {money(grid.base_price, options.money_decimals)}"
        + ("; base case in brackets" if grid.base_cell else "")
        + "\n\n"
    )
    return head + _layout(rows)


# --- WACC -----------------------------------------------------------------

def wacc_rows(build: WaccBuild) -> list[list[object]]:
    fields = (
        "risk_free_rate",
        "beta_unlevered",
        "beta_levered",
        "market_return",
        "cost_of_equity",
        "credit_spread",
        "cost_of_debt_pre_tax",
        "cost_of_debt_after_tax",
        "weight_equity",
        "weight_debt",
        "weight_preferred",
        "wacc",
    )
    return [["item", "value"]] + [[f, getattr(build, f)] for f in fields]


def render_wacc(build: WaccBuild, options: ReportOptions, title: str = "") -> str:
    if options.format == "csv":
        return emit_csv(wacc_rows(build))
    rd = options.rate_decimals

    def rate(x):
        return "-" if x is None else pct(x, rd)

    def beta(x):
        return "-" if x is None else f"{x:.{rd}f}"

    rows = [
        ["Cost of Equity (%)", ""],
        ["Risk free rate (%)", rate(build.risk_free_rate)],
        ["Unlevered Beta", beta(build.beta_unlevered)],
        ["Levered Beta", beta(build.beta_levered)],
        ["Market return (%)", rate(build.market_return)],
        ["CAPM required RoE", rate(build.cost_of_equity)],
        ["Cost of Debt (%)", ""],
        ["Average Credit Spread (%)", rate(build.credit_spread)],
        ["Cost of Debt before taxes", rate(build.cost_of_debt_pre_tax)],
        ["CoD adjusted for tax", rate(build.cost_of_debt_after_tax)],
    ]
    if build.weight_preferred > 0:
        rows.append(["Cost of Preferred Capital", rate(build.inputs.cost_of_preferred)])
    rows.append(["WACC", rate(build.wacc)])
    head = (title + "\n\n") if title else ""
    return head + _layout(rows)


# --- comparables ----------------------------------------------------------

def _columns(doc) -> list[tuple[str, str | None]]:
    if doc.kind == "trading":
        return [(m, p) for m in MULTIPLES for p in doc.periods]
    return [(m, None) for m in MULTIPLES]


def _aggregates(doc) -> dict[tuple[str, str | None], object]:
    out = {}
    for col in _columns(doc):
        try:
            out[col] = aggregate_multiples(doc.entries, *col)
        except EmptyAggregateError:
            out[col] = None
    return out


def comps_rows(doc) -> list[list[object]]:
    rows: list[list[object]] = [["name", "multiple", "period", "value"]]
    for e in doc.entries:
        name = e.name if doc.kind == "trading" else e.target
        for m, p in _columns(doc):
            rows.append([name, m, p or "", e.get(m, p)])
    aggs = _aggregates(doc)
    for stat in ("mean", "median"):
        for (m, p), agg in aggs.items():
            rows.append([stat.capitalize(), m, p or "", None if agg is None else getattr(agg, stat)])
    return rows


def render_comps(doc, options: ReportOptions) -> str:
    if options.format == "csv":
        return emit_csv(comps_rows(doc))
    dp = options.multiple_decimals
    if dp is None:
        dp = 1 if doc.kind == "trading" else 2

    def mult(v):
        return "" if v is None else f"{v:.{dp}f}x"

    cols = _columns(doc)
    aggs = _aggregates(doc)
    if doc.kind == "trading":
        header1 = ["Company"] + [MULTIPLE_LABELS[m] if p == doc.periods[0] else "" for m, p in cols]
        header2 = [""] + [p for _, p in cols]
        rows = [header1, header2]
        for e in doc.entries:
            rows.append([e.name] + [mult(e.get(m, p)) for m, p in cols])
        left = 1
        pad = []
    else:
        rows = [["Target", "Acquirer", "Date", "EV (EURm)"] + [MULTIPLE_LABELS[m] for m, _ in cols]]
        for e in doc.entries:
            rows.append(
                [e.target, e.acquirer, e.date.isoformat(), money(e.ev, 2)] + [mult(e.get(m)) for m, _ in cols]
            )
        left = 3
        pad = ["", "", ""]
    for stat in ("mean", "median"):
        rows.append(
            [stat.capitalize(), *pad]
            + [mult(None if aggs[c] is None else getattr(aggs[c], stat)) for c in cols]
        )
    text = (doc.title + "\n\n" if doc.title else "") + _layout(rows, left=left)
    notes = []
    for e in doc.entries:
        notes.extend(getattr(e, "warnings", ()))
    if doc.kind == "trading":
        notes.append(MAJORITY_PREMIUM_NOTE)
    if not notes:
        return text
    return text + "\n" + "\n".join(f"Note: {n}" for n in notes) + "\n"
