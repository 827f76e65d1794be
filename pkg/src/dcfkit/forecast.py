"""Driver-based free-cash-flow-to-firm forecasting.

A forecast year is described by its operating drivers (sales, EBIT margin,
D&A, Capex, increase in net working capital, tax rate).  FCFF follows as::

    FCFF = EBIT * (1 - t) + D&A - Capex - increase in NWC

Capex and the NWC increase are carried as positive outflow amounts and
subtracted; taxes are a flat rate on EBIT with no loss carry-forwards.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

from .errors import DegenerateInputError, InputValidationError

MAX_HORIZON_YEARS = 50


@dataclass(frozen=True)
class ForecastLine:
    """Operating drivers for one forecast year (monetary amounts in EURm)."""

    year: int
    sales: float
    ebit_margin: float
    d_and_a: float
    capex: float
    delta_nwc: float
    tax_rate: float

    def __post_init__(self) -> None:
        for name in ("sales", "ebit_margin", "d_and_a", "capex", "delta_nwc", "tax_rate"):
            if not math.isfinite(getattr(self, name)):
                raise InputValidationError(f"{name} must be finite for year {self.year}")
        if self.sales < 0:
            raise InputValidationError(f"sales must be >= 0 for year {self.year}")
        if not 0.0 <= self.tax_rate < 1.0:
            raise InputValidationError(f"tax_rate must lie in [0, 1) for year {self.year}")


@dataclass(frozen=True)
class FcffLine:
    """A forecast line together with its derived income and cash-flow items."""

    line: ForecastLine
    ebit: float
    taxes: float
    nopat: float
    fcff: float

    @property
    def year(self) -> int:
        return self.line.year


@dataclass(frozen=True)
class FcffSeries:
    horizon_lines: tuple[FcffLine, ...]
    post_horizon: FcffLine

    @property
    def years(self) -> tuple[int, ...]:
        return tuple(fl.year for fl in self.horizon_lines)

    @property
    def fcffs(self) -> tuple[float, ...]:
        return tuple(fl.fcff for fl in self.horizon_lines)

    @property
    def post_horizon_fcff(self) -> float:
        return self.post_horizon.fcff

    @property
    def forecast_lines(self) -> tuple[ForecastLine, ...]:
        return tuple(fl.line for fl in self.horizon_lines)

    def __len__(self) -> int:
        return len(self.horizon_lines)


def breakdown(line: ForecastLine) -> FcffLine:
    """Compute EBIT, taxes, NOPAT and FCFF for one line."""
    ebit = line.sales * line.ebit_margin
    taxes = ebit * line.tax_rate
    nopat = ebit - taxes
    fcff = nopat + line.d_and_a - line.capex - line.delta_nwc
    return FcffLine(line=line, ebit=ebit, taxes=taxes, nopat=nopat, fcff=fcff)


def compute_fcff(line: ForecastLine) -> float:
    return breakdown(line).fcff


def build_series(lines: Sequence[ForecastLine], post_horizon: ForecastLine) -> FcffSeries:
    """Materialize the FCFF series for a horizon plus the first post-horizon year.

    Raises
    ------
    InputValidationError
        If the horizon is empty, longer than 50 years, or the years (including
        the post-horizon year) are not consecutive.
    """
    lines = tuple(lines)
    if not lines:
        raise InputValidationError("forecast horizon is empty")
    if len(lines) > MAX_HORIZON_YEARS:
        raise InputValidationError(
            f"forecast horizon of {len(lines)} years exceeds {MAX_HORIZON_YEARS}"
        )
    years = [ln.year for ln in lines] + [post_horizon.year]
    for prev, cur in zip(years, years[1:]):
        if cur != prev + 1:
            raise InputValidationError(f"forecast years not consecutive: {prev} -> {cur}")
    return FcffSeries(
        horizon_lines=tuple(breakdown(ln) for ln in lines),
        post_horizon=breakdown(post_horizon),
    )


def realized_cagr(series: FcffSeries) -> float:
    """Sales CAGR from the first to the last horizon year."""
    lines = series.forecast_lines
    if len(lines) < 2:
        raise DegenerateInputError("sales CAGR needs at least two horizon years")
    first, last = lines[0].sales, lines[-1].sales
    if first <= 0 or last <= 0:
        raise DegenerateInputError("sales CAGR undefined for non-positive sales")
    return (last / first) ** (1.0 / (len(lines) - 1)) - 1.0


def _scale_line(line: ForecastLine, factor: float) -> ForecastLine:
    return replace(
        line,
        sales=line.sales * factor,
        d_and_a=line.d_and_a * factor,
        capex=line.capex * factor,
        delta_nwc=line.delta_nwc * factor,
    )


def regrow_series(series: FcffSeries, sales_cagr: float) -> FcffSeries:
    """Re-run the forecast with the horizon's sales compounding at ``sales_cagr``.

    First-year sales stay put.  Year ``k`` years after the first is scaled by
    ``((1 + sales_cagr) / (1 + realized)) ** k`` so the year-to-year shape of the
    original path is kept while its horizon CAGR becomes ``sales_cagr``.  EBIT
    margins and tax rates are unchanged; D&A, Capex and NWC increase move in
    proportion to sales.  The post-horizon year is rescaled the same way.

    Passing the series' own :func:`realized_cagr` returns identical cash flows.
    """
    if not sales_cagr > -1.0:
        raise InputValidationError("sales_cagr must be > -1")
    base = realized_cagr(series)
    ratio = (1.0 + sales_cagr) / (1.0 + base)
    lines = series.forecast_lines
    regrown = [_scale_line(ln, ratio**k) for k, ln in enumerate(lines)]
    post = _scale_line(series.post_horizon.line, ratio ** len(lines))
    return build_series(regrown, post)
