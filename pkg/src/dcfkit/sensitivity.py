"""Scenarios and two-way sensitivity grids of the fair share price.

A grid sweeps two of ``wacc``, ``perpetual_growth_rate`` and ``sales_cagr`` and
reports each cell's price as an offset from the base-case price.  WACC cells
override the discount rate directly; capital-structure inputs are not
back-solved.  Cells with ``g >= r`` are marked unavailable (NaN), never
extrapolated.
"""

from __future__ import annotations

import itertools
from concurrent.futures import Executor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .capital import CapitalInputs, wacc
from .dcf import BridgeItems, TerminalParams, ValuationResult, company_value
from .errors import DegenerateInputError, DivergentPerpetuityError, InputValidationError
from .forecast import FcffSeries, ForecastLine, build_series, realized_cagr, regrow_series

PARAMS = ("wacc", "perpetual_growth_rate", "sales_cagr")
BASE_TOL = 1e-12


def _check_label(label: str) -> None:
    if label in ("base", "bull", "bear"):
        return
    if label.startswith("custom:") and len(label) > len("custom:"):
        return
    raise InputValidationError(f"scenario label must be base, bull, bear or custom:<name>, got {label!r}")


@dataclass(frozen=True)
class Scenario:
    """A complete set of valuation inputs.

    ``discount_rate`` overrides the WACC derived from ``capital``; at least one
    of the two must be given.
    """

    label: str
    lines: tuple[ForecastLine, ...]
    post_horizon: ForecastLine
    perpetual_growth_rate: float
    bridge: BridgeItems
    shares: float
    capital: CapitalInputs | None = None
    discount_rate: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "lines", tuple(self.lines))
        _check_label(self.label)
        if self.capital is None and self.discount_rate is None:
            raise InputValidationError("scenario needs capital inputs or an explicit discount rate")

    def series(self) -> FcffSeries:
        return build_series(self.lines, self.post_horizon)

    def resolved_discount_rate(self) -> float:
        if self.discount_rate is not None:
            return self.discount_rate
        return wacc(self.capital)

    def terminal(self) -> TerminalParams:
        return TerminalParams(self.perpetual_growth_rate, self.resolved_discount_rate())


def run_scenario(scenario: Scenario) -> ValuationResult:
    return company_value(scenario.series(), scenario.terminal(), scenario.bridge, scenario.shares)


@dataclass(frozen=True)
class SensitivityGrid:
    row_param: str
    col_param: str
    row_values: tuple[float, ...]
    col_values: tuple[float, ...]
    base_price: float
    prices: np.ndarray = field(repr=False)
    offsets: np.ndarray = field(repr=False)
    base_cell: tuple[int, int] | None = None

    @property
    def available(self) -> np.ndarray:
        return ~np.isnan(self.offsets)

    @property
    def shape(self) -> tuple[int, int]:
        return self.offsets.shape


def _base_values(scenario: Scenario, series: FcffSeries) -> dict[str, float]:
    base = {
        "wacc": scenario.resolved_discount_rate(),
        "perpetual_growth_rate": scenario.perpetual_growth_rate,
    }
    if len(series) >= 2:
        base["sales_cagr"] = realized_cagr(series)
    return base


def _snap(values: tuple[float, ...], base: float | None) -> tuple[float, ...]:
    if base is None:
        return values
    return tuple(base if abs(v - base) <= BASE_TOL else v for v in values)


def evaluate_cell(scenario: Scenario, overrides: dict[str, float]) -> float:
    """Fair share price with some of wacc / growth / sales CAGR overridden.

    Returns NaN when the overridden growth rate is not below the discount rate.
    """
    unknown = set(overrides) - set(PARAMS)
    if unknown:
        raise InputValidationError(f"unknown sensitivity parameter(s): {sorted(unknown)}")
    series = scenario.series()
    if "sales_cagr" in overrides:
        series = regrow_series(series, overrides["sales_cagr"])
    r = overrides.get("wacc", scenario.resolved_discount_rate())
    g = overrides.get("perpetual_growth_rate", scenario.perpetual_growth_rate)
    try:
        params = TerminalParams(g, r)
    except DivergentPerpetuityError:
        return float("nan")
    return company_value(series, params, scenario.bridge, scenario.shares).fair_share_price


def sweep(
    scenario: Scenario,
    row_param: str,
    row_values: Sequence[float],
    col_param: str,
    col_values: Sequence[float],
    executor: Executor | None = None,
    order: Iterable[tuple[int, int]] | None = None,
) -> SensitivityGrid:
    """Revalue the scenario over a two-parameter grid.

    Cells are independent; pass an ``executor`` to evaluate them concurrently.
    ``order`` only changes the evaluation sequence, never the result.
    """
    if row_param not in PARAMS or col_param not in PARAMS:
        raise InputValidationError(f"sensitivity parameters must be among {PARAMS}")
    if row_param == col_param:
        raise InputValidationError("row and column parameters must differ")
    row_values = tuple(float(v) for v in row_values)
    col_values = tuple(float(v) for v in col_values)
    if not row_values or not col_values:
        raise InputValidationError("sensitivity axes must be non-empty")
    for v in itertools.chain(row_values, col_values):
        if not np.isfinite(v):
            raise InputValidationError("sensitivity axis values must be finite")
    if "sales_cagr" in (row_param, col_param):
        axis = row_values if row_param == "sales_cagr" else col_values
        if any(v <= -1.0 for v in axis):
            raise InputValidationError("sales CAGR values must be > -1")

    base_price = run_scenario(scenario).fair_share_price
    if base_price == 0 or not np.isfinite(base_price):
        raise DegenerateInputError("base fair share price is zero; offsets are undefined")
    base = _base_values(scenario, scenario.series())
    # snap axis values within rounding noise of the base onto it, so the base cell is exact
    row_values = _snap(row_values, base.get(row_param))
    col_values = _snap(col_values, base.get(col_param))

    cells = list(order) if order is not None else list(
        itertools.product(range(len(row_values)), range(len(col_values)))
    )
    if sorted(cells) != list(itertools.product(range(len(row_values)), range(len(col_values)))):
        raise InputValidationError("order must visit every cell exactly once")
    jobs = [{row_param: row_values[i], col_param: col_values[j]} for i, j in cells]
    if executor is None:
        results = [evaluate_cell(scenario, ov) for ov in jobs]
    else:
        results = list(executor.map(evaluate_cell, itertools.repeat(scenario), jobs))

    prices = np.full((len(row_values), len(col_values)), np.nan)
    for (i, j), price in zip(cells, results):
        prices[i, j] = price
    offsets = prices / base_price - 1.0

    base_cell = None
    rb, cb = base.get(row_param), base.get(col_param)
    for i, j in itertools.product(range(len(row_values)), range(len(col_values))):
        if (
            rb is not None
            and cb is not None
            and abs(row_values[i] - rb) <= BASE_TOL
            and abs(col_values[j] - cb) <= BASE_TOL
        ):
            base_cell = (i, j)
            break
    return SensitivityGrid(
        row_param=row_param,
        col_param=col_param,
        row_values=row_values,
        col_values=col_values,
        base_price=base_price,
        prices=prices,
        offsets=offsets,
        base_cell=base_cell,
    )


def sweep_wacc_growth(
    scenario: Scenario, wacc_values: Sequence[float], growth_values: Sequence[float], **kwargs
) -> SensitivityGrid:
    """Rows are perpetual growth rates, columns are WACCs."""
    return sweep(scenario, "perpetual_growth_rate", growth_values, "wacc", wacc_values, **kwargs)


def sweep_cagr_growth(
    scenario: Scenario, cagr_values: Sequence[float], growth_values: Sequence[float], **kwargs
) -> SensitivityGrid:
    """Rows are horizon sales CAGRs, columns are perpetual growth rates; WACC stays at base."""
    return sweep(scenario, "sales_cagr", cagr_values, "perpetual_growth_rate", growth_values, **kwargs)
