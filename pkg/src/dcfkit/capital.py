"""Cost of capital: CAPM cost of equity, after-tax cost of debt, and WACC.

Betas are levered and unlevered with the Hamada relation
``beta_L = beta_U * (1 + (1 - t) * D/E)``.  Multi-tranche debt is blended with
market-value weights before the tax shield is applied.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInputError, InputValidationError


def _check_tax(tax_rate: float) -> None:
    if not 0.0 <= tax_rate < 1.0:
        raise InputValidationError(f"tax_rate must lie in [0, 1), got {tax_rate}")


@dataclass(frozen=True)
class CapmInputs:
    risk_free_rate: float
    market_return: float
    beta_levered: float

    def __post_init__(self) -> None:
        if not all(map(math.isfinite, (self.risk_free_rate, self.market_return, self.beta_levered))):
            raise InputValidationError("CAPM inputs must be finite")


@dataclass(frozen=True)
class DebtTranche:
    market_value: float
    interest_rate: float
    name: str = ""

    def __post_init__(self) -> None:
        if not (math.isfinite(self.market_value) and self.market_value >= 0):
            raise InputValidationError(f"tranche {self.name!r}: market_value must be >= 0")
        if not math.isfinite(self.interest_rate):
            raise InputValidationError(f"tranche {self.name!r}: interest_rate must be finite")


@dataclass(frozen=True)
class CapitalInputs:
    """Everything feeding the WACC.  Amounts in EURm, rates as fractions."""

    equity_value: float
    capm: CapmInputs
    tax_rate: float
    tranches: tuple[DebtTranche, ...] = ()
    preferred_value: float = 0.0
    cost_of_preferred: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "tranches", tuple(self.tranches))
        _check_tax(self.tax_rate)
        if not (math.isfinite(self.equity_value) and self.equity_value >= 0):
            raise InputValidationError("equity_value must be >= 0")
        if not (math.isfinite(self.preferred_value) and self.preferred_value >= 0):
            raise InputValidationError("preferred_value must be >= 0")

    @property
    def debt_value(self) -> float:
        return math.fsum(t.market_value for t in self.tranches)

    @property
    def total_capital(self) -> float:
        return self.equity_value + self.debt_value + self.preferred_value


@dataclass(frozen=True)
class ReturnSeries:
    """Paired periodic excess returns of a stock and of the market."""

    stock_excess_returns: tuple[float, ...]
    market_excess_returns: tuple[float, ...]

    def __post_init__(self) -> None:
        stock = tuple(float(x) for x in self.stock_excess_returns)
        market = tuple(float(x) for x in self.market_excess_returns)
        if len(stock) != len(market):
            raise InputValidationError("stock and market return series differ in length")
        if len(stock) < 2:
            raise InputValidationError("beta regression needs at least two observations")
        object.__setattr__(self, "stock_excess_returns", stock)
        object.__setattr__(self, "market_excess_returns", market)


def cost_of_equity(capm: CapmInputs) -> float:
    return capm.risk_free_rate + capm.beta_levered * (capm.market_return - capm.risk_free_rate)


def estimate_beta(returns: ReturnSeries) -> float:
    """OLS slope of stock excess returns on market excess returns.

    Covariance and variance are both population-normalized (divide by N); the
    ratio does not depend on the choice.
    """
    stock = np.asarray(returns.stock_excess_returns)
    market = np.asarray(returns.market_excess_returns)
    dm = market - market.mean()
    var = float(np.mean(dm * dm))
    if var <= 0.0:
        raise DegenerateInputError("market return series has zero variance")
    cov = float(np.mean(dm * (stock - stock.mean())))
    return cov / var


def relever_beta(beta_unlevered: float, debt_to_equity: float, tax_rate: float) -> float:
    if debt_to_equity < 0:
        raise InputValidationError("debt_to_equity must be >= 0")
    _check_tax(tax_rate)
    return beta_unlevered * (1.0 + (1.0 - tax_rate) * debt_to_equity)


def unlever_beta(beta_levered: float, debt_to_equity: float, tax_rate: float) -> float:
    if debt_to_equity < 0:
        raise InputValidationError("debt_to_equity must be >= 0")
    _check_tax(tax_rate)
    return beta_levered / (1.0 + (1.0 - tax_rate) * debt_to_equity)


def peer_median_beta(
    peers: Iterable[tuple[float, float, float]],
    target_debt_to_equity: float,
    target_tax_rate: float,
) -> float:
    """Relever the median unlevered beta of a peer group to the target's structure.

    ``peers`` yields ``(beta_levered, debt_to_equity, tax_rate)`` per peer.  An even
    peer count takes the midpoint of the two central unlevered betas.
    """
    unlevered = [unlever_beta(b, de, t) for b, de, t in peers]
    if not unlevered:
        raise DegenerateInputError("peer group is empty")
    return relever_beta(statistics.median(unlevered), target_debt_to_equity, target_tax_rate)


def cost_of_debt(interest_rate: float, tax_rate: float) -> float:
    _check_tax(tax_rate)
    return interest_rate * (1.0 - tax_rate)


def pre_tax_cost_of_debt(tranches: Sequence[DebtTranche]) -> float:
    total = math.fsum(t.market_value for t in tranches)
    if total <= 0:
        raise DegenerateInputError("total debt market value is zero")
    return math.fsum(t.market_value / total * t.interest_rate for t in tranches)


def blended_cost_of_debt(tranches: Sequence[DebtTranche], tax_rate: float) -> float:
    """After-tax, market-value-weighted cost of several debt tranches."""
    _check_tax(tax_rate)
    return (1.0 - tax_rate) * pre_tax_cost_of_debt(tranches)


def wacc(inputs: CapitalInputs) -> float:
    """Weighted average cost of capital over equity, debt and preferred capital."""
    total = inputs.total_capital
    if total <= 0:
        raise DegenerateInputError("total capital (E + D + P) is zero")
    result = inputs.equity_value / total * cost_of_equity(inputs.capm)
    debt = inputs.debt_value
    if debt > 0:
        result += debt / total * blended_cost_of_debt(inputs.tranches, inputs.tax_rate)
    if inputs.preferred_value > 0:
        result += inputs.preferred_value / total * inputs.cost_of_preferred
    return result


@dataclass(frozen=True)
class WaccBuild:
    """Line-by-line derivation of a discount rate, as laid out in a WACC table."""

    risk_free_rate: float
    beta_unlevered: float | None
    beta_levered: float
    market_return: float
    cost_of_equity: float
    credit_spread: float | None
    cost_of_debt_pre_tax: float | None
    cost_of_debt_after_tax: float | None
    weight_equity: float
    weight_debt: float
    weight_preferred: float
    wacc: float
    inputs: CapitalInputs = field(repr=False)


def build_wacc(
    *,
    risk_free_rate: float,
    market_return: float,
    equity_value: float,
    tax_rate: float,
    tranches: Sequence[DebtTranche] = (),
    beta_levered: float | None = None,
    beta_unlevered: float | None = None,
    beta_decimals: int | None = None,
    preferred_value: float = 0.0,
    cost_of_preferred: float = 0.0,
) -> WaccBuild:
    """Derive the WACC from market inputs.

    Exactly one of ``beta_levered`` / ``beta_unlevered`` is given.  An unlevered
    beta is relevered to the book's own D/E.  ``beta_decimals`` rounds the
    levered beta before it enters CAPM, which is how quoted betas (``1.2``) are
    normally carried through a valuation.
    """
    if (beta_levered is None) == (beta_unlevered is None):
        raise InputValidationError("give exactly one of beta_levered or beta_unlevered")
    tranches = tuple(tranches)
    debt = math.fsum(t.market_value for t in tranches)
    if beta_unlevered is not None:
        if equity_value <= 0:
            raise DegenerateInputError("cannot relever beta with zero equity value")
        beta_levered = relever_beta(beta_unlevered, debt / equity_value, tax_rate)
    if beta_decimals is not None:
        beta_levered = round(beta_levered, beta_decimals)

    inputs = CapitalInputs(
        equity_value=equity_value,
        capm=CapmInputs(risk_free_rate, market_return, beta_levered),
        tax_rate=tax_rate,
        tranches=tranches,
        preferred_value=preferred_value,
        cost_of_preferred=cost_of_preferred,
    )
    total = inputs.total_capital
    if total <= 0:
        raise DegenerateInputError("total capital (E + D + P) is zero")
    if debt > 0:
        pre = pre_tax_cost_of_debt(tranches)
        spread, after = pre - risk_free_rate, cost_of_debt(pre, tax_rate)
    else:
        pre = spread = after = None
    return WaccBuild(
        risk_free_rate=risk_free_rate,
        beta_unlevered=beta_unlevered,
        beta_levered=beta_levered,
        market_return=market_return,
        cost_of_equity=cost_of_equity(inputs.capm),
        credit_spread=spread,
        cost_of_debt_pre_tax=pre,
        cost_of_debt_after_tax=after,
        weight_equity=equity_value / total,
        weight_debt=debt / total,
        weight_preferred=preferred_value / total,
        wacc=wacc(inputs),
        inputs=inputs,
    )
