"""Discounting, Gordon terminal value, and the enterprise-to-equity bridge.

Timing convention: horizon year ``k`` (1-based) is discounted by ``(1+r)**k``.
The terminal value is the Gordon perpetuity on the first post-horizon FCFF,
``FCF_TV * (1+g) / (r-g)``, and is discounted by ``(1+r)**(n+1)`` for an
``n``-year horizon.  This is one period later than the common textbook
placement and is deliberate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateInputError, DivergentPerpetuityError, GrowthRateWarning, InputValidationError
from .forecast import FcffSeries

PLAUSIBLE_GROWTH = (0.0, 0.05)


@dataclass(frozen=True)
class BridgeItems:
    """Items between enterprise value and equity value (EURm).

    ``associated_companies`` is signed and deducted with its sign, so a stake
    in associates that adds value is entered as a negative number.
    """

    net_debt: float = 0.0
    minority_interests: float = 0.0
    pension_deficit: float = 0.0
    off_balance_obligations: float = 0.0
    associated_companies: float = 0.0

    def __post_init__(self) -> None:
        for name, value in self.__dict__.items():
            if not math.isfinite(value):
                raise InputValidationError(f"bridge item {name} must be finite")

    @property
    def corporate_adjustments(self) -> float:
        return (
            self.minority_interests
            + self.pension_deficit
            + self.off_balance_obligations
            + self.associated_companies
        )

    @property
    def total(self) -> float:
        return self.net_debt + self.corporate_adjustments


@dataclass(frozen=True)
class TerminalParams:
    perpetual_growth_rate: float
    discount_rate: float

    def __post_init__(self) -> None:
        g, r = self.perpetual_growth_rate, self.discount_rate
        if not (math.isfinite(g) and math.isfinite(r)):
            raise InputValidationError("growth and discount rates must be finite")
        if r <= -1.0:
            raise InputValidationError("discount rate must be > -1")
        if g >= r:
            raise DivergentPerpetuityError(
                f"perpetual growth rate {g:.4%} is not below discount rate {r:.4%}"
            )

    @property
    def warnings(self) -> tuple[str, ...]:
        lo, hi = PLAUSIBLE_GROWTH
        g = self.perpetual_growth_rate
        if lo <= g <= hi:
            return ()
        return (f"perpetual growth rate {g:.2%} outside the usual {lo:.0%}-{hi:.0%} band",)


@dataclass(frozen=True)
class ValuationResult:
    years: tuple[int, ...]
    fcffs: tuple[float, ...]
    discounted_fcffs: tuple[float, ...]
    post_horizon_fcff: float
    terminal_value: float
    discounted_tv: float
    enterprise_value: float
    net_debt: float
    corporate_adjustments: float
    equity_value: float
    shares_outstanding: float
    fair_share_price: float
    discount_rate: float
    perpetual_growth_rate: float
    bridge: BridgeItems
    warnings: tuple[str, ...] = ()

    @property
    def tv_share_of_ev(self) -> float:
        return self.discounted_tv / self.enterprise_value


def discount_series(fcffs: Sequence[float], rate: float) -> np.ndarray:
    """Present values of end-of-period flows; the first is discounted one period."""
    if rate <= -1.0:
        raise InputValidationError("discount rate must be > -1")
    flows = np.asarray(fcffs, dtype=float)
    t = np.arange(1, flows.size + 1)
    return flows / (1.0 + rate) ** t


def terminal_value(post_horizon_fcff: float, params: TerminalParams) -> float:
    """Gordon growth value of all flows after the horizon, as of the TV date.

    Emits :class:`GrowthRateWarning` when ``g`` is outside [0%, 5%].
    """
    if not math.isfinite(post_horizon_fcff):
        raise InputValidationError("post-horizon FCFF must be finite")
    for msg in params.warnings:
        warnings.warn(msg, GrowthRateWarning, stacklevel=2)
    g, r = params.perpetual_growth_rate, params.discount_rate
    return post_horizon_fcff * (1.0 + g) / (r - g)


def equity_bridge(enterprise_value: float, bridge: BridgeItems) -> float:
    return enterprise_value - bridge.net_debt - bridge.corporate_adjustments


def enterprise_from_equity(equity_value: float, bridge: BridgeItems) -> float:
    """Inverse of :func:`equity_bridge`."""
    return equity_value + bridge.net_debt + bridge.corporate_adjustments


def company_value(
    series: FcffSeries,
    params: TerminalParams,
    bridge: BridgeItems,
    shares: float,
) -> ValuationResult:
    if not (math.isfinite(shares) and shares > 0):
        raise DegenerateInputError(f"shares outstanding must be > 0, got {shares}")
    r = params.discount_rate
    n = len(series)
    discounted = discount_series(series.fcffs, r)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", GrowthRateWarning)
        tv = terminal_value(series.post_horizon_fcff, params)
    discounted_tv = tv / (1.0 + r) ** (n + 1)
    ev = math.fsum(discounted.tolist()) + discounted_tv
    eqv = equity_bridge(ev, bridge)
    return ValuationResult(
        years=series.years,
        fcffs=series.fcffs,
        discounted_fcffs=tuple(discounted.tolist()),
        post_horizon_fcff=series.post_horizon_fcff,
        terminal_value=tv,
        discounted_tv=discounted_tv,
        enterprise_value=ev,
        net_debt=bridge.net_debt,
        corporate_adjustments=bridge.corporate_adjustments,
        equity_value=eqv,
        shares_outstanding=shares,
        fair_share_price=eqv / shares,
        discount_rate=r,
        perpetual_growth_rate=params.perpetual_growth_rate,
        bridge=bridge,
        warnings=params.warnings,
    )


def value_duration(fcffs: Sequence[float], rate: float) -> float:
    """dV/dr of the discounted horizon flows, ``-1/(1+r) * sum(t * F_t / (1+r)**t)``.

    A first-order sensitivity only; value is convex in the rate, so the linear
    estimate ``dV/dr * dr`` overstates losses for large moves.
    """
    if rate <= -1.0:
        raise InputValidationError("discount rate must be > -1")
    flows = np.asarray(fcffs, dtype=float)
    if flows.size == 0:
        return 0.0
    t = np.arange(1, flows.size + 1)
    return float(-np.sum(t * flows / (1.0 + rate) ** t) / (1.0 + rate))


def enterprise_value_duration(
    series: FcffSeries, params: TerminalParams, hold_terminal_value: bool = True
) -> float:
    """dEV/dr including the terminal value.

    With ``hold_terminal_value`` the undiscounted TV is treated as a fixed flow at
    ``t = n + 1`` and fed through :func:`value_duration`.  Otherwise the rate
    dependence of the Gordon formula itself is included, giving the full
    derivative of :func:`company_value`'s enterprise value.
    """
    tv = terminal_value(series.post_horizon_fcff, params)
    r, g = params.discount_rate, params.perpetual_growth_rate
    flows = list(series.fcffs) + [tv]
    d = value_duration(flows, r)
    if not hold_terminal_value:
        # d/dr of 1/(r-g) term, with the discount factor held
        d -= tv / (r - g) / (1.0 + r) ** (len(series) + 1)
    return d
