"""Deterministic discounted-cash-flow valuation engine.

FCFF forecasting, WACC construction, Gordon terminal value, the EV-to-equity
bridge, two-way sensitivity grids and comparables analysis.
"""

from .capital import (
    CapitalInputs,
    CapmInputs,
    DebtTranche,
    ReturnSeries,
    WaccBuild,
    blended_cost_of_debt,
    build_wacc,
    cost_of_debt,
    cost_of_equity,
    estimate_beta,
    peer_median_beta,
    relever_beta,
    unlever_beta,
    wacc,
)
from .comps import (
    Aggregate,
    PeerEntry,
    RatingNotch,
    TransactionEntry,
    aggregate_multiples,
    implied_value,
    normalize_rating,
)
from .dcf import (
    BridgeItems,
    TerminalParams,
    ValuationResult,
    company_value,
    discount_series,
    enterprise_from_equity,
    enterprise_value_duration,
    equity_bridge,
    terminal_value,
    value_duration,
)
from .document import PeerDocument, ValuationDocument
from .errors import (
    DegenerateInputError,
    DivergentPerpetuityError,
    DocumentParseError,
    EmptyAggregateError,
    GrowthRateWarning,
    InputValidationError,
    UnknownRatingError,
    ValuationError,
)
from .forecast import (
    FcffLine,
    FcffSeries,
    ForecastLine,
    build_series,
    compute_fcff,
    realized_cagr,
    regrow_series,
)
from .sensitivity import (
    Scenario,
    SensitivityGrid,
    evaluate_cell,
    run_scenario,
    sweep,
    sweep_cagr_growth,
    sweep_wacc_growth,
)

__version__ = "0.1.0"
