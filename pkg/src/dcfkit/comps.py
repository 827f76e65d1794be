"""Trading and transaction comparables, plus long-term credit rating scales.

Multiples are ingested pre-computed.  Blank and ``n.m.`` cells are absent
values: they are excluded from both the sum and the count of every aggregate
and are never imputed as zero.
"""

from __future__ import annotations

import datetime as dt
import math
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from .errors import EmptyAggregateError, InputValidationError, UnknownRatingError

MULTIPLES = ("ev_sales", "ev_ebitda", "ev_ebit", "eqv_net_income")
MULTIPLE_LABELS = {
    "ev_sales": "EV/Sales",
    "ev_ebitda": "EV/EBITDA",
    "ev_ebit": "EV/EBIT",
    "eqv_net_income": "Eq.V./Net income",
}
ENTERPRISE, EQUITY = "enterprise", "equity"
MAJORITY_PREMIUM_NOTE = (
    "Trading multiples exclude majority (control) premiums; transaction values "
    "are typically higher."
)


def parse_multiple(cell: object) -> float | None:
    """Read a table cell such as ``1.7``, ``"1.70x"``, ``""`` or ``"n.m."``."""
    if cell is None:
        return None
    if isinstance(cell, bool):
        raise InputValidationError(f"not a multiple: {cell!r}")
    if isinstance(cell, (int, float)):
        value = float(cell)
    else:
        text = str(cell).strip().lower()
        if text in ("", "n.m.", "nm", "n/m", "n.a.", "na", "-"):
            return None
        if text.endswith("x"):
            text = text[:-1]
        try:
            value = float(text)
        except ValueError:
            raise InputValidationError(f"not a multiple: {cell!r}") from None
    if not math.isfinite(value):
        raise InputValidationError(f"multiple must be finite: {cell!r}")
    return value


def _check_multiple(name: str) -> None:
    if name not in MULTIPLES:
        raise InputValidationError(f"unknown multiple {name!r}; expected one of {MULTIPLES}")


@dataclass(frozen=True)
class PeerEntry:
    """One listed peer; ``multiples[(multiple, period)]`` is absent when blank."""

    name: str
    multiples: Mapping[tuple[str, str], float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {}
        for (mult, period), value in dict(self.multiples).items():
            _check_multiple(mult)
            value = parse_multiple(value)
            if value is not None:
                clean[(mult, period)] = value
        object.__setattr__(self, "multiples", clean)

    def get(self, multiple: str, period: str | None = None) -> float | None:
        return self.multiples.get((multiple, period))

    @property
    def warnings(self) -> tuple[str, ...]:
        return tuple(
            f"{self.name}: negative {MULTIPLE_LABELS[m]} {p} ({v:.2f}x) is not meaningful"
            for (m, p), v in sorted(self.multiples.items())
            if m.startswith("ev_") and v < 0
        )


@dataclass(frozen=True)
class TransactionEntry:
    target: str
    acquirer: str
    date: dt.date
    ev: float
    multiples: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.ev) and self.ev >= 0):
            raise InputValidationError(f"{self.target}: deal EV must be >= 0")
        clean = {}
        for mult, value in dict(self.multiples).items():
            _check_multiple(mult)
            value = parse_multiple(value)
            if value is not None:
                clean[mult] = value
        object.__setattr__(self, "multiples", clean)

    def get(self, multiple: str, period: str | None = None) -> float | None:
        return self.multiples.get(multiple)


class Aggregate(NamedTuple):
    mean: float
    median: float
    count: int


def aggregate_multiples(
    entries: Iterable[PeerEntry | TransactionEntry], multiple: str, period: str | None = None
) -> Aggregate:
    """Mean and median of one multiple over the entries where it is present.

    An even count takes the midpoint of the two central values.  ``period`` is
    ignored for transactions.
    """
    _check_multiple(multiple)
    values = [v for e in entries if (v := e.get(multiple, period)) is not None]
    if not values:
        raise EmptyAggregateError(f"no present {multiple} values for period {period!r}")
    return Aggregate(math.fsum(values) / len(values), statistics.median(values), len(values))


class ImpliedValue(NamedTuple):
    value: float
    level: str  # ENTERPRISE or EQUITY


def implied_value(target_metric: float, multiple: float, kind: str) -> ImpliedValue:
    """Apply a peer multiple to the target's metric.

    ``kind`` names the multiple (``ev_ebitda``...); EV multiples imply an
    enterprise value, which still has to go through the equity bridge.
    """
    _check_multiple(kind)
    if not (math.isfinite(target_metric) and math.isfinite(multiple)):
        raise InputValidationError("metric and multiple must be finite")
    level = EQUITY if kind == "eqv_net_income" else ENTERPRISE
    return ImpliedValue(target_metric * multiple, level)


# --- credit ratings -------------------------------------------------------

AGENCIES = ("Moodys", "SP", "Fitch")
_AGENCY_ALIASES = {
    "moodys": "Moodys",
    "moody's": "Moodys",
    "sp": "SP",
    "s&p": "SP",
    "standard & poor's": "SP",
    "fitch": "Fitch",
}

# (Moody's, S&P, Fitch) per notch, best first
_SCALE: tuple[tuple[str, str, str], ...] = (
    ("Aaa", "AAA", "AAA"),
    ("Aa1", "AA+", "AA+"),
    ("Aa2", "AA", "AA"),
    ("Aa3", "AA-", "AA-"),
    ("A1", "A+", "A+"),
    ("A2", "A", "A"),
    ("A3", "A-", "A-"),
    ("Baa1", "BBB+", "BBB+"),
    ("Baa2", "BBB", "BBB"),
    ("Baa3", "BBB-", "BBB-"),
    ("Ba1", "BB+", "BB+"),
    ("Ba2", "BB", "BB"),
    ("Ba3", "BB-", "BB-"),
    ("B1", "B+", "B+"),
    ("B2", "B", "B"),
    ("B3", "B-", "B-"),
    ("Caa1", "CCC+", "CCC+"),
    ("Caa2", "CCC", "CCC"),
    ("Caa3", "CCC-", "CCC-"),
    ("Ca", "CC", "CC"),
    ("C", "C", "C"),
    ("C", "D", "D"),
)
LAST_INVESTMENT_GRADE = 9
LAST_NON_INVESTMENT_GRADE = 19


@dataclass(frozen=True)
class RatingNotch:
    agency: str
    symbol: str
    grade_band: str  # investment | non_investment | default
    ordinal: int

    @property
    def investment_grade(self) -> bool:
        return self.grade_band == "investment"


def _band(ordinal: int) -> str:
    if ordinal <= LAST_INVESTMENT_GRADE:
        return "investment"
    if ordinal <= LAST_NON_INVESTMENT_GRADE:
        return "non_investment"
    return "default"


def _build_index() -> dict[str, dict[str, int]]:
    index: dict[str, dict[str, int]] = {a: {} for a in AGENCIES}
    for ordinal, row in enumerate(_SCALE):
        for agency, symbol in zip(AGENCIES, row):
            # Moody's has a single C for both default rows
            index[agency].setdefault(symbol.upper(), ordinal)
    return index


_INDEX = _build_index()


def _canonical_agency(agency: str) -> str:
    key = agency.strip().lower()
    if key in _AGENCY_ALIASES:
        return _AGENCY_ALIASES[key]
    raise UnknownRatingError(f"unknown rating agency {agency!r}")


def normalize_rating(agency: str, symbol: str) -> RatingNotch:
    """Map an agency's rating symbol onto the shared notch scale (0 = best)."""
    agency = _canonical_agency(agency)
    sym = symbol.strip().replace("−", "-")
    try:
        ordinal = _INDEX[agency][sym.upper()]
    except KeyError:
        raise UnknownRatingError(f"{sym!r} is not on the {agency} scale") from None
    col = AGENCIES.index(agency)
    return RatingNotch(agency, _SCALE[ordinal][col], _band(ordinal), ordinal)


def rating_scale(agency: str) -> Sequence[RatingNotch]:
    """All notches of one agency, best first."""
    agency = _canonical_agency(agency)
    return tuple(normalize_rating(agency, s) for s in _INDEX[agency])
