"""JSON input documents: a full valuation case, or a comparables table.

Rates are decimal fractions (``0.09`` for 9%).  Any rate field above 1.5 is
rejected as a probable percent/fraction mix-up.  Structural problems (bad
JSON, missing or mistyped fields, duplicate keys) raise
:class:`DocumentParseError`; well-formed but invalid values raise
:class:`InputValidationError`.  Both name the field and its line.
"""

from __future__ import annotations

import datetime as dt
import json
import math
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .capital import DebtTranche, WaccBuild, build_wacc
from .comps import MULTIPLES, PeerEntry, TransactionEntry
from .dcf import BridgeItems
from .errors import DocumentParseError, InputValidationError
from .forecast import ForecastLine
from .sensitivity import Scenario

MAX_RATE = 1.5
_SECTIONS = ("company", "forecast", "capital", "terminal", "bridge")


def _no_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise DocumentParseError(f"duplicate key {key!r}", field=key)
        seen[key] = value
    return seen


class _Reader:
    """Typed field access with error messages that point into the source text."""

    def __init__(self, text: str, source: str = "<document>"):
        self.text = text
        self.source = source
        try:
            self.data = json.loads(text, object_pairs_hook=_no_duplicates)
        except json.JSONDecodeError as exc:
            raise DocumentParseError(f"{source}: invalid JSON: {exc.msg}", line=exc.lineno) from None
        except DocumentParseError as exc:
            raise DocumentParseError(
                f"{source}: duplicate key", field=exc.field, line=self.line_of(exc.field or "")
            ) from None
        if not isinstance(self.data, dict):
            raise DocumentParseError(f"{source}: top level must be an object", line=1)

    def line_of(self, path: str) -> int | None:
        pos = 0
        found = None
        for part in path.split("."):
            key = re.sub(r"\[\d+\]$", "", part)
            m = re.compile(r'"%s"\s*:' % re.escape(key)).search(self.text, pos)
            if m is None:
                break
            pos = m.end()
            found = self.text.count("\n", 0, m.start()) + 1
        return found

    def parse_error(self, message: str, path: str) -> DocumentParseError:
        return DocumentParseError(f"{self.source}: {message}", field=path, line=self.line_of(path))

    def invalid(self, message: str, path: str) -> InputValidationError:
        line = self.line_of(path)
        where = f"field '{path}'" + (f", line {line}" if line else "")
        return InputValidationError(f"{self.source}: {message} ({where})")

    def section(self, obj: dict, key: str, path: str, required: bool = True) -> dict | None:
        if key not in obj:
            if required:
                raise self.parse_error("missing section", f"{path}{key}")
            return None
        value = obj[key]
        if not isinstance(value, dict):
            raise self.parse_error("expected an object", f"{path}{key}")
        return value

    def number(
        self,
        obj: dict,
        key: str,
        path: str,
        default: float | None = None,
        rate: bool = False,
        required: bool = True,
    ) -> float | None:
        full = f"{path}{key}"
        if key not in obj or obj[key] is None:
            if default is not None or not required:
                return default
            raise self.parse_error("missing field", full)
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise self.parse_error(f"expected a number, got {value!r}", full)
        value = float(value)
        if not math.isfinite(value):
            raise self.invalid("value must be finite", full)
        if rate and abs(value) > MAX_RATE:
            raise self.invalid(
                f"rate {value} looks like a percentage; write rates as fractions (0.09 for 9%)", full
            )
        return value

    def integer(self, obj: dict, key: str, path: str) -> int:
        full = f"{path}{key}"
        if key not in obj:
            raise self.parse_error("missing field", full)
        value = obj[key]
        if isinstance(value, bool) or not isinstance(value, int):
            raise self.parse_error(f"expected an integer, got {value!r}", full)
        return value

    def string(self, obj: dict, key: str, path: str, default: str | None = None) -> str:
        full = f"{path}{key}"
        if key not in obj:
            if default is not None:
                return default
            raise self.parse_error("missing field", full)
        value = obj[key]
        if not isinstance(value, str):
            raise self.parse_error(f"expected a string, got {value!r}", full)
        return value

    def array(self, obj: dict, key: str, path: str) -> list:
        full = f"{path}{key}"
        if key not in obj:
            raise self.parse_error("missing field", full)
        if not isinstance(obj[key], list):
            raise self.parse_error("expected an array", full)
        return obj[key]


def _wrap(reader: _Reader, path: str, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except InputValidationError as exc:
        if "field '" in str(exc):
            raise
        raise reader.invalid(str(exc), path) from None


def _merge(base: dict, override: dict) -> dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


@dataclass(frozen=True)
class ValuationDocument:
    """A parsed valuation case with its base scenario and any overrides."""

    name: str
    currency: str
    raw: dict
    reader: _Reader

    @classmethod
    def from_text(cls, text: str, source: str = "<document>") -> "ValuationDocument":
        reader = _Reader(text, source)
        data = reader.data
        company = reader.section(data, "company", "")
        name = reader.string(company, "name", "company.")
        currency = reader.string(company, "currency", "company.", default="EUR")
        scenarios = reader.section(data, "scenarios", "", required=False) or {}
        for label, override in scenarios.items():
            if label == "base":
                raise reader.parse_error("'base' is implied by the top-level sections", "scenarios.base")
            if not isinstance(override, dict):
                raise reader.parse_error("scenario override must be an object", f"scenarios.{label}")
            for key in override:
                if key not in _SECTIONS:
                    raise reader.parse_error(f"unknown section {key!r} in override", f"scenarios.{label}.{key}")
        doc = cls(name=name, currency=currency, raw=data, reader=reader)
        doc.scenario("base")
        for label in scenarios:
            doc.scenario(label)
        return doc

    @classmethod
    def load(cls, path: str | Path) -> "ValuationDocument":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DocumentParseError(f"cannot read {path}: {exc.strerror}") from None
        return cls.from_text(text, source=str(path))

    @property
    def labels(self) -> tuple[str, ...]:
        return ("base",) + tuple((self.raw.get("scenarios") or {}).keys())

    def _sections(self, label: str) -> dict:
        base = {k: self.raw[k] for k in _SECTIONS if k in self.raw}
        if label == "base":
            return base
        overrides = self.raw.get("scenarios") or {}
        if label not in overrides:
            raise InputValidationError(f"unknown scenario {label!r}; available: {', '.join(self.labels)}")
        return _merge(base, overrides[label])

    def _line(self, obj: Any, path: str, default_tax: float | None) -> ForecastLine:
        r = self.reader
        if not isinstance(obj, dict):
            raise r.parse_error("forecast line must be an object", path)
        p = path + "."
        tax = r.number(obj, "tax_rate", p, default=default_tax, rate=True)
        return _wrap(
            r,
            path,
            ForecastLine,
            year=r.integer(obj, "year", p),
            sales=r.number(obj, "sales", p),
            ebit_margin=r.number(obj, "ebit_margin", p, rate=True),
            d_and_a=r.number(obj, "d_and_a", p, default=0.0),
            capex=r.number(obj, "capex", p, default=0.0),
            delta_nwc=r.number(obj, "delta_nwc", p, default=0.0),
            tax_rate=tax,
        )

    def wacc_build(self, label: str = "base") -> WaccBuild | None:
        r = self.reader
        cap = self._sections(label).get("capital")
        if cap is None:
            return None
        if not isinstance(cap, dict):
            raise r.parse_error("expected an object", "capital")
        p = "capital."
        rf = r.number(cap, "risk_free_rate", p, rate=True)
        tranches = []
        for i, item in enumerate(cap.get("debt", [])):
            tp = f"capital.debt[{i}]."
            if not isinstance(item, dict):
                raise r.parse_error("debt tranche must be an object", tp[:-1])
            if ("interest_rate" in item) == ("credit_spread" in item):
                raise r.parse_error("give exactly one of interest_rate or credit_spread", tp[:-1])
            if "interest_rate" in item:
                rate = r.number(item, "interest_rate", tp, rate=True)
            else:
                rate = rf + r.number(item, "credit_spread", tp, rate=True)
            tranches.append(
                _wrap(
                    r,
                    tp + "market_value",
                    DebtTranche,
                    market_value=r.number(item, "market_value", tp),
                    interest_rate=rate,
                    name=r.string(item, "name", tp, default=f"tranche {i + 1}"),
                )
            )
        decimals = cap.get("beta_decimals")
        if decimals is not None and (isinstance(decimals, bool) or not isinstance(decimals, int)):
            raise r.parse_error("expected an integer", "capital.beta_decimals")
        return _wrap(
            r,
            "capital",
            build_wacc,
            risk_free_rate=rf,
            market_return=r.number(cap, "market_return", p, rate=True),
            equity_value=r.number(cap, "equity_value", p),
            tax_rate=r.number(cap, "tax_rate", p, rate=True),
            tranches=tranches,
            beta_levered=r.number(cap, "beta_levered", p, required=False),
            beta_unlevered=r.number(cap, "beta_unlevered", p, required=False),
            beta_decimals=decimals,
            preferred_value=r.number(cap, "preferred_value", p, default=0.0),
            cost_of_preferred=r.number(cap, "cost_of_preferred", p, default=0.0, rate=True),
        )

    def scenario(self, label: str = "base") -> Scenario:
        r = self.reader
        s = self._sections(label)
        company = s["company"]
        shares = r.number(company, "shares_outstanding", "company.")

        forecast = s.get("forecast")
        if not isinstance(forecast, dict):
            raise r.parse_error("missing section", "forecast")
        default_tax = r.number(forecast, "tax_rate", "forecast.", required=False, rate=True)
        lines = [
            self._line(obj, f"forecast.lines[{i}]", default_tax)
            for i, obj in enumerate(r.array(forecast, "lines", "forecast."))
        ]
        if "post_horizon" not in forecast:
            raise r.parse_error("missing field", "forecast.post_horizon")
        post = self._line(forecast["post_horizon"], "forecast.post_horizon", default_tax)

        terminal = s.get("terminal")
        if not isinstance(terminal, dict):
            raise r.parse_error("missing section", "terminal")
        g = r.number(terminal, "perpetual_growth_rate", "terminal.", rate=True)
        rate = r.number(terminal, "discount_rate", "terminal.", required=False, rate=True)

        bridge_raw = s.get("bridge") or {}
        bridge = BridgeItems(
            **{
                k: r.number(bridge_raw, k, "bridge.", default=0.0)
                for k in (
                    "net_debt",
                    "minority_interests",
                    "pension_deficit",
                    "off_balance_obligations",
                    "associated_companies",
                )
            }
        )
        unknown = set(bridge_raw) - set(BridgeItems.__dataclass_fields__)
        if unknown:
            raise r.parse_error(f"unknown bridge item(s) {sorted(unknown)}", "bridge")

        build = self.wacc_build(label)
        if build is None and rate is None:
            raise r.parse_error("need a capital section or terminal.discount_rate", "terminal")
        if shares <= 0:
            raise r.invalid("shares outstanding must be > 0 (degenerate input)", "company.shares_outstanding")
        if not lines:
            raise r.invalid("forecast horizon is empty", "forecast.lines")
        scen_label = label if label in ("base", "bull", "bear") else f"custom:{label.removeprefix('custom:')}"
        return _wrap(
            r,
            "forecast",
            Scenario,
            label=scen_label,
            lines=tuple(lines),
            post_horizon=post,
            perpetual_growth_rate=g,
            bridge=bridge,
            shares=shares,
            capital=build.inputs if build else None,
            discount_rate=rate,
        )


def _parse_date(text: str, reader: _Reader, path: str) -> dt.date:
    for fmt in ("%Y-%m-%d", "%d/%m/%Y", "%d.%m.%Y"):
        try:
            return dt.datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise reader.parse_error(f"unrecognised date {text!r}", path)


@dataclass(frozen=True)
class PeerDocument:
    """A trading (peers x multiples x periods) or transaction comparables table."""

    kind: str
    title: str
    periods: tuple[str, ...]
    peers: tuple[PeerEntry, ...] = ()
    transactions: tuple[TransactionEntry, ...] = ()

    @property
    def entries(self):
        return self.peers if self.kind == "trading" else self.transactions

    @classmethod
    def from_text(cls, text: str, source: str = "<peers>") -> "PeerDocument":
        r = _Reader(text, source)
        data = r.data
        kind = r.string(data, "kind", "", default="trading")
        title = r.string(data, "title", "", default="")
        if kind == "trading":
            periods = tuple(r.array(data, "periods", ""))
            if not all(isinstance(p, str) for p in periods):
                raise r.parse_error("periods must be strings", "periods")
            peers = []
            for i, item in enumerate(r.array(data, "peers", "")):
                path = f"peers[{i}]"
                if not isinstance(item, dict):
                    raise r.parse_error("peer must be an object", path)
                name = r.string(item, "name", path + ".")
                cells = {}
                for mult in MULTIPLES:
                    row = item.get(mult, {})
                    if not isinstance(row, dict):
                        raise r.parse_error("expected an object keyed by period", f"{path}.{mult}")
                    for period, value in row.items():
                        if period not in periods:
                            raise r.parse_error(f"unknown period {period!r}", f"{path}.{mult}")
                        cells[(mult, period)] = value
                peers.append(_wrap(r, path, PeerEntry, name, cells))
            if not peers:
                raise r.invalid("peer set is empty", "peers")
            return cls(kind, title, periods, peers=tuple(peers))
        if kind == "transaction":
            deals = []
            for i, item in enumerate(r.array(data, "transactions", "")):
                path = f"transactions[{i}]"
                if not isinstance(item, dict):
                    raise r.parse_error("transaction must be an object", path)
                p = path + "."
                deals.append(
                    _wrap(
                        r,
                        path,
                        TransactionEntry,
                        target=r.string(item, "target", p),
                        acquirer=r.string(item, "acquirer", p),
                        date=_parse_date(r.string(item, "date", p), r, p + "date"),
                        ev=r.number(item, "ev", p),
                        multiples={m: item[m] for m in MULTIPLES if m in item},
                    )
                )
            if not deals:
                raise r.invalid("transaction set is empty", "transactions")
            return cls(kind, title, (), transactions=tuple(deals))
        raise r.parse_error(f"kind must be 'trading' or 'transaction', got {kind!r}", "kind")

    @classmethod
    def load(cls, path: str | Path) -> "PeerDocument":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DocumentParseError(f"cannot read {path}: {exc.strerror}") from None
        return cls.from_text(text, source=str(path))
