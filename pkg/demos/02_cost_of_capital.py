"""Building a discount rate: CAPM, relevered beta, cost of debt and WACC."""

import numpy as np
from _common import data_path

from dcfkit import (
    CapitalInputs,
    CapmInputs,
    DebtTranche,
    ReturnSeries,
    ValuationDocument,
    estimate_beta,
    peer_median_beta,
    relever_beta,
    wacc,
)
from dcfkit.report import ReportOptions, render_wacc

# A regression beta from excess returns (synthetic here, true beta 1.3).
rng = np.random.default_rng(7)
market = rng.normal(0.005, 0.04, 60)
stock = 1.3 * market + rng.normal(0, 0.02, 60)
print(f"regression beta on 60 months: {estimate_beta(ReturnSeries(tuple(stock), tuple(market))):.3f}")

# Peers as (levered beta, D/E, tax rate): unlever each, take the median, relever at the target's D/E.
peers = [(1.10, 0.40, 0.30), (0.95, 0.20, 0.25), (1.40, 0.90, 0.30), (1.05, 0.35, 0.28)]
print(f"peer-median beta relevered at D/E 0.5: {peer_median_beta(peers, 0.5, 0.30):.3f}")
print(f"Hamada: unlevered 0.9 at D/E 0.5 and 30% tax -> {relever_beta(0.9, 0.5, 0.30):.3f}")

# Two debt tranches are blended by market value.
capital = CapitalInputs(
    equity_value=600.0,
    capm=CapmInputs(risk_free_rate=0.04, market_return=0.09, beta_levered=1.15),
    tax_rate=0.30,
    tranches=(DebtTranche(300.0, 0.065, "bonds"), DebtTranche(100.0, 0.08, "bank")),
)
print(f"WACC with blended debt: {wacc(capital):.3%}\n")

# The bundled document builds the full table from an unlevered beta and a credit spread.
doc = ValuationDocument.load(data_path("basf_2008.json"))
print(render_wacc(doc.wacc_build(), ReportOptions(), title="Bundled WACC build-up"))
