"""A full DCF valuation: discounting, Gordon terminal value and the equity bridge."""

from _common import data_path

from dcfkit import ValuationDocument, run_scenario
from dcfkit.report import ReportOptions, render_value

doc = ValuationDocument.load(data_path("basf_2008.json"))

for label in doc.labels:
    result = run_scenario(doc.scenario(label))
    print(f"{label:>5}: EV {result.enterprise_value:>10,.1f}  equity {result.equity_value:>10,.1f}  "
          f"price {result.fair_share_price:6.2f}  terminal share of EV {result.tv_share_of_ev:.0%}")

print()
print(render_value(run_scenario(doc.scenario("base")), ReportOptions(), title="Base case", currency=doc.currency))
