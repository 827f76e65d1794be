"""Free cash flow to the firm from a plain forecast table.

Each forecast year supplies sales, an EBIT margin, D&A, capex, the change in
net working capital and a tax rate.  FCFF follows as
EBIT*(1-t) + D&A - capex - change in NWC.
"""

from _common import data_path

from dcfkit import ValuationDocument, realized_cagr, regrow_series
from dcfkit.forecast import breakdown

doc = ValuationDocument.load(data_path("basf_2008.json"))
series = doc.scenario("base").series()

print(f"{'year':>6} {'sales':>10} {'EBIT':>9} {'NOPAT':>9} {'FCFF':>9}")
for row in (breakdown(line) for line in series.forecast_lines):
    print(f"{row.line.year:>6} {row.line.sales:>10,.0f} {row.ebit:>9,.1f} {row.nopat:>9,.1f} {row.fcff:>9,.1f}")
print(f"post-horizon FCFF feeding the terminal value: {series.post_horizon_fcff:,.1f}")

# The horizon's sales growth can be re-based while keeping its year-to-year shape.
c0 = realized_cagr(series)
faster = regrow_series(series, c0 + 0.01)
print(f"\nrealized sales CAGR {c0:.2%}; at {c0 + 0.01:.2%} the final-year FCFF moves "
      f"from {series.fcffs[-1]:,.1f} to {faster.fcffs[-1]:,.1f}")
