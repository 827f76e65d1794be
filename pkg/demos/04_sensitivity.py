"""Two-way sensitivity grids around the base-case share price.

Cells where perpetual growth reaches the discount rate have no finite value
and come back as NaN (printed n/a).
"""

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from _common import data_path

from dcfkit import ValuationDocument, sweep_cagr_growth, sweep_wacc_growth
from dcfkit.forecast import realized_cagr
from dcfkit.report import ReportOptions, render_grid

scenario = ValuationDocument.load(data_path("basf_2008.json")).scenario("base")
growth = np.round(np.arange(0.0, 0.031, 0.005), 4)
waccs = np.round(np.arange(0.07, 0.111, 0.005), 4)

grid = sweep_wacc_growth(scenario, waccs, growth)
print(render_grid(grid, ReportOptions(), title="WACC vs perpetual growth"))

# Cells are independent, so an executor can spread the work; the result is identical.
with ThreadPoolExecutor() as pool:
    again = sweep_wacc_growth(scenario, waccs, growth, executor=pool)
print("parallel grid identical:", np.array_equal(grid.prices, again.prices, equal_nan=True), "\n")

c0 = realized_cagr(scenario.series())
cagrs = [c0 + d for d in (-0.02, -0.01, 0.0, 0.01, 0.02)]
print(render_grid(sweep_cagr_growth(scenario, cagrs, growth[:5]), ReportOptions(),
                  title="Sales CAGR vs perpetual growth"))

# A growth rate at the discount rate is flagged, not extrapolated.
edge = sweep_wacc_growth(scenario, [0.06, 0.08], [0.06])
print("\ng = r cell available?", bool(edge.available[0, 0]))
