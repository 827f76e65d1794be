"""How far enterprise value moves with the discount rate.

The duration is a first-order slope.  Because value is convex in the rate, the
linear estimate overstates the loss from a large rise.
"""

from _common import data_path

from dcfkit import TerminalParams, ValuationDocument, company_value, enterprise_value_duration

scenario = ValuationDocument.load(data_path("basf_2008.json")).scenario("base")
series, params = scenario.series(), scenario.terminal()
ev = company_value(series, params, scenario.bridge, scenario.shares).enterprise_value
slope = enterprise_value_duration(series, params, hold_terminal_value=False)

for bp in (10, 50, 100):
    dr = bp / 10_000
    bumped = TerminalParams(params.perpetual_growth_rate, params.discount_rate + dr)
    actual = company_value(series, bumped, scenario.bridge, scenario.shares).enterprise_value - ev
    print(f"+{bp:>3}bp  linear {slope * dr:>10,.1f}  actual {actual:>10,.1f}")
