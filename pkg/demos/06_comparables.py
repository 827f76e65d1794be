"""Trading and transaction comparables, implied values and rating notches."""

from _common import data_path

from dcfkit import PeerDocument, aggregate_multiples, implied_value, normalize_rating
from dcfkit.comps import MAJORITY_PREMIUM_NOTE
from dcfkit.report import ReportOptions, render_comps

trading = PeerDocument.load(data_path("car_rental_trading.json"))
print(render_comps(trading, ReportOptions()))

# Blank and n.m. cells drop out of both the sum and the count.
agg = aggregate_multiples(trading.entries, "ev_ebitda", trading.periods[0])
print(f"\nEV/EBITDA {trading.periods[0]}: mean {agg.mean:.2f}x, median {agg.median:.2f}x over {agg.count} peers")

# An EV multiple implies an enterprise value; it still needs the equity bridge.
implied = implied_value(target_metric=850.0, multiple=agg.median, kind="ev_ebitda")
print(f"target EBITDA 850 -> {implied.level} value {implied.value:,.0f}")
print(MAJORITY_PREMIUM_NOTE, "\n")

print(render_comps(PeerDocument.load(data_path("car_rental_transactions.json")), ReportOptions()))

print()
for agency, symbol in (("S&P", "BBB-"), ("Moody's", "Baa3"), ("Fitch", "BB+"), ("Moody's", "C")):
    notch = normalize_rating(agency, symbol)
    print(f"{agency:>8} {symbol:<5} notch {notch.ordinal:>2}  {notch.grade_band}")
