"""Writing an input document by hand and using the CLI on it.

Scenario overrides are merged section by section into the base case, so a
bear case only lists what changes.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

document = {
    "company": {"name": "Example Ltd", "currency": "EUR m", "shares_outstanding": 100.0},
    "forecast": {
        "tax_rate": 0.25,
        "lines": [
            {"year": y, "sales": s, "ebit_margin": 0.12, "d_and_a": 30.0, "capex": 35.0, "delta_nwc": 5.0}
            for y, s in ((2025, 1000.0), (2026, 1050.0), (2027, 1100.0))
        ],
        "post_horizon": {"year": 2028, "sales": 1120.0, "ebit_margin": 0.12,
                         "d_and_a": 32.0, "capex": 32.0, "delta_nwc": 2.0},
    },
    "capital": {"risk_free_rate": 0.03, "market_return": 0.08, "beta_levered": 1.1,
                "tax_rate": 0.25, "equity_value": 900.0,
                "debt": [{"name": "loan", "market_value": 300.0, "interest_rate": 0.05}]},
    "terminal": {"perpetual_growth_rate": 0.015},
    "bridge": {"net_debt": 250.0, "minority_interests": 20.0},
    "scenarios": {"stress": {"terminal": {"perpetual_growth_rate": 0.005},
                             "capital": {"market_return": 0.09}}},
}

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "example.json"
    path.write_text(json.dumps(document, indent=2))
    for args in (["value"], ["value", "--scenario", "stress"], ["wacc"]):
        cmd = [sys.executable, "-m", "dcfkit", *args, "--input", str(path)]
        out = subprocess.run(cmd, capture_output=True, text=True)
        print(f"$ dcfkit {' '.join(args)}  (exit {out.returncode})")
        print(out.stdout or out.stderr)
