import copy
import json
import re

import pytest

from dcfkit import DocumentParseError, InputValidationError, ValuationDocument
from dcfkit.cli import main, parse_axis, UsageError
from dcfkit.report import emit_csv, parse_csv, parse_value_csv


def squash(text):
    return re.sub(r"[ \t]+", " ", text)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def basf_raw(basf_path):
    with open(basf_path) as fh:
        return json.load(fh)


@pytest.fixture
def write_doc(tmp_path):
    def _write(obj, name="doc.json"):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=2))
        return str(p)

    return _write


class TestValue:
    def test_basf_table(self, capsys, basf_path):
        code, out, _ = run(capsys, "value", "--input", basf_path)
        assert code == 0
        assert squash(out).rstrip().endswith("Fair share price 58.49")
        assert "EV (EURm) 67,850.16" in squash(out)
        assert "Net debt (EURm) (11,547.00)" in squash(out)
        assert "Eq.V. (EURm) 55,331.96" in squash(out)
        assert "NPV (EURm) 3,929.96 3,707.67 3,757.81 3,831.97 3,995.81 3,703.76 44,923.18" in squash(out)

    def test_deterministic(self, capsys, basf_path):
        a = run(capsys, "value", "-i", basf_path)[1]
        b = run(capsys, "value", "-i", basf_path)[1]
        assert a == b

    def test_csv_round_trip(self, capsys, basf_path, tmp_path):
        out_path = tmp_path / "v.csv"
        code, out, _ = run(capsys, "value", "-i", basf_path, "--format", "csv", "--out", str(out_path))
        assert code == 0 and out == ""
        text = out_path.read_text()
        rows = parse_csv(text)
        assert rows[0] == ["item", "period", "value"]
        assert emit_csv(rows) == text
        values = parse_value_csv(text)
        assert values[("fair_share_price", "")] == pytest.approx(58.49, abs=0.005)
        assert values[("npv", "TV")] == pytest.approx(44923.18, abs=0.05)

    def test_scenarios(self, capsys, basf_path):
        bear = squash(run(capsys, "value", "-i", basf_path, "--scenario", "bear")[1])
        assert bear.rstrip().endswith("Fair share price 44.40")
        code, _, err = run(capsys, "value", "-i", basf_path, "--scenario", "nope")
        assert code == 3 and "unknown scenario" in err

    def test_zero_shares(self, capsys, basf_raw, write_doc):
        basf_raw["company"]["shares_outstanding"] = 0
        code, _, err = run(capsys, "value", "-i", write_doc(basf_raw))
        assert code == 3
        assert "degenerate" in err and "shares_outstanding" in err

    def test_divergent(self, capsys, basf_raw, write_doc):
        basf_raw["terminal"]["perpetual_growth_rate"] = 0.095
        code, _, err = run(capsys, "value", "-i", write_doc(basf_raw))
        assert code == 4 and "divergent" in err

    def test_percent_written_as_number(self, capsys, basf_raw, write_doc):
        basf_raw["terminal"]["discount_rate"] = 9.0
        code, _, err = run(capsys, "value", "-i", write_doc(basf_raw))
        assert code == 3 and "terminal.discount_rate" in err

    def test_parse_error_names_field_and_line(self, capsys, basf_raw, write_doc):
        del basf_raw["forecast"]["lines"][2]["sales"]
        path = write_doc(basf_raw)
        code, _, err = run(capsys, "value", "-i", path)
        assert code == 2
        assert "forecast.lines[2].sales" in err and "line" in err

    def test_mistyped_field_line_number(self, capsys, basf_raw, write_doc):
        basf_raw["bridge"]["net_debt"] = "lots"
        path = write_doc(basf_raw)
        code, _, err = run(capsys, "value", "-i", path)
        expected_line = next(i for i, ln in enumerate(open(path), 1) if '"net_debt"' in ln)
        assert code == 2 and f"line {expected_line}" in err

    def test_invalid_json(self, capsys, write_doc):
        code, _, err = run(capsys, "value", "-i", write_doc('{"company": {\n  "name": "x",,\n}}'))
        assert code == 2 and "line 2" in err

    def test_duplicate_key(self, write_doc):
        with pytest.raises(DocumentParseError):
            ValuationDocument.load(write_doc('{"company": {"name": "a", "name": "b"}}'))

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "value", "-i", str(tmp_path / "none.json"))[0] == 2

    def test_growth_warning_on_stderr(self, capsys, basf_raw, write_doc):
        basf_raw["terminal"]["perpetual_growth_rate"] = 0.06
        code, _, err = run(capsys, "value", "-i", write_doc(basf_raw))
        assert code == 0 and "warning" in err


class TestSensitivity:
    def test_reference_grid(self, capsys, basf_path):
        code, out, _ = run(
            capsys, "sensitivity", "-i", basf_path, "--rows", "growth=0:0.005:7", "--cols", "wacc=0.07:0.005:9"
        )
        assert code == 0
        lines = out.strip().splitlines()
        body = lines[-7:]
        assert all(len(ln.split()) == 10 for ln in body)
        assert body[3].split()[0] == "1.5%" and body[3].split()[5] == "[0.0%]"
        assert body[4].split()[5] == "6.2%"
        assert body[3].split()[6] == "-8.1%"

    def test_single_cell(self, capsys, basf_path):
        code, out, _ = run(capsys, "sensitivity", "-i", basf_path, "--rows", "growth=0.015", "--cols", "wacc=0.09")
        assert code == 0
        assert out.strip().splitlines()[-1].split() == ["1.5%", "[0.0%]"]

    def test_divergent_cell_is_na(self, capsys, basf_path):
        code, out, _ = run(
            capsys, "sensitivity", "-i", basf_path, "--rows", "growth=0.015,0.03", "--cols", "wacc=0.02,0.09"
        )
        assert code == 0
        assert out.strip().splitlines()[-1].split()[1] == "n/a"

    def test_cagr_axis(self, capsys, basf_path, basf_scenario):
        from dcfkit import realized_cagr

        c = realized_cagr(basf_scenario.series())
        code, out, _ = run(
            capsys, "sensitivity", "-i", basf_path, "--rows", f"cagr={c!r}", "--cols", "growth=0.015,0.0175"
        )
        assert code == 0 and "[0.0%]" in out

    def test_csv(self, capsys, basf_path):
        code, out, _ = run(
            capsys, "sensitivity", "-i", basf_path, "--rows", "growth=0.015,0.1", "--cols", "wacc=0.09",
            "--format", "csv",
        )
        rows = parse_csv(out)
        assert rows[0] == ["row_param", "col_param", "row_value", "col_value", "price", "offset"]
        assert float(rows[1][5]) == 0.0 and rows[2][5] == ""
        assert emit_csv(rows) == out

    @pytest.mark.parametrize(
        "rows, cols",
        [("beta=1,2", "wacc=0.09"), ("wacc=0.09", "wacc=0.1"), ("growth", "wacc=0.09"), ("growth=a,b", "wacc=0.09")],
    )
    def test_bad_axes(self, capsys, basf_path, rows, cols):
        code, _, err = run(capsys, "sensitivity", "-i", basf_path, "--rows", rows, "--cols", cols)
        assert code == 2 and err

    def test_parse_axis(self):
        assert parse_axis("wacc=0.07:0.005:3") == ("wacc", (0.07, 0.075, 0.08))
        assert parse_axis("growth=0.01, 0.02") == ("perpetual_growth_rate", (0.01, 0.02))
        with pytest.raises(UsageError):
            parse_axis("cagr=0:0.01:0")


class TestWacc:
    def test_basf(self, capsys, basf_path):
        code, out, _ = run(capsys, "wacc", "-i", basf_path)
        text = squash(out)
        assert code == 0
        for expected in (
            "Risk free rate (%) 4.3%", "Unlevered Beta 0.9", "Levered Beta 1.2", "Market return (%) 9.3%",
            "CAPM required RoE 10.3%", "Average Credit Spread (%) 5.0%", "Cost of Debt before taxes 9.3%",
            "CoD adjusted for tax 6.5%", "WACC 9.0%",
        ):
            assert expected in text

    def test_all_equity(self, capsys, basf_raw, write_doc):
        basf_raw["capital"]["debt"] = []
        code, out, _ = run(capsys, "wacc", "-i", write_doc(basf_raw))
        values = dict(ln.rsplit(None, 1) for ln in squash(out).splitlines()[2:] if ln.endswith("%"))
        assert code == 0
        assert values["WACC"] == values["CAPM required RoE"]

    def test_two_tranches(self, capsys, basf_raw, write_doc):
        basf_raw["capital"]["debt"] = [
            {"name": "bond", "market_value": 600.0, "interest_rate": 0.05},
            {"name": "loan", "market_value": 400.0, "interest_rate": 0.08},
        ]
        basf_raw["capital"]["tax_rate"] = 0.0
        code, out, _ = run(capsys, "wacc", "-i", write_doc(basf_raw), "--format", "csv")
        values = {k: v for k, v in parse_csv(out)[1:]}
        # hand-weighted oracle: 0.6 * 5% + 0.4 * 8%
        assert float(values["cost_of_debt_after_tax"]) == pytest.approx(0.6 * 0.05 + 0.4 * 0.08)

    def test_tranche_needs_one_rate(self, capsys, basf_raw, write_doc):
        basf_raw["capital"]["debt"][0]["interest_rate"] = 0.09
        assert run(capsys, "wacc", "-i", write_doc(basf_raw))[0] == 2


class TestComps:
    def test_trading_table(self, capsys, trading_path):
        code, out, _ = run(capsys, "comps", "-i", trading_path)
        assert code == 0
        median = next(ln for ln in out.splitlines() if ln.startswith("Median")).split()
        assert median[1] == "0.9x"
        assert "majority" in out

    def test_single_peer(self, capsys, write_doc):
        doc = {"periods": ["2008e"], "peers": [{"name": "Solo", "ev_sales": {"2008e": 1.3}, "ev_ebit": {"2008e": 7}}]}
        code, out, _ = run(capsys, "comps", "-i", write_doc(doc))
        rows = {ln.split()[0]: ln.split()[1:] for ln in out.splitlines()[2:5]}
        assert code == 0
        assert rows["Solo"] == rows["Mean"] == rows["Median"] == ["1.3x", "7.0x"]

    def test_nm_cell(self, capsys, write_doc):
        doc = {
            "periods": ["2008e"],
            "peers": [
                {"name": "A", "ev_sales": {"2008e": 1.0}},
                {"name": "B", "ev_sales": {"2008e": "n.m."}},
                {"name": "C", "ev_sales": {"2008e": 2.0}},
            ],
        }
        code, out, _ = run(capsys, "comps", "-i", write_doc(doc), "--format", "csv")
        rows = parse_csv(out)
        assert code == 0
        b_row = next(r for r in rows if r[0] == "B" and r[1] == "ev_sales")
        mean_row = next(r for r in rows if r[0] == "Mean" and r[1] == "ev_sales")
        assert b_row[3] == ""
        assert float(mean_row[3]) == 1.5  # (1.0 + 2.0) / 2, B excluded

    def test_empty_peer_set(self, capsys, write_doc):
        assert run(capsys, "comps", "-i", write_doc({"periods": ["2008e"], "peers": []}))[0] == 3

    def test_transactions(self, capsys, transactions_path):
        code, out, _ = run(capsys, "comps", "-i", transactions_path)
        assert code == 0
        median = next(ln for ln in out.splitlines() if ln.startswith("Median")).split()
        assert median[1:3] == ["1.11x", "6.88x"] or median[1:3] == ["1.11x", "6.89x"]


class TestDocument:
    def test_labels(self, basf_doc):
        assert basf_doc.labels == ("base", "bear", "bull")
        assert basf_doc.scenario("bull").label == "bull"

    def test_custom_label(self, basf_raw, write_doc):
        raw = copy.deepcopy(basf_raw)
        raw["scenarios"]["stress"] = {"terminal": {"perpetual_growth_rate": 0.0}}
        doc = ValuationDocument.load(write_doc(raw))
        assert doc.scenario("stress").label == "custom:stress"
        assert doc.scenario("stress").perpetual_growth_rate == 0.0
        assert doc.scenario("stress").discount_rate == 0.09

    def test_override_unknown_section(self, basf_raw, write_doc):
        basf_raw["scenarios"]["bear"]["beta"] = {}
        with pytest.raises(DocumentParseError):
            ValuationDocument.load(write_doc(basf_raw))

    def test_wacc_drives_rate_without_override(self, basf_raw, write_doc):
        del basf_raw["terminal"]["discount_rate"]
        doc = ValuationDocument.load(write_doc(basf_raw))
        assert doc.scenario().resolved_discount_rate() == pytest.approx(doc.wacc_build().wacc)

    def test_invalid_tax(self, basf_raw, write_doc):
        basf_raw["forecast"]["lines"][0]["tax_rate"] = 1.0
        with pytest.raises(InputValidationError, match=r"forecast.lines\[0\]"):
            ValuationDocument.load(write_doc(basf_raw))
