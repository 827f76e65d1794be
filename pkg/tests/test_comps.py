import datetime as dt
import itertools

import pytest

from dcfkit import (
    EmptyAggregateError,
    InputValidationError,
    PeerDocument,
    PeerEntry,
    TransactionEntry,
    UnknownRatingError,
    aggregate_multiples,
    implied_value,
    normalize_rating,
)
from dcfkit.comps import AGENCIES, parse_multiple, rating_scale

EV_SALES_2008 = [1.0, 0.8, 0.5, 1.7, 1.5, 0.3]

# Table 2 footer rows: (multiple, period) -> (mean, median) as printed
TRADING_FOOTERS = {
    ("ev_sales", "2008e"): (1.0, 0.9), ("ev_sales", "2009e"): (0.9, 0.9), ("ev_sales", "2010e"): (0.9, 0.9),
    ("ev_ebitda", "2008e"): (9.8, 6.7), ("ev_ebitda", "2009e"): (8.8, 6.2), ("ev_ebitda", "2010e"): (8.8, 5.8),
    ("ev_ebit", "2008e"): (10.5, 9.9), ("ev_ebit", "2009e"): (9.6, 8.9), ("ev_ebit", "2010e"): (8.3, 8.3),
    ("eqv_net_income", "2008e"): (8.7, 7.8), ("eqv_net_income", "2009e"): (7.2, 7.1),
    ("eqv_net_income", "2010e"): (6.7, 6.3),
}


def peers_from(values, multiple="ev_sales", period="2008e"):
    return [PeerEntry(f"p{i}", {(multiple, period): v}) for i, v in enumerate(values)]


class TestAggregate:
    def test_trading_ev_sales(self):
        peers = peers_from(EV_SALES_2008) + [PeerEntry("Amerco")]
        agg = aggregate_multiples(peers, "ev_sales", "2008e")
        assert agg.count == 6
        assert agg.mean == pytest.approx(5.8 / 6)
        assert round(agg.mean, 1) == 1.0
        assert agg.median == pytest.approx(0.9)

    def test_trading_all_footers(self, trading_path):
        doc = PeerDocument.load(trading_path)
        for (m, p), (mean, median) in TRADING_FOOTERS.items():
            agg = aggregate_multiples(doc.peers, m, p)
            # inputs are printed to 0.1x, so aggregates can drift by up to one display step
            assert agg.mean == pytest.approx(mean, abs=0.1), (m, p)
            assert agg.median == pytest.approx(median, abs=0.1), (m, p)

    def test_transactions(self, transactions_path):
        doc = PeerDocument.load(transactions_path)
        sales = aggregate_multiples(doc.transactions, "ev_sales")
        assert (round(sales.mean, 2), round(sales.median, 2), sales.count) == (1.29, 1.11, 11)
        ebitda = aggregate_multiples(doc.transactions, "ev_ebitda")
        assert ebitda.mean == pytest.approx(11.81, abs=0.005)
        assert ebitda.median == pytest.approx(6.89, abs=0.005)
        ebit = aggregate_multiples(doc.transactions, "ev_ebit")
        assert (round(ebit.mean, 2), ebit.median) == (23.73, 18.10)
        ni = aggregate_multiples(doc.transactions, "eqv_net_income")
        assert ni.count == 2  # "n.m." is absent
        assert ni.mean == pytest.approx(55.54, abs=0.01)

    def test_single_peer(self):
        agg = aggregate_multiples(peers_from([3.3]), "ev_sales", "2008e")
        assert agg == (3.3, 3.3, 1)

    def test_permutation_invariant(self):
        ref = aggregate_multiples(peers_from(EV_SALES_2008), "ev_sales", "2008e")
        for perm in itertools.islice(itertools.permutations(EV_SALES_2008), 50):
            agg = aggregate_multiples(peers_from(perm), "ev_sales", "2008e")
            assert agg.median == ref.median
            assert agg.mean == pytest.approx(ref.mean, rel=1e-15)

    def test_empty(self):
        with pytest.raises(EmptyAggregateError):
            aggregate_multiples([PeerEntry("a")], "ev_sales", "2008e")

    def test_unknown_multiple(self):
        with pytest.raises(InputValidationError):
            aggregate_multiples(peers_from([1.0]), "p_b", "2008e")

    def test_negative_ev_multiple_warns(self):
        assert PeerEntry("x", {("ev_ebit", "2008e"): -3.0}).warnings
        assert not PeerEntry("x", {("eqv_net_income", "2008e"): -3.0}).warnings


class TestParseMultiple:
    @pytest.mark.parametrize(
        "cell, value",
        [("1.70x", 1.7), ("n.m.", None), ("", None), (None, None), (2, 2.0), (" 6.34X ", 6.34)],
    )
    def test_cells(self, cell, value):
        assert parse_multiple(cell) == value

    def test_garbage(self):
        with pytest.raises(InputValidationError):
            parse_multiple("abc")


def test_transaction_entry():
    t = TransactionEntry("a", "b", dt.date(2006, 11, 13), 670.0, {"ev_sales": "1.70x", "eqv_net_income": "n.m."})
    assert t.get("ev_sales") == 1.7 and t.get("eqv_net_income") is None
    with pytest.raises(InputValidationError):
        TransactionEntry("a", "b", dt.date(2006, 1, 1), -1.0)


class TestImplied:
    def test_ev_from_ebitda(self):
        iv = implied_value(1000.0, 6.7, "ev_ebitda")
        assert iv.value == pytest.approx(6700.0) and iv.level == "enterprise"

    def test_identity_and_zero(self):
        assert implied_value(123.0, 1.0, "ev_sales").value == 123.0
        assert implied_value(0.0, 6.7, "ev_sales").value == 0.0

    def test_equity_level(self):
        assert implied_value(50.0, 8.0, "eqv_net_income").level == "equity"


class TestRatings:
    def test_bbb_minus_alignment(self):
        sp = normalize_rating("SP", "BBB-")
        assert sp.investment_grade
        assert sp.ordinal == normalize_rating("Moodys", "Baa3").ordinal == normalize_rating("Fitch", "BBB-").ordinal
        assert normalize_rating("SP", "BB+").ordinal == sp.ordinal + 1

    def test_top(self):
        n = normalize_rating("SP", "AAA")
        assert n.ordinal == 0 and n.grade_band == "investment"

    def test_ba1(self):
        assert normalize_rating("Moodys", "Ba1").grade_band == "non_investment"

    def test_default_band(self):
        assert normalize_rating("SP", "D").grade_band == "default"
        assert normalize_rating("Moodys", "C").grade_band == "default"

    def test_aliases(self):
        assert normalize_rating("S&P", "AA").ordinal == normalize_rating("moody's", "Aa2").ordinal

    def test_unknown(self):
        with pytest.raises(UnknownRatingError):
            normalize_rating("SP", "Baa3")
        with pytest.raises(UnknownRatingError):
            normalize_rating("DBRS", "AAA")

    def test_scales_are_ordered_and_injective(self):
        for agency in AGENCIES:
            notches = rating_scale(agency)
            ords = [n.ordinal for n in notches]
            assert ords == sorted(set(ords))
            bands = [n.grade_band for n in notches]
            assert bands == sorted(bands, key=["investment", "non_investment", "default"].index)
        assert len(rating_scale("SP")) == len(rating_scale("Fitch")) == 22
        assert len(rating_scale("Moodys")) == 21
