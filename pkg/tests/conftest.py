from importlib import resources

import pytest

from dcfkit import ForecastLine, ValuationDocument, build_series

DATA = resources.files("dcfkit") / "data"

# Table 7 driver columns: year, sales, EBIT margin, D&A, Capex, increase in NWC
REFERENCE_ROWS = [
    (2008, 64702.10, 0.122, 2700.90, 2911.60, 1031.20),
    (2009, 65388.80, 0.112, 2740.90, 2942.50, 519.80),
    (2010, 67645.50, 0.119, 2779.20, 3044.00, 503.60),
    (2011, 71390.10, 0.132, 2829.50, 3212.60, 804.20),
    (2012, 74631.10, 0.140, 2902.30, 3358.40, 709.70),
    (2013, 76870.00, 0.130, 2989.40, 2989.40, 783.60),
    (2014, 86517.90, 0.110, 3431.80, 3431.80, 593.80),
]
REFERENCE_FCFF = [4283.66, 4405.08, 4866.47, 5409.15, 6148.05, 6211.57, 6068.08]
REFERENCE_NPV = [3929.96, 3707.67, 3757.81, 3831.97, 3995.81, 3703.76]


def reference_lines():
    return [
        ForecastLine(year=y, sales=s, ebit_margin=m, d_and_a=da, capex=cx, delta_nwc=nwc, tax_rate=0.30)
        for y, s, m, da, cx, nwc in REFERENCE_ROWS
    ]


@pytest.fixture
def basf_lines():
    return reference_lines()


@pytest.fixture
def basf_series():
    lines = reference_lines()
    return build_series(lines[:-1], lines[-1])


@pytest.fixture
def basf_path():
    return str(DATA / "basf_2008.json")


@pytest.fixture
def basf_doc(basf_path):
    return ValuationDocument.load(basf_path)


@pytest.fixture
def basf_scenario(basf_doc):
    return basf_doc.scenario("base")


@pytest.fixture
def trading_path():
    return str(DATA / "car_rental_trading.json")


@pytest.fixture
def transactions_path():
    return str(DATA / "car_rental_transactions.json")


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
