import json
from pathlib import Path

import pytest

jsonschema = pytest.importorskip("jsonschema")

DOCS = Path(__file__).resolve().parents[1] / "docs"


def load(name):
    return json.loads((DOCS / name).read_text())


def test_bundled_valuation_document_matches_schema(basf_path):
    jsonschema.validate(json.loads(Path(basf_path).read_text()), load("valuation.schema.json"))


@pytest.mark.parametrize("fixture", ["trading_path", "transactions_path"])
def test_bundled_comps_documents_match_schema(fixture, request):
    path = request.getfixturevalue(fixture)
    jsonschema.validate(json.loads(Path(path).read_text()), load("comps.schema.json"))


def test_schema_rejects_percent_rates(basf_path):
    doc = json.loads(Path(basf_path).read_text())
    doc["terminal"]["discount_rate"] = 9.0
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, load("valuation.schema.json"))
