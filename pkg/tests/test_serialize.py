import json
from fractions import Fraction
from pathlib import Path

import pytest

from iptree import serialize as io
from iptree.errors import SpecParseError
from iptree.fixtures import coins, coins_heads_plan, fixture_documents
from iptree.gambles import Gamble
from iptree.inference import optimal_selection

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_fixture_files_are_current():
    docs = fixture_documents()
    assert sorted(p.name for p in FIXTURES.glob("*.json")) == sorted(docs)
    for name, doc in docs.items():
        assert (FIXTURES / name).read_text(encoding="utf-8") == io.dumps(doc), name


@pytest.mark.parametrize("name", sorted(fixture_documents()))
def test_round_trip_is_byte_identical(name):
    text = (FIXTURES / name).read_text(encoding="utf-8")
    doc = io.loads(text)
    kind = doc["kind"]
    if kind == "tree":
        td = io.parse_tree(doc, exact=True)
        again = io.dump_tree(td.ipt, td.cuts)
    elif kind == "gamble":
        again = io.dump_gamble(io.parse_gamble(doc, exact=True), on=doc["on"])
    elif kind == "chain":
        again = io.dump_chain(io.parse_chain(doc, exact=True))
    else:
        tree_name = "coins3.json" if "coins3" in name else "coins6.json"
        td = io.parse_tree(io.load_file(FIXTURES / tree_name), exact=True)
        again = io.dump_plan(io.parse_plan(doc, td, exact=True))
    assert io.dumps(again) == text


def test_numbers():
    assert io.parse_number("1/4", True, "$") == Fraction(1, 4)
    assert io.parse_number(0.1, True, "$") == Fraction(1, 10)
    assert io.parse_number("1/4", False, "$") == 0.25
    assert io.dump_number(Fraction(6, 3)) == 2
    assert io.dump_number(Fraction(1, 3)) == "1/3"
    for bad in ("abc", "1/0", True, None):
        with pytest.raises(SpecParseError):
            io.parse_number(bad, True, "$.x")


def _tree_doc():
    return json.loads((FIXTURES / "coins3.json").read_text())


def test_error_paths():
    doc = _tree_doc()
    doc["nodes"]["h1"]["model"]["delta"] = "oops"
    with pytest.raises(SpecParseError, match=r"\$\.nodes\.h1\.model"):
        io.parse_tree(doc)
    doc = _tree_doc()
    del doc["nodes"]["h2"]["model"]
    with pytest.raises(SpecParseError, match="missing field 'model'"):
        io.parse_tree(doc)
    doc = _tree_doc()
    doc["version"] = 2
    with pytest.raises(SpecParseError, match=r"\$\.version"):
        io.parse_tree(doc)
    doc = _tree_doc()
    doc["nodes"]["h0"]["children"].append("ghost")
    with pytest.raises(SpecParseError, match="ghost"):
        io.parse_tree(doc)
    with pytest.raises(SpecParseError, match="line 1"):
        io.loads("{not json")


def test_gamble_on_a_cut_is_lifted():
    td = io.parse_tree(_tree_doc(), exact=True)
    g = io.parse_gamble({"version": 1, "kind": "gamble", "on": "U1", "values": {"h1": "1/2", "t1": 3}}, True, td)
    assert g.as_dict() == {"h3": Fraction(1, 2), "t3": Fraction(1, 2), "t2": Fraction(1, 2), "t1": 3}
    with pytest.raises(SpecParseError, match="unknown cut"):
        io.parse_gamble({"version": 1, "kind": "gamble", "on": "U9", "values": {}}, True, td)


def test_plan_and_selection_round_trip():
    ipt = coins(4)
    plan = coins_heads_plan(ipt)
    td = io.TreeDocument(ipt, {})
    back = io.parse_plan(io.dump_plan(plan), td, exact=True)
    assert back.commitments == plan.commitments and back.horizon == plan.horizon and back.B == plan.B
    sigma = optimal_selection(ipt, Gamble.indicator(ipt.tree.terminals, ["h4"]))
    assert io.parse_selection(io.dump_selection(sigma), exact=True) == sigma
