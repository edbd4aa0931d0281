import csv
import io
import json
from pathlib import Path

import pytest

from iptree.cli import main

FX = Path(__file__).resolve().parent.parent / "fixtures"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_infer(capsys):
    assert run(capsys, "infer", FX / "coins3.json", FX / "coins3_h3.json") == (0, "0.064\n", "")
    assert run(capsys, "infer", FX / "coins3.json", FX / "coins3_h3.json", "--exact")[1] == "8/125\n"
    assert run(capsys, "infer", FX / "coins3.json", FX / "coins3_h3.json", "--upper", "--exact")[1] == "27/125\n"
    assert run(capsys, "infer", FX / "coins3.json", FX / "const5.json")[1] == "5\n"
    assert run(capsys, "infer", FX / "urn.json", FX / "urn_g.json")[1] == "0.25\n"
    assert run(capsys, "infer", FX / "coins3.json", FX / "coins3_h3.json", "--at", "h2", "--exact")[1] == "2/5\n"


def test_infer_witness(capsys):
    code, out, _ = run(capsys, "infer", FX / "coins3.json", FX / "coins3_h3.json", "--witness", "--exact")
    doc = json.loads(out)
    assert code == 0 and doc["value"] == "8/125" and doc["witness"]["kind"] == "selection"


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", FX / "coins3.json", FX / "coins3_h3.json", "--exact")
    assert code == 0
    assert out.splitlines() == ["8/125", "h0\t1", "h1\t1", "h2\t1"]


def test_cap_exit_code(capsys, monkeypatch):
    code, out, err = run(capsys, "oracle", FX / "coins30.json", FX / "coins30_h30.json")
    assert code == 4 and out == "" and "2^30" in err
    monkeypatch.setenv("IPTREE_ORACLE_CAP", "4")
    assert run(capsys, "oracle", FX / "coins3.json", FX / "coins3_h3.json")[0] == 4
    # recursion has no cap
    assert run(capsys, "infer", FX / "coins30.json", FX / "coins30_h30.json")[0] == 0


def test_error_exit_codes(capsys, tmp_path):
    assert run(capsys, "infer", FX / "coins3.json", FX / "urn_g.json")[0] == 3
    bad = tmp_path / "bad.json"
    bad.write_text('{"version": 1,\n oops}')
    code, out, err = run(capsys, "infer", bad, FX / "coins3_h3.json")
    assert code == 2 and out == "" and "line 2" in err
    assert run(capsys, "wlln", FX / "coins3.json", FX / "coins3_bad_plan.json", "--epsilon", "0.2")[0] == 5
    assert run(capsys, "infer", FX / "coins3.json", FX / "coins3_h3.json", "--at", "zz")[0] == 2


def test_wlln(capsys):
    code, out, _ = run(capsys, "wlln", FX / "coins6.json", FX / "coins6_plan.json", "--epsilon", "1/2", "--exact", "--oracle")
    rep = json.loads(out)
    assert code == 0 and rep["holds"] and rep["exact_lower"] == rep["oracle_lower"] == "1"
    assert rep["N_U"] == 1 and float(rep["witness_slack"]) >= 0


def test_score(capsys):
    plan_args = ("score", FX / "coins6.json", FX / "coins6_plan.json")
    assert run(capsys, *plan_args, "--realized", "h6")[1] == "1\n"
    code, out, _ = run(capsys, *plan_args, "--realized", "t1")
    assert code == 0 and float(out) == pytest.approx(0.960789439152323)
    assert run(capsys, *plan_args, "--realized", "h3")[0] == 5


def test_markov(capsys):
    assert run(capsys, "markov", FX / "chain2.json", FX / "chain2_a.json", "-n", "3", "--exact")[1] == "2/5\n"
    code, out, _ = run(capsys, "markov", FX / "chain2.json", FX / "chain2_a.json", "--bench", "1..3")
    rows = list(csv.reader(io.StringIO(out)))
    assert code == 0
    assert rows[0] == ["n", "t_operator_ms", "t_enum_ms", "value_operator", "value_enum"]
    assert [r[0] for r in rows[1:]] == ["1", "2", "3"]
    assert all(r[3] == r[4] == "0.4" for r in rows[1:])


def test_bench_and_selfcheck(capsys):
    code, out, _ = run(capsys, "bench", "--scale", "--horizons", "10,100")
    assert code == 0 and out.splitlines()[0] == "n,t_operator_ms,value_operator"
    code, out, _ = run(capsys, "selfcheck")
    assert code == 0 and out and all(line.startswith("PASS") for line in out.splitlines())
