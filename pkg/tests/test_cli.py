import json

import pytest

from equgen.cli import main
from equgen.constructions import base6
from equgen.partition import write_partition_set


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bell(capsys):
    code, out, _ = run(capsys, "bell", "--n", "9")
    assert code == 0 and out.strip() == "21147"


def test_construct_json_full(capsys):
    code, out, _ = run(capsys, "construct", "--n", "8", "--verify", "full", "--json", "--no-timing")
    doc = json.loads(out)
    assert code == 0
    assert doc["block_counts"] == [3, 4, 5, 6]
    assert doc["verification"]["generated_count"] == 4140
    assert "elapsed" not in doc["verification"]["stats"]


def test_construct_certificate_large(capsys):
    code, out, _ = run(capsys, "construct", "--n", "30", "--verify", "certificate")
    assert code == 0 and "verdict generating" in out


def test_construct_out_then_verify_and_closure(capsys, tmp_path):
    path = tmp_path / "gens.txt"
    assert run(capsys, "construct", "--n", "6", "--out", str(path))[0] == 0
    code, out, _ = run(capsys, "verify", "--generators", str(path), "--mode", "certificate")
    assert code == 0 and "verdict: generating" in out
    code, out, _ = run(capsys, "closure", "--generators", str(path), "--stats", "--json", "--no-timing")
    doc = json.loads(out)
    assert code == 0 and doc["generated_count"] == 203 and doc["full_lattice"] is True


def test_verify_negative(capsys, tmp_path):
    path = tmp_path / "gens.txt"
    es = base6()
    path.write_text(write_partition_set(list(es.generators[:3])))
    code, out, _ = run(capsys, "verify", "--generators", str(path))
    assert code == 1 and "NOT generating" in out


@pytest.mark.parametrize("n", ["7", "5", "2"])
def test_construct_unsupported(capsys, n):
    code, _, err = run(capsys, "construct", "--n", n)
    assert code == 2 and err.startswith("error:")


def test_budget_exit_code(capsys):
    code, _, err = run(capsys, "construct", "--n", "9", "--verify", "full", "--max-elements", "100")
    assert code == 3 and "budget" in err


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "verify", "--generators", str(tmp_path / "missing.txt"))[0] == 4
    bad = tmp_path / "bad.txt"
    bad.write_text("n=3\n0,1|x\n")
    assert run(capsys, "closure", "--generators", str(bad))[0] == 4
    script = tmp_path / "bad.script"
    script.write_text("kind equ\nn=3\nx := y\n")
    code, _, err = run(capsys, "replay", "--script", str(script))
    assert code == 4 and "line 3" in err


def test_replay_fixture_by_name(capsys):
    code, out, _ = run(capsys, "replay", "--script", "six")
    assert code == 0 and "19/19 steps pass" in out and "cycle atoms derived: yes" in out


def test_replay_failure(capsys, tmp_path):
    script = tmp_path / "wrong.script"
    script.write_text("kind equ\nn=3\ngen a = [0,1|2]\nb := a expect [0|1,2]\n")
    code, out, _ = run(capsys, "replay", "--script", str(script))
    assert code == 1 and "FAIL" in out


def test_zadori(capsys):
    code, out, _ = run(capsys, "zadori", "--n", "7", "--verify", "full")
    assert code == 0 and "877" in out and "identities hold: True" in out
    assert run(capsys, "zadori", "--n", "8")[0] == 2


def test_search(capsys):
    code, out, _ = run(capsys, "search", "--n", "5", "--json", "--no-timing")
    doc = json.loads(out)
    assert code == 0 and doc["exhaustive"] and doc["found"] == []
    assert run(capsys, "search", "--n", "9")[0] == 2


def test_quo_demo(capsys):
    code, out, _ = run(capsys, "quo-demo", "--json")
    assert code == 0 and all(json.loads(out).values())
