import csv
import io
import json
import subprocess
import sys

import pytest

from btstrata import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_group_data_odd(capsys):
    code, doc = run_json(capsys, "group-data", "--n", "7")
    assert code == 0
    res = doc["result"]
    assert res["kind"] == "OddCBC" and res["m"] == 3
    assert res["special_nodes"] == [0, 3]


def test_group_data_even_has_fork(capsys):
    code, doc = run_json(capsys, "group-data", "--n", "6")
    assert code == 0
    edges = {(i, j) for i, j, _ in doc["result"]["edges"]}
    assert {(0, 2), (1, 2)} <= edges
    assert doc["result"]["tau_action"]["0"] == 1


@pytest.mark.parametrize("argv", [["group-data", "--n", "2"], ["lb", "--n", "x"], ["strata", "--kind", "OddSplit", "--t", "4", "--k", "2"],
                                  ["points", "--kind", "EvenMinus", "--t", "4", "--k", "0"], ["eo"]])
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 2


def test_header_carries_config(capsys):
    _, doc = run_json(capsys, "eo", "--n", "5")
    assert doc["schema_version"] == cli.SCHEMA_VERSION
    assert doc["config"]["command"] == "eo" and doc["config"]["n"] == 5


@pytest.mark.parametrize("n,sigma,flat,sharp", [(15, [4], [0, 1, 2, 3], [5, 6, 7]), (16, [5], [0, 1, 2, 3, 4], [6, 7, 8])])
def test_eo_reproduces_worked_rows(capsys, n, sigma, flat, sharp):
    code, doc = run_json(capsys, "eo", "--n", str(n))
    assert code == 0
    row = next(r for r in doc["result"]["jset"] if r["sigma"] == sigma)
    assert (row["flat"], row["sharp"]) == (flat, sharp)


def test_json_round_trip_reproduces_output(capsys):
    _, first = run(capsys, "eo", "--n", "9")
    conf = json.loads(first)["config"]
    _, second = run(capsys, conf["command"], "--n", str(conf["n"]), "--format", conf["format"])
    assert first == second


@pytest.mark.parametrize("n", [9, 6])
def test_lb_rows_pass(capsys, n):
    code, doc = run_json(capsys, "lb", "--n", str(n))
    assert code == 0
    assert {r["verdict"] for r in doc["result"]["rows"]} == {"PASS"}
    if n == 6:
        assert any(r["sigma"] == [0, 1] for r in doc["result"]["rows"])


def test_strata_odd(capsys):
    code, doc = run_json(capsys, "strata", "--kind", "OddSplit", "--t", "5", "--k", "2")
    assert code == 0
    (rep,) = doc["result"]["reports"]
    assert rep["by_type"] == {"1": 40, "3": 240}
    assert doc["verdicts"]["k=2:partition_disjoint"] == doc["verdicts"]["k=2:closure_equals_union"] == "PASS"


def test_strata_even(capsys):
    code, doc = run_json(capsys, "strata", "--kind", "EvenMinus", "--t", "4", "--k", "2")
    assert code == 0
    assert doc["verdicts"]["k=2:even_d_positive"] == "PASS"
    assert doc["result"]["reports"][0]["by_type"] == {"2": 10}


def test_strata_even_odd_degree_notice(capsys):
    code, doc = run_json(capsys, "strata", "--kind", "EvenMinus", "--t", "4", "--k", "3")
    assert code == 0
    assert doc["result"]["reports"] == []
    assert "k=3" in doc["result"]["notices"][0]


def test_points_csv(capsys):
    code, out = run(capsys, "points", "--kind", "OddSplit", "--t", "3", "--k", "1", "2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# schema_version=1")
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    data = [r for r in rows if r["kind"] == "OddSplit"]
    assert [(r["k"], r["all"], r["X(w)"], r["closure"]) for r in data] == [("1", "4", "0", "4"), ("2", "10", "6", "10")]


def test_text_output_and_out_file(tmp_path, capsys):
    target = tmp_path / "eo.txt"
    code, out = run(capsys, "eo", "--n", "16", "--format", "text", "--out", str(target))
    assert code == 0 and out == ""
    text = target.read_text()
    assert text.startswith("btstrata ")
    assert "PASS  lengths_equal_distance" in text


def test_output_is_deterministic(capsys):
    argv = ["points", "--kind", "EvenMinus", "--t", "4", "--k", "2", "--format", "json"]
    assert run(capsys, *argv) == run(capsys, *argv)


def test_hermitian_seeded_and_seedless(capsys, monkeypatch):
    code, doc = run_json(capsys, "hermitian", "--n", "4", "--seed", "3")
    assert code == 0 and doc["result"]["vertex_lattice_source"].startswith("random")
    assert doc["result"]["type0_search"] == 0
    monkeypatch.setenv("BTSTRATA_SEEDLESS", "1")
    code, doc = run_json(capsys, "hermitian", "--n", "3")
    assert code == 0
    assert doc["config"]["seedless"] and doc["result"]["vertex_lattice_source"] == "window enumeration"
    assert doc["result"]["vertex_types"] == [1, 3]


def test_failed_verdict_gives_exit_1(capsys, monkeypatch):
    monkeypatch.setitem(cli.COMMANDS, "lb", lambda cfg: {"result": {"n": cfg.n, "rows": []}, "verdicts": {"x": "FAIL"}})
    code, _ = run(capsys, "lb", "--n", "5")
    assert code == 1


def test_verify_all(capsys):
    code, doc = run_json(capsys, "verify-all")
    assert code == 0
    assert set(doc["verdicts"].values()) == {"PASS"}
    assert len(doc["verdicts"]) == 7


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "btstrata", "group-data", "--n", "5", "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "OddCBC m=2" in proc.stdout
