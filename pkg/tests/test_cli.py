import json
import subprocess
import sys

import pytest

from subfree.cli import main
from subfree.graph import graph_from_json


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


@pytest.fixture
def files(tmp_path):
    k4 = {"n": 4, "edges": [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]}
    return {
        "k4": _write(tmp_path, "k4.json", k4),
        "k3": _write(tmp_path, "k3.json", [{"n": 3, "edges": [[0, 1], [1, 2], [0, 2]]}]),
        "two": _write(tmp_path, "two_crossing.json",
                      [{"x": 0, "y": 0, "r": 1}, {"x": 1, "y": 0, "r": 1}]),
        "dir": tmp_path,
    }


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_k4_k1(files, capsys):
    code, out, _ = run(capsys, "solve", "--graph", files["k4"], "--family", files["k3"], "--k", 1)
    rep = json.loads(out)
    assert code == 0 and rep["answer"] == "no" and rep["layering"] == "bfs"


def test_solve_yes_has_cost_and_witness(files, capsys):
    code, out, _ = run(capsys, "solve", "--graph", files["k4"], "--family", files["k3"], "--k", 2)
    rep = json.loads(out)
    assert rep["answer"] == "yes" and rep["cost"] == 2 and len(rep["witness"]) == 2


def test_arrangement_two_crossing(files, capsys):
    code, out, _ = run(capsys, "arrangement", "--disks", files["two"])
    assert code == 0 and json.loads(out) == {"faces": 4, "ply": 2, "local_radius": 1}


def test_gen_gadget_splitter(capsys):
    code, out, _ = run(capsys, "gen-gadget", "splitter")
    rep = json.loads(out)
    assert code == 0 and rep["n"] == 28 and len(rep["edges"]) == 47 and len(rep["ports"]) == 5


@pytest.mark.parametrize("args", [["splitter"], ["clause"], ["L"], ["variable", "--occurrences", "+-"]])
def test_emitted_graphs_round_trip(capsys, args):
    _, out, _ = run(capsys, "gen-gadget", *args)
    rep = json.loads(out)
    g = graph_from_json(rep)
    assert g.to_json() == {"n": rep["n"], "edges": rep["edges"]}


def test_layering_precedence(files, capsys):
    _, out, _ = run(capsys, "layering", "--disks", files["two"])
    assert json.loads(out) == {"layering": "disks", "num_layers": 1, "layer_of": [1, 1]}
    g = _write(files["dir"], "edge.json", {"n": 2, "edges": [[0, 1]]})
    emb = _write(files["dir"], "emb.json", {"h": {"n": 1, "edges": []}, "path_len": 2,
                                            "map": [[0, 1], [0, 2]]})
    _, out, _ = run(capsys, "layering", "--graph", g, "--disks", files["two"], "--embedding", emb)
    assert json.loads(out)["layering"] == "embedding"
    _, out, _ = run(capsys, "solve", "--graph", g, "--embedding", emb,
                    "--family", files["k3"], "--k", 0)
    assert json.loads(out)["layering"] == "embedding"


def test_disks_must_match_graph(files, capsys):
    code, _, err = run(capsys, "solve", "--graph", files["k4"], "--disks", files["two"],
                       "--family", files["k3"], "--k", 0)
    assert code == 1 and "intersection graph" in err


def test_reduction_and_factor(files, capsys):
    cnf = _write(files["dir"], "f.cnf", "p cnf 3 1\n1 2 3 0\n")
    code, out, _ = run(capsys, "gen-reduction", "--cnf", cnf)
    rep = json.loads(out)
    assert code == 0 and rep["planarity_certified"] is False
    g = _write(files["dir"], "g.json", {"n": rep["n"], "edges": rep["edges"]})
    _, out, _ = run(capsys, "triangle-factor", "--graph", g)
    assert json.loads(out)["exists"] is True


def test_validate_td(files, capsys):
    td = _write(files["dir"], "td.json", {"bags": [[0, 1, 2], [3]], "tree_edges": [[0, 1]]})
    code, out, _ = run(capsys, "validate-td", "--graph", files["k4"], "--td", td)
    rep = json.loads(out)
    assert code == 0 and not rep["valid"] and rep["problems"]


def test_oracle_text_format(files, capsys):
    code, out, _ = run(capsys, "--format", "text", "oracle", "--graph", files["k4"],
                       "--family", files["k3"], "--k", 2)
    assert code == 0 and "answer: yes" in out and "cost: 2" in out
    _, out2, _ = run(capsys, "oracle", "--graph", files["k4"], "--family", files["k3"],
                     "--k", 2, "--format", "text")
    assert out2 == out


def test_json_error_names_offset(files, capsys):
    bad = _write(files["dir"], "bad.json", '{"n": 4, "edges": [[0, 1],')
    code, _, err = run(capsys, "oracle", "--graph", bad, "--family", files["k3"], "--k", 1)
    assert code == 1 and "byte offset 26" in err


def test_field_error_names_field(files, capsys):
    bad = _write(files["dir"], "bad.json", [{"x": 0, "y": 0}])
    code, _, err = run(capsys, "arrangement", "--disks", bad)
    assert code == 1 and "disk 0" in err and "r" in err


def test_missing_file(files, capsys):
    code, _, err = run(capsys, "oracle", "--graph", "nope.json", "--family", files["k3"], "--k", 1)
    assert code == 1 and "nope.json" in err


def test_negative_k_is_usage_error(files, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--graph", files["k4"], "--family", files["k3"], "--k", "-1"])
    assert exc.value.code == 2


def test_degenerate_disks_error(files, capsys):
    tangent = _write(files["dir"], "t.json", [{"x": 0, "y": 0, "r": 1}, {"x": 2, "y": 0, "r": 1}])
    code, _, err = run(capsys, "arrangement", "--disks", tangent)
    assert code == 1 and "tangency" in err


def test_selftest_subset_is_deterministic(capsys):
    code, out, err = run(capsys, "selftest", "--criteria", "3,8", "--seed", 7)
    again = run(capsys, "selftest", "--criteria", "3,8", "--seed", 7)[1]
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and [c["number"] for c in rep["criteria"]] == [3, 8]
    assert "[PASS] criterion 3" in err
    assert out == again


def test_console_script(files):
    proc = subprocess.run([sys.executable, "-m", "subfree.cli", "solve", "--graph", files["k4"],
                           "--family", files["k3"], "--k", "1"],
                          capture_output=True, text=True, check=True)
    first = proc.stdout
    second = subprocess.run([sys.executable, "-m", "subfree.cli", "solve", "--graph", files["k4"],
                             "--family", files["k3"], "--k", "1"],
                            capture_output=True, text=True, check=True).stdout
    assert json.loads(first)["answer"] == "no" and first == second
