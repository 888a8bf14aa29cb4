import json
from fractions import Fraction

import pytest

from bmepoly.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("n,lines", [(3, 1), (5, 15), (6, 105)])
def test_trees(capsys, n, lines):
    code, out, _ = run(capsys, "trees", "--n", str(n))
    assert code == 0 and len(out.splitlines()) == lines
    assert out.splitlines() == sorted(out.splitlines())


def test_vertices(capsys):
    code, out, _ = run(capsys, "vertices", "--n", "5")
    rows = out.splitlines()
    assert rows[0] == "n=5" and len(rows) == 16
    for r in rows[1:]:
        x = list(map(int, r.split()))
        assert len(x) == 10
    code, out, _ = run(capsys, "vertices", "--n", "4", "--json")
    assert len(json.loads(out)["vertices"]) == 3


def test_facets(capsys):
    code, out, _ = run(capsys, "facets", "--n", "5", "--method", "hull", "--json")
    rep = json.loads(out)
    assert rep["facets"] == 52 and rep["classified"] == {"caterpillar": 10, "cherry": 30, "cyclic": 12}
    code, out, _ = run(capsys, "facets", "--n", "6", "--family", "all")
    assert len(out.splitlines()) == 75
    code, out, _ = run(capsys, "facets", "--n", "6", "--family", "cherry")
    assert len(out.splitlines()) == 60
    code, out, _ = run(capsys, "facets", "--n", "4", "--dedup")
    assert len(out.splitlines()) == 3


def test_hull_and_fvector(capsys, tmp_path):
    out_file = tmp_path / "p5.ine"
    code, _, err = run(capsys, "hull", "--n", "5", "--out", str(out_file))
    assert code == 0 and "52 facets" in err
    assert out_file.read_text().startswith("H-representation")
    code, out, _ = run(capsys, "fvector", "--n", "5")
    assert out.split() == ["15", "105", "250", "210", "52"]


def test_hull_budget_and_resume(capsys, tmp_path):
    ck = str(tmp_path / "ck.json")
    code, _, err = run(capsys, "hull", "--n", "5", "--budget-steps", "20", "--checkpoint", ck)
    assert code == 3 and "--resume" in err
    code, _, err = run(capsys, "hull", "--n", "5", "--checkpoint", ck, "--resume")
    assert code == 0 and "52 facets" in err


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--n", "5")
    assert code == 0 and "FAIL" not in out and out.count("PASS") == 7


def test_solve_example_methods_agree(capsys):
    _, brute, _ = run(capsys, "solve", "example", "--method", "brute", "--json")
    _, bnb, _ = run(capsys, "solve", "example", "--method", "bnb", "--json")
    a, b = json.loads(brute), json.loads(bnb)
    assert a["tree"] == b["tree"] and a["value_scaled"] == b["value_scaled"]
    assert Fraction(a["value_pauplin"]) == Fraction(a["value_scaled"]) / 8
    code, out, _ = run(capsys, "solve", "example", "--method", "nni", "--seed", "4")
    assert code == 0 and "LocalOptimum" in out


def test_solve_file_and_random(capsys, tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("4\n0 1 2 3\n1 0 4 5\n2 4 0 6\n3 5 6 0\n")
    code, out, _ = run(capsys, "solve", str(f))
    assert code == 0 and "Optimal" in out
    code, out1, _ = run(capsys, "solve", "--n", "6", "--seed", "11")
    code, out2, _ = run(capsys, "solve", "--n", "6", "--seed", "11")
    assert out1 == out2


def test_solve_budget_exit(capsys):
    code, out, _ = run(capsys, "solve", "--n", "7", "--budget-nodes", "1")
    assert code == 3 and "Incumbent" in out


@pytest.mark.parametrize("argv", [["solve", "missing.txt"], ["trees"], ["trees", "--n", "2"],
                                  ["birkhoff", "--k", "9"], ["fvector", "--n", "3"]])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_malformed_matrix(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("4\n1 2 3\n")
    code, _, err = run(capsys, "solve", str(f))
    assert code == 2 and "entries" in err


def test_birkhoff(capsys):
    code, out, _ = run(capsys, "birkhoff", "--json")
    rep = json.loads(out)
    assert rep["facets"] == 9 and rep["dim"] == 4 and rep["vertices"] == 6
    assert rep["caterpillar_facet_of_P5_equivalent"] and rep["cherry_facet_of_P5_equivalent"]


def test_deterministic_output(capsys):
    outs = [run(capsys, "facets", "--n", "5", "--json")[1] for _ in range(2)]
    assert outs[0] == outs[1]
