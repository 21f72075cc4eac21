"""End-to-end tests of the command line interface."""
import json
import shutil
import subprocess

import pytest

from kclass.cli import main
from kclass.graphalg import DirectedGraph, one_ideal_invariant
from kclass.matrix import IntMatrix
from kclass.sixterm import SixTermInvariant

GOLDEN_A = "(-1+1*sqrt(5))/2"
GOLDEN_B = "(3-1*sqrt(5))/2"


def run_cli(capsys, *argv):
    rc = main(list(argv))
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def dump(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def graph_file(tmp_path, name, vertices, adjacency):
    g = DirectedGraph(vertices, IntMatrix(adjacency))
    return dump(tmp_path / name, g.to_json()), g


def subst_json(F, A, p):
    n, m = len(p), len(A)
    upper = [[1 if j == i else 0 for j in range(n)] + list(F[i]) for i in range(n)]
    lower = [[0] * n + list(A[i]) for i in range(m)]
    return {"n": n, "p": list(p), "A": A, "A_tilde": upper + lower}


def test_sturmian_compare_golden_pair(capsys):
    rc, out, _ = run_cli(capsys, "sturmian", "compare", GOLDEN_A, GOLDEN_B)
    assert rc == 0
    assert out.strip() == '{"verdict":"isomorphic"}'


def test_sturmian_compare_inequivalent(capsys):
    rc, out, _ = run_cli(capsys, "sturmian", "compare", "sqrt(2)", "sqrt(3)")
    assert rc == 0
    data = json.loads(out)
    assert data["verdict"] == "not_isomorphic"
    assert "certificate" in data


def test_pretty_flag_indents(capsys):
    rc, out, _ = run_cli(capsys, "sturmian", "compare", "--pretty", GOLDEN_A, GOLDEN_B)
    assert rc == 0
    assert out == '{\n  "verdict": "isomorphic"\n}\n'


def test_snf_decomposition_is_valid(capsys, tmp_path):
    M = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    f = dump(tmp_path / "m.json", {"matrix": M})
    rc, out, _ = run_cli(capsys, "snf", f)
    assert rc == 0
    data = json.loads(out)
    U, D, V = (IntMatrix(data[k]) for k in ("U", "D", "V"))
    assert U @ IntMatrix(M) @ V == D
    assert data["diagonal"] == [2, 2, 156]
    # a bare matrix list works as well
    f2 = dump(tmp_path / "m2.json", M)
    rc, out2, _ = run_cli(capsys, "snf", f2)
    assert rc == 0 and json.loads(out2)["diagonal"] == [2, 2, 156]


def test_ext_of_cyclic_by_mixed_group(capsys, tmp_path):
    a = dump(tmp_path / "a.json", {"rank": 0, "torsion": [12]})
    b = dump(tmp_path / "b.json", {"rank": 1, "torsion": [18]})
    rc, out, _ = run_cli(capsys, "ext", a, b)
    assert rc == 0
    data = json.loads(out)
    # Ext(Z/12, Z + Z/18) = Z/12 + Z/gcd(12,18)
    assert data["ext"] == {"rank": 0, "torsion": [6, 12]}
    assert data["order"] == 72


def test_graph_kth_ideals_invariant(capsys, tmp_path):
    f, g = graph_file(tmp_path, "g.json", ["v", "w"], [[4, 1], [0, 0]])
    rc, out, _ = run_cli(capsys, "graph", "kth", f)
    assert rc == 0
    data = json.loads(out)
    assert data["K0"] == {"rank": 1, "torsion": []}
    assert data["K1"] == {"rank": 0, "torsion": []}

    rc, out, _ = run_cli(capsys, "graph", "ideals", f)
    assert rc == 0
    data = json.loads(out)
    assert data["nontrivial_count"] == 1
    assert {"vertices": ["w"], "nontrivial": True} in data["ideals"]

    rc, out, _ = run_cli(capsys, "graph", "invariant", f)
    assert rc == 0
    data = json.loads(out)
    assert data["validation"] == {"valid": True, "failures": []}
    again = SixTermInvariant.from_json(data["invariant"])
    assert again == one_ideal_invariant(g)


def test_graph_compare_extension_family(capsys, tmp_path):
    f1, _ = graph_file(tmp_path, "g1.json", ["v", "w"], [[4, 1], [0, 0]])
    f2, _ = graph_file(tmp_path, "g2.json", ["v", "w"], [[4, 2], [0, 0]])
    f3, _ = graph_file(tmp_path, "g3.json", ["v", "w"], [[4, 3], [0, 0]])
    rc, out, _ = run_cli(capsys, "graph", "compare", f1, f2)
    assert rc == 0 and json.loads(out)["verdict"] == "isomorphic"
    rc, out, _ = run_cli(capsys, "graph", "compare", f1, f3)
    assert rc == 0 and json.loads(out)["verdict"] == "not_isomorphic"


def test_sixterm_check_and_compare(capsys, tmp_path):
    paths = []
    for k in (1, 2, 3):
        g = DirectedGraph(["v", "w"], IntMatrix([[4, k], [0, 0]]))
        paths.append(dump(tmp_path / f"inv{k}.json", one_ideal_invariant(g).to_json()))
    rc, out, _ = run_cli(capsys, "sixterm", "check", paths[0])
    assert rc == 0 and json.loads(out) == {"valid": True, "failures": []}
    rc, out, _ = run_cli(capsys, "sixterm", "compare", paths[0], paths[1])
    assert rc == 0
    data = json.loads(out)
    assert data["verdict"] == "isomorphic" and "witness" in data
    rc, out, _ = run_cli(capsys, "sixterm", "compare", paths[0], paths[2])
    assert rc == 0 and json.loads(out)["verdict"] == "not_isomorphic"


def test_sixterm_check_reports_failures(capsys, tmp_path):
    g = DirectedGraph(["v", "w"], IntMatrix([[4, 1], [0, 0]]))
    data = one_ideal_invariant(g).to_json()
    data["maps"]["K0B->K0E"] = [[5]]
    f = dump(tmp_path / "broken.json", data)
    rc, out, _ = run_cli(capsys, "sixterm", "check", f)
    assert rc == 0
    report = json.loads(out)
    assert report["valid"] is False and report["failures"]


def test_subst_compare(capsys, tmp_path):
    fib4 = [[5, 3], [3, 2]]
    s1 = dump(tmp_path / "s1.json", subst_json([[1, 1]], fib4, [0]))
    s2 = dump(tmp_path / "s2.json", subst_json([[2, 3]], fib4, [0]))
    s3 = dump(tmp_path / "s3.json", subst_json([[1, 1]], [[5, 3], [3, 3]], [0]))
    rc, out, _ = run_cli(capsys, "subst", "compare", s1, s2)
    assert rc == 0 and json.loads(out)["verdict"] == "isomorphic"
    rc, out, _ = run_cli(capsys, "subst", "compare", "--bound", "32", s1, s3)
    assert rc == 0 and json.loads(out)["verdict"] == "not_isomorphic"


def test_batch_results_follow_manifest_order(capsys, tmp_path):
    graph_file(tmp_path, "g1.json", ["v", "w"], [[4, 1], [0, 0]])
    graph_file(tmp_path, "g2.json", ["v", "w"], [[4, 2], [0, 0]])
    graph_file(tmp_path, "g3.json", ["v", "w"], [[4, 3], [0, 0]])
    # relative entries resolve against the manifest directory
    manifest = dump(tmp_path / "man.json",
                    {"pairs": [["g1.json", "g3.json"], ["g1.json", "g2.json"],
                               ["g3.json", "g3.json"]]})
    rc, out, _ = run_cli(capsys, "graph", "compare", "--batch", manifest)
    assert rc == 0
    verdicts = [r["verdict"] for r in json.loads(out)["results"]]
    assert verdicts == ["not_isomorphic", "isomorphic", "isomorphic"]
    # a bare list manifest is accepted too
    manifest2 = dump(tmp_path / "man2.json", [["g2.json", "g1.json"]])
    rc, out, _ = run_cli(capsys, "graph", "compare", "--batch", manifest2)
    assert rc == 0
    assert [r["verdict"] for r in json.loads(out)["results"]] == ["isomorphic"]


def test_sturmian_batch_takes_literals(capsys, tmp_path):
    manifest = dump(tmp_path / "man.json",
                    [[GOLDEN_A, GOLDEN_B], ["sqrt(2)", "sqrt(3)"]])
    rc, out, _ = run_cli(capsys, "sturmian", "compare", "--batch", manifest)
    assert rc == 0
    verdicts = [r["verdict"] for r in json.loads(out)["results"]]
    assert verdicts == ["isomorphic", "not_isomorphic"]


def test_parse_errors_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"oops')
    rc, out, err = run_cli(capsys, "graph", "kth", str(bad))
    assert rc == 2 and out == "" and "malformed JSON" in err
    rc, _, err = run_cli(capsys, "snf", str(tmp_path / "nosuch.json"))
    assert rc == 2 and "cannot read" in err
    rc, _, err = run_cli(capsys, "sturmian", "compare", "sqrt(2)", "garbage")
    assert rc == 2
    wrong_shape = dump(tmp_path / "notgraph.json", {"vertices": ["v"]})
    rc, _, err = run_cli(capsys, "graph", "kth", wrong_shape)
    assert rc == 2
    rc, _, err = run_cli(capsys, "subst", "compare", "--batch", wrong_shape)
    assert rc == 2 and "manifest" in err


def test_unsupported_inputs_exit_3(capsys, tmp_path):
    # rational value in a well-formed literal
    rc, _, err = run_cli(capsys, "sturmian", "compare", "sqrt(2)", "(1+2*sqrt(4))/3")
    assert rc == 3 and "not irrational" in err
    # simple graph, no nontrivial ideal at all
    f, _ = graph_file(tmp_path, "simple.json", ["v"], [[2]])
    rc, _, err = run_cli(capsys, "graph", "invariant", f)
    assert rc == 3
    rc, _, err = run_cli(capsys, "graph", "compare", f, f)
    assert rc == 3


def test_missing_second_input_exits_2(capsys, tmp_path):
    f, _ = graph_file(tmp_path, "g.json", ["v", "w"], [[4, 1], [0, 0]])
    rc, _, err = run_cli(capsys, "graph", "compare", f)
    assert rc == 2 and "two inputs" in err


def test_cli_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["graph"])
    assert exc.value.code == 2


def test_console_script_is_installed():
    exe = shutil.which("kclass")
    assert exe is not None
    proc = subprocess.run([exe, "sturmian", "compare", GOLDEN_A, GOLDEN_B],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.strip() == '{"verdict":"isomorphic"}'
