import json

import pytest

from inaccessible import cli


def run(capsys, *argv):
    code = cli.run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_mes_build(capsys):
    code, out, _ = run(capsys, "mes", "build", "--d", "2")
    assert code == 0
    assert json.loads(out)["partitions"] == [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]]


def test_qubit_purity(capsys):
    code, out, _ = run(capsys, "qubit", "purity", "--rho", "identity/2")
    assert code == 0
    assert json.loads(out) == {"chi2": 4, "two_over_purity": 4}


def test_member_failure_exit_code(capsys):
    q = "1/4-(3+sqrt(33))/24,0,0,1/4,1/4,1/4,0,0,(3+sqrt(33))/24"
    code, out, _ = run(capsys, "mes", "member", "--d", "3", "--q", q, "--mode", "all")
    assert code == 1
    data = json.loads(out)
    assert data["member"] is False
    assert data["chi"] == pytest.approx(3.0)


def test_member_pass(capsys):
    code, _, _ = run(capsys, "mes", "member", "--d", "2", "--q", "1/4,1/4,1/4,1/4")
    assert code == 0


def test_lattice_check(capsys):
    assert run(capsys, "lattice", "check", "--D", "4", "--d", "2", "--accessible", "0,1;2,3")[0] == 0
    code, out, _ = run(capsys, "lattice", "check", "--D", "4", "--d", "2", "--accessible", "0,1;0,2")
    assert code == 1 and json.loads(out)["violations"]


def test_lattice_show_and_dot(capsys):
    code, out, _ = run(capsys, "lattice", "show", "--D", "4", "--d", "2")
    data = json.loads(out)
    assert code == 0 and data["block_count"] == 2 and len(data["statements"]) == 16
    code, out, _ = run(capsys, "lattice", "dot", "--D", "2")
    assert code == 0 and out.startswith("digraph") and out.count("->") == 4


def test_model_commands(capsys):
    assert json.loads(run(capsys, "model", "classify", "--D", "4", "--d", "2")[1]) == {
        "model": [4, 2],
        "kind": "Nontrivial",
        "m": 2,
    }
    assert json.loads(run(capsys, "model", "inflate", "--m", "3")[1])["model"] == [9, 3]
    data = json.loads(run(capsys, "model", "inflations", "--m", "2", "--d", "3")[1])
    assert data["allowed"] == [6, 10, 11]
    data = json.loads(run(capsys, "model", "compose", "--D", "4", "--d", "2", "--D2", "4", "--d2", "2")[1])
    assert data["model"] == [16, 4] and len(data["blocks"]) == 4


def test_marginals_and_reconstruct(capsys):
    code, out, _ = run(capsys, "mes", "marginals", "--d", "2", "--q=-1/16,3/8,-1/16,3/4")
    marg = json.loads(out)["marginals"]
    text = ";".join(",".join(repr(v) for v in row) for row in marg)
    code, out, _ = run(capsys, "mes", "reconstruct", "--d", "2", "--marginals", text)
    assert code == 0
    assert json.loads(out)["q"] == pytest.approx([-1 / 16, 3 / 8, -1 / 16, 3 / 4])


def test_reconstruct_inconsistent(capsys):
    code, _, err = run(capsys, "mes", "reconstruct", "--d", "2", "--marginals", "1,1;1/2,1/2;1/2,1/2")
    assert code == 2 and "error" in err


def test_sample_is_deterministic(capsys):
    a = run(capsys, "mes", "sample", "--d", "3", "--n", "5", "--seed", "9", "--format", "csv")[1]
    b = run(capsys, "mes", "sample", "--d", "3", "--n", "5", "--seed", "9", "--format", "csv")[1]
    assert a == b and a.startswith("q_0,")


def test_state_file(tmp_path, capsys):
    path = tmp_path / "q.json"
    path.write_text(json.dumps({"q": ["1/2", "1/2", 0, 0]}))
    code, out, _ = run(capsys, "qubit", "to-rho", "--file", str(path))
    assert code == 0 and json.loads(out)["psd"] is True


def test_rho_file(tmp_path, capsys):
    path = tmp_path / "rho.json"
    path.write_text(json.dumps({"re": [[1, 0], [0, 0]], "im": [[0, 0], [0, 0]]}))
    code, out, _ = run(capsys, "qubit", "to-q", "--file", str(path))
    assert code == 0 and json.loads(out)["q"] == pytest.approx([0.5, 0, 0, 0.5])


def test_qubit_roundtrip(capsys):
    code, out, _ = run(capsys, "qubit", "roundtrip", "--rho", "bloch:0.1,0.2,0.3")
    assert code == 0 and json.loads(out)["max_error"] < 1e-12


def test_chi_commands(capsys):
    assert json.loads(run(capsys, "chi", "eval", "--p", "1/3,1/3,1/3", "--c", "3")[1])["chi_c"] == 3
    code, _, err = run(capsys, "chi", "recursive", "--d", "2", "--q", "1/4,1/4,1/4,1/4", "--c", "3")
    assert code == 2 and "hierarchy" in err
    assert run(capsys, "chi", "properties", "--n", "20")[0] == 0


def test_qp_commands(capsys):
    q = "--q=-1/16,3/8,-1/16,3/4"
    assert json.loads(run(capsys, "qp", "value", q, "--s", "0,2")[1])["value"] == -0.125
    assert json.loads(run(capsys, "qp", "conditional", q, "--y", "0,1", "--x", "0,1,2")[1])["conditional"] == 1.25
    assert run(capsys, "qp", "rules", q, "--n", "100")[0] == 0
    data = json.loads(run(capsys, "qp", "counterexample", "--x", "1/2")[1])
    assert data["Q(A|B&C)"] == 0.5


def test_usage_errors(capsys):
    assert run(capsys, "nope")[0] == 2
    assert run(capsys, "mes", "build", "--d", "4")[0] == 2
    assert run(capsys, "mes", "marginals", "--d", "2", "--q", "__import__('os')")[0] == 2
    assert run(capsys, "qubit", "purity", "--rho", "bloch:2,0,0")[0] == 2
    assert run(capsys, "verify", "all", "--max-d", "13")[0] == 2


@pytest.mark.parametrize(
    "expr, value",
    [("1/4", 0.25), ("-(3+sqrt(33))/24", -(3 + 33**0.5) / 24), ("2*3-1", 5.0), ("+.5", 0.5)],
)
def test_evaluate(expr, value):
    assert cli.evaluate(expr) == pytest.approx(value)


@pytest.mark.parametrize("expr", ["1/0", "x", "sqrt(1,2)", "2**3", ""])
def test_evaluate_rejects(expr):
    with pytest.raises(cli.UsageError):
        cli.evaluate(expr)


def test_verify_all_is_deterministic(capsys):
    a = run(capsys, "verify", "all", "--max-d", "5", "--seed", "7")
    b = run(capsys, "verify", "all", "--max-d", "5", "--seed", "7")
    assert a[0] == 0 and a[1] == b[1]
    assert [r["id"] for r in json.loads(a[1])][0] == "L1"
