import io
import json
import subprocess
import sys

import pytest

from cactikit.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_cells_counts():
    code, out = run("cells", "--space", "unbased", "--arity", "3")
    data = json.loads(out)
    assert code == 0 and data["total"] == 5 and data["counts"] == {"0": 2, "1": 3}
    assert json.loads(run("cells", "--space", "moduli", "--arity", "3")[1])["total"] == 8
    assert json.loads(run("cells", "--space", "based", "--arity", "1")[1])["total"] == 1
    data = json.loads(run("cells", "--space", "dual", "--arity", "3", "--dim", "0")[1])
    assert data["total"] == 3


def test_cells_table_and_csv():
    code, out = run("cells", "--space", "unbased", "--arity", "3", "--format", "table")
    assert code == 0 and out.splitlines()[-1] == "total 5: dim 0: 2, dim 1: 3"
    code, out = run("cells", "--space", "based", "--arity", "2", "--format", "csv")
    assert out.splitlines()[0] == "cell,dim" and len(out.splitlines()) == 5


def test_homology():
    assert json.loads(run("homology", "--space", "dual", "--arity", "4")[1])["betti"] == [1, 0, 5, 0, 1]
    assert json.loads(run("homology", "--space", "based", "--arity", "2")[1])["betti"] == [1, 1]
    assert json.loads(run("homology", "--space", "unbased", "--arity", "2")[1])["betti"] == [1]


def test_homology_mod2_cross_check():
    code, out = run("homology", "--space", "moduli", "--arity", "4", "--coeff", "f2")
    data = json.loads(out)
    assert code == 0 and data["f2_matches_prediction"] and data["betti_f2"] == [1, 0, 5, 0, 1]


def test_verify_examples():
    code, out = run("verify", "--check", "jacobi", "--k", "3", "--l", "0")
    cert = json.loads(out)
    assert code == 0 and cert["status"] == "pass" and cert["residual"]["terms"] == []
    code, out = run("verify", "--check", "koszul", "--arity", "3")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out = run("verify", "--check", "d2", "--arity", "5")
    assert code == 0 and json.loads(out)["check"] == "d2(n=5)"


def test_compose_examples():
    code, out = run("compose", "grav", "1,2", "1,2", "--slot", "2")
    assert code == 0 and json.loads(out)["terms"] == [[[1, 2, 3, 2], 1], [[1, 3, 2, 3], 1]]
    code, out = run("compose", "based", "1,2", "1,2", "--slot", "2")
    assert json.loads(out)["terms"] == [[[1, 2, 3], 1]]
    code, out = run("compose", "dual", "1,2", "1,2", "--slot", "1")
    (cell, coeff), = json.loads(out)["terms"]
    assert cell["tree"] == [[1, 2], [1, 2, 3]] and coeff == 1


def test_compose_dual_json_input():
    cell = json.dumps({"tree": [[1, 2], [1, 2, 3]], "decorations": {"1,2,3": [1, 2], "1,2": [1, 2]}})
    code, out = run("compose", "dual", cell, "1,2", "--slot", "3")
    assert code == 0 and json.loads(out)["degree"] == 0


@pytest.mark.parametrize("argv", [
    ["compose", "grav", "1,2,1", "1,2", "--slot", "2"],
    ["compose", "based", "1,2", "1,2", "--slot", "5"],
    ["compose", "based", "x", "1,2", "--slot", "1"],
    ["cells", "--space", "moduli", "--arity", "9"],
    ["cells", "--space", "unbased", "--arity", "1"],
    ["homology", "--space", "nowhere", "--arity", "3"],
    ["verify", "--check", "nonsense"],
    ["verify", "--check", "d2", "--arity", "7"],
    ["bogus"],
])
def test_usage_errors_exit_2(argv):
    assert run(*argv)[0] == 2


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# caps\nmax-arity = 3\nformat = csv\n")
    code, _ = run("cells", "--space", "moduli", "--arity", "4", "--config", str(cfg))
    assert code == 2
    code, out = run("cells", "--space", "moduli", "--arity", "3", "--config", str(cfg))
    assert code == 0 and out.startswith("cell,dim")
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = red\n")
    assert run("cells", "--space", "based", "--arity", "2", "--config", str(bad))[0] == 2


def test_verify_failure_exit_code(monkeypatch):
    from cactikit import verification
    monkeypatch.setattr(verification, "check_d2", lambda n: verification._cert(f"d2(n={n})", False))
    assert run("verify", "--check", "d2", "--arity", "2")[0] == 1


def test_module_entry_point_is_deterministic():
    cmd = [sys.executable, "-m", "cactikit", "verify", "--check", "all", "--max-arity", "3"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
