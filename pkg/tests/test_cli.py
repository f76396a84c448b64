import json
import subprocess
import sys

import pytest

from strengthlab.cli import EXIT_BUDGET, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, RunConfig, UsageError, main
from strengthlab.field import FieldSpec
from strengthlab.serialize import certificate_from_json, diagonal_from_json
from strengthlab.degeneration import verify_certificate


@pytest.fixture
def poly(tmp_path):
    def write(text, name="f.poly"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_qrank_sum_of_cubes(capsys, poly):
    code, out, _ = run(capsys, "qrank", "--input", poly("f = 1*x*x*x + 1*y*y*y"), "--field", "p=5")
    obj = json.loads(out)
    assert code == EXIT_OK and obj["r"] == 1 and obj["exact"]
    assert obj["witness_basis"] == [[1, 4]] and len(obj["decomposition"]) == 1
    assert obj["qrank_over"] == "GF(5)"


def test_qrank_linear_solve_and_cap(capsys, poly):
    code, out, _ = run(capsys, "qrank", "--input", poly("f = x*y*z"), "--oracle", "linear-solve")
    assert code == EXIT_OK and json.loads(out)["r"] == 1
    path = poly("vars x1 y1 z1 x2 y2 z2\nf = x1*y1*z1 + x2*y2*z2")
    code, out, _ = run(capsys, "qrank", "--input", path, "--max-r", "1")
    assert code == EXIT_OK and json.loads(out)["verdict"] == ">=2"


def test_qrank_empty_and_errors(capsys, poly):
    code, out, _ = run(capsys, "qrank", "--input", poly("f ="))
    assert code == EXIT_OK and json.loads(out)["r"] == 0
    assert run(capsys, "qrank", "--input", poly("f = x*y"))[0] == EXIT_USAGE
    assert run(capsys, "qrank", "--input", poly("f = x*x*x"), "--field", "p=6")[0] == EXIT_USAGE
    assert run(capsys, "qrank", "--input", "/nonexistent.poly")[0] == EXIT_USAGE
    assert run(capsys, "qrank")[0] == EXIT_USAGE


def test_budget_exit_code_and_env(capsys, poly, monkeypatch):
    path = poly("vars x1 y1 z1 x2 y2 z2\nf = x1*y1*z1 + x2*y2*z2")
    assert run(capsys, "qrank", "--input", path, "--budget", "10")[0] == EXIT_BUDGET
    monkeypatch.setenv("STRENGTHLAB_BUDGET", "10")
    assert run(capsys, "qrank", "--input", path)[0] == EXIT_BUDGET
    assert run(capsys, "qrank", "--input", path, "--budget", "1000000")[0] == EXIT_OK
    assert run(capsys, "qrank", "--input", path, "--budget", "0")[0] == EXIT_USAGE


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(FieldSpec(5), 0, 0, 1, None)
    with pytest.raises(UsageError):
        RunConfig(FieldSpec(5), 0, 10, 0, None)


def test_degenerate_writes_verified_certificate(capsys, poly, tmp_path):
    out_path = tmp_path / "cert.json"
    path = poly("vars x1 y1 z1 x2 y2 z2\nf = x1*y1*z1 + x2*y2*z2")
    assert run(capsys, "degenerate", "--input", path, "--out", str(out_path))[0] == EXIT_OK
    obj = json.loads(out_path.read_text())
    assert obj["verified"] and obj["bound"] == 1
    assert verify_certificate(certificate_from_json(obj["certificate"]))
    code, out, _ = run(capsys, "degenerate", "--input", path, "--pipeline", "1")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["deg2_hypothesis_met"] is False


def test_degenerate_zero_form(capsys, poly):
    code, _, err = run(capsys, "degenerate", "--input", poly("f = 0"))
    assert code != EXIT_OK and "separable_degenerate" in err


def test_minrank_extract(capsys, poly, tmp_path):
    path = poly("vars x y z\nf = x*x*x + y*y*y + z*z*z")
    code, out, _ = run(capsys, "minrank-extract", "--input", path, "--k", "1", "--s", "2", "--r", "3")
    obj = json.loads(out)
    assert code == EXIT_OK and obj["dim"] == 1 and obj["minrank"] >= 2
    grams = tmp_path / "q.json"
    grams.write_text(json.dumps({"n": 2, "basis": [[[1, 0], [0, 0]], [[0, 0], [0, 1]]]}))
    code, out, _ = run(capsys, "minrank-extract", "--input", str(grams), "--k", "1", "--s", "2", "--r", "2")
    assert code == EXIT_OK and json.loads(out)["minrank"] == 2
    # span{x^2} has codim 1 and maxrank 1, too little for r = 3
    code, out, _ = run(capsys, "minrank-extract", "--input", str(grams), "--k", "1", "--s", "2", "--r", "3")
    assert code == EXIT_VIOLATION and json.loads(out)["codim"] == 1
    assert run(capsys, "minrank-extract", "--input", str(grams), "--k", "1", "--s", "2")[0] == EXIT_USAGE
    assert run(capsys, "minrank-extract", "--input", str(grams), "--k", "2", "--s", "2",
               "--r", "3")[0] == EXIT_USAGE


def test_witness(capsys, tmp_path):
    code, out, _ = run(capsys, "witness", "--n", "2", "--seed", "3")
    obj = json.loads(out)
    assert code == EXIT_OK and obj["verified"]
    assert diagonal_from_json(obj).verify()
    sub = tmp_path / "w.json"
    sub.write_text(json.dumps([[1, 0, 0, 1, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0],
                               [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]]))
    assert run(capsys, "witness", "--n", "2", "--subspace", str(sub))[0] == EXIT_OK
    assert run(capsys, "witness", "--n", "3", "--subspace", str(sub))[0] == EXIT_USAGE
    assert run(capsys, "witness", "--n", "0")[0] == EXIT_USAGE
    assert run(capsys, "witness", "--n", "2", "--subspace", str(tmp_path / "missing.json"))[0] == EXIT_USAGE
    (tmp_path / "junk.json").write_text("{not json")
    assert run(capsys, "witness", "--n", "2", "--subspace", str(tmp_path / "junk.json"))[0] == EXIT_USAGE


def test_paper_check_single_suite(capsys, tmp_path):
    out_path = tmp_path / "r.json"
    code, out, _ = run(capsys, "paper-check", "--suite", "subadd", "--samples", "20", "--seed", "42",
                       "--out", str(out_path))
    assert code == EXIT_OK and "subadd" in out
    assert json.loads(out_path.read_text())["total_violations"] == 0
    assert run(capsys, "paper-check", "--suite", "nope")[0] == EXIT_USAGE


def test_outputs_are_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "paper-check", "--suite", "srk", "--samples", "10", "--seed", "7", "--out", str(a))
    run(capsys, "paper-check", "--suite", "srk", "--samples", "10", "--seed", "7", "--threads", "3",
        "--out", str(b))
    assert a.read_bytes() == b.read_bytes()
    run(capsys, "witness", "--n", "3", "--seed", "1", "--out", str(a))
    run(capsys, "witness", "--n", "3", "--seed", "1", "--threads", "2", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--d", "1")
    assert code == EXIT_OK and json.loads(out)["surjection_min_qrank"] == 89
    obj = json.loads(run(capsys, "bounds", "--d", "80", "--r", "10")[1])
    assert obj["exp_threshold_check"] is False and obj["exp_regime_implies_surjection"] is False


def test_console_script_entry_point(poly):
    path = poly("field p=5\nf = 1*x*x*x + 1*y*y*y")
    proc = subprocess.run([sys.executable, "-m", "strengthlab.cli", "qrank", "--input", path],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["r"] == 1
