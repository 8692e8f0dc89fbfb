from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from cartanplane.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main
from cartanplane.grassmann import graph_of
from cartanplane.serialize import InputError, parse_rational, subspace_to_json
from cartanplane.symalg import Context, SymPoly

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--format", "json")
    return code, json.loads(out) if out else None, err


def write(tmp_path, obj, name="sigma.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


def test_dims_examples(capsys):
    code, rep, _ = run_json(capsys, "dims", "-n", "3", "-m", "1", "-k", "2", "-s", "2")
    assert code == EXIT_OK
    assert rep["dim_Is"]["FORMULA"] == rep["dim_Is"]["RANK"] == 7
    assert rep["dim_P"]["FORMULA"] == rep["dim_P"]["RANK"] == 4
    code, rep, _ = run_json(capsys, "dims", "-n", "3", "-m", "1", "-k", "2", "-s", "3")
    assert code == EXIT_OK and rep["dim_Is"]["RANK"] == 6


@pytest.mark.parametrize("s", [2, 3])
def test_dims_golden(capsys, s):
    code, out, _ = run(capsys, "dims", "-n", "3", "-m", "1", "-k", "2", "-s", str(s), "--format", "json")
    assert code == EXIT_OK
    assert out == (GOLDEN / f"dims_n3_m1_k2_s{s}.json").read_text()


def test_ma_example_golden(capsys):
    code, out, _ = run(capsys, "ma-example", "--format", "json")
    assert code == EXIT_OK
    assert out == (GOLDEN / "ma_example.json").read_text()
    rep = json.loads(out)
    assert rep["verdict"] == "NOT_CONTACT_EQUIVALENT"
    assert rep["witness_family"]["checked"] == 20 and rep["lines"]["members"] == 50


def test_text_output(capsys):
    code, out, _ = run(capsys, "dims", "-n", "2", "-m", "1", "-k", "2", "-s", "1")
    assert code == EXIT_OK
    assert "dim_Is.FORMULA: 3" in out.splitlines()


def test_check_and_fiber(capsys, tmp_path):
    ctx = Context(2, 1, 2)
    sigma = graph_of(ctx, SymPoly.monomial((1, 1)))
    path = write(tmp_path, subspace_to_json(sigma))
    code, rep, _ = run_json(capsys, "check", "--input", path)
    assert code == EXIT_OK and rep["integral_element"] and rep["shadow_dim"] == 2
    code, rep, _ = run_json(capsys, "fiber", "--input", path)
    assert code == EXIT_OK and rep["roundtrip"]
    assert rep["representative"]["terms"] == [{"sigma": [1, 1], "j": 1, "num": "1", "den": "1"}]


def test_check_failure_exit(capsys, tmp_path):
    path = write(tmp_path, {"n": 2, "m": 1, "k": 2, "basis": [[1, 0, 0, 1], [0, 1, 0, 0]]})
    code, rep, _ = run_json(capsys, "check", "--input", path)
    assert code == EXIT_FAIL and rep["horizontal"] and not rep["isotropic"]
    code, rep, _ = run_json(capsys, "fiber", "--input", path)
    assert code == EXIT_FAIL and rep["error"] == "NOT_INTEGRAL"


def test_fiber_falsification_certificate(capsys, tmp_path, monkeypatch):
    from cartanplane import grassmann

    monkeypatch.setattr(grassmann.ratlin, "solve", lambda *a, **k: None)
    sigma = graph_of(Context(2, 1, 2), SymPoly.monomial((2, 0)))
    path = write(tmp_path, subspace_to_json(sigma))
    code, rep, err = run_json(capsys, "fiber", "--input", path)
    assert code == EXIT_FAIL
    assert rep["error"] == "NO_SOLUTION" and rep["certificate"]["basis"]
    assert "FALSIFICATION" in err


@pytest.mark.parametrize("payload,where", [
    ('{"n": 2, "m": 1, "k": 2, "basis": [[1, 0, 0]]}', "$.basis[0]"),
    ('{"n": 2, "m": 1, "basis": []}', "$.k"),
    ('{"n": 2, "m": 1, "k": 2, "basis": [[1, 0, "0.5", 0]]}', "$.basis[0][2]"),
    ('{"n": 2, "m": 1, "k": 2,\n "basis": [[1, 0, 0, 0]', ":2:"),
])
def test_malformed_input_is_located(capsys, tmp_path, payload, where):
    code, out, err = run(capsys, "check", "--input", write(tmp_path, payload))
    assert code == EXIT_INPUT and out == ""
    assert where in err


def test_usage_errors(capsys):
    assert run(capsys, "dims", "-n", "0", "-m", "1", "-k", "2", "-s", "1")[0] == EXIT_INPUT
    assert run(capsys, "dims", "-n", "2", "-m", "1", "-k", "2", "-s", "5")[0] == EXIT_INPUT
    assert run(capsys, "nonsense")[0] == EXIT_INPUT
    assert run(capsys, "check", "--input", "/nonexistent/file.json")[0] == EXIT_INPUT


def test_rational_parsing():
    assert parse_rational("3/4", "$") == parse_rational({"num": "6", "den": "8"}, "$")
    for bad in (0.5, "1e3", True, {"num": "1", "den": "0"}, "x"):
        with pytest.raises(InputError):
            parse_rational(bad, "$.x")


def test_stabilizer_command_and_polar(capsys):
    code, rep, _ = run_json(capsys, "verify-theorem1", "-n", "3", "-m", "2", "-k", "3", "-s", "2", "--samples", "3")
    assert code == EXIT_OK and rep["ok"] and rep["samples"] == 3
    code, rep, _ = run_json(capsys, "polar", "-n", "3", "-m", "1", "-k", "2", "-s", "2")
    assert code == EXIT_OK
    assert rep["polar_dim"] == {"FORMULA": 4, "RANK": 4}
    assert rep["sharp_rank"] == {"FORMULA": 3, "RANK": 3}
    assert len(rep["polar_basis"]) == 4 and rep["osculator"]["equivalent"]


def test_polar_from_input(capsys, tmp_path):
    path = write(tmp_path, {"n": 3, "m": 1, "k": 2, "basis": [[1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0]]})
    code, rep, _ = run_json(capsys, "polar", "--input", path)
    assert code == EXIT_OK and rep["polar_dim"]["RANK"] == 4


def test_contactize(capsys):
    code, rep, _ = run_json(capsys, "contactize", "-n", "3", "-m", "1", "--verify", "--points", "5")
    assert code == EXIT_OK and rep["ok"] and rep["kernel_check"]["ok"]
    assert rep["frame"]["X_2"] == {"b2": "1", "f1_1": "f1_2"}
    assert rep["frame"]["X^2_1"] == {"f1_2": "1", "f1_1": "-b2"}


def test_grid_small_and_env_override(capsys, monkeypatch):
    monkeypatch.setenv("CARTANPLANE_GRID_NMAX", "2")
    monkeypatch.setenv("CARTANPLANE_GRID_KMAX", "3")
    monkeypatch.setenv("CARTANPLANE_SEED", "11")
    code, rep, _ = run_json(capsys, "grid", "--samples", "2", "--m-max", "1")
    assert code == EXIT_OK and rep["ok"] and rep["seed"] == 11
    assert list(rep["cells"]) == ["n2m1k2", "n2m1k3"]


def test_grid_workers_do_not_change_output(capsys):
    args = ("grid", "--samples", "1", "--n-max", "3", "--m-max", "1", "--k-max", "2", "--format", "json")
    serial = run(capsys, *args)[1]
    parallel = run(capsys, *args, "--workers", "2")[1]
    assert serial == parallel


def test_seed_determinism_and_sensitivity(capsys):
    args = ("verify-theorem1", "-n", "3", "-m", "1", "-k", "3", "-s", "1", "--samples", "2", "--format", "json")
    a = run(capsys, *args, "--seed", "5")[1]
    b = run(capsys, *args, "--seed", "5")[1]
    assert a == b
    polar = ("polar", "-n", "3", "-m", "1", "-k", "3", "-s", "2", "--format", "json")
    assert run(capsys, *polar, "--seed", "5")[1] != run(capsys, *polar, "--seed", "6")[1]


def test_module_entry_point(tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run([sys.executable, "-m", "cartanplane", "dims", "-n", "3", "-m", "1", "-k", "2", "-s", "3",
                           "--format", "json", "-o", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(out.read_text())["dim_Is"]["FORMULA"] == 6


def test_bad_environment_override_is_input_error(capsys, monkeypatch):
    monkeypatch.setenv("CARTANPLANE_SEED", "not-a-number")
    code, _, err = run(capsys, "ma-example", "--lines", "1", "--c-values", "1")
    assert code == EXIT_INPUT and "CARTANPLANE_SEED" in err
