import json
from fractions import Fraction

import pytest

from qhdeform import cli, qseries
from qhdeform.scalarring import Frac, Laurent, QDen


def _run(tmp_path, *args, name="out.json"):
    path = tmp_path / name
    code = cli.main([*args, "--report", str(path)])
    return code, path


def _load(path):
    return json.loads(path.read_text())


def test_verify_exact_passes(tmp_path):
    code, path = _run(tmp_path, "verify", "--two-j-max", "4", "--mode", "exact")
    assert code == 0
    rep = _load(path)
    assert rep["schema"] == cli.SCHEMA
    tags = {r["tag"] for r in rep["reports"]}
    assert {"Eq26", "Eq27", "Eq28", "Eq9", "Eq23", "Eq35"} <= tags
    assert all(r["passed"] and r["max_residual"] == 0 for r in rep["reports"])
    assert rep["summary"] == {"total": len(rep["reports"]), "failed": 0, "passed": True}


def test_report_is_deterministic(tmp_path):
    args = ("all", "--two-j-max", "2", "--seed", "7", "--points", "2")
    _, a = _run(tmp_path, *args, name="a.json")
    _, b = _run(tmp_path, *args, name="b.json")
    assert a.read_bytes() == b.read_bytes()
    env = _load(a)["environment"]
    assert env["seed"] == 7 and len(env["points"]) == 2


def test_seed_changes_points(tmp_path):
    _, a = _run(tmp_path, "verify", "--two-j-max", "1", "--mode", "numeric", "--seed", "1", name="a.json")
    _, b = _run(tmp_path, "verify", "--two-j-max", "1", "--mode", "numeric", "--seed", "2", name="b.json")
    assert _load(a)["environment"]["points"] != _load(b)["environment"]["points"]


def test_perturbed_coefficient_flips_exit_status(tmp_path, monkeypatch):
    original = qseries.alpha

    def perturbed(n):
        a = original(n)
        return a + Frac(Laurent.const(Fraction(1, 100)), QDen()) if n == 1 else a

    monkeypatch.setattr(qseries, "alpha", perturbed)
    code, path = _run(tmp_path, "verify", "--two-j-max", "4", "--mode", "exact")
    assert code == 1
    failed = {r["tag"] for r in _load(path)["reports"] if not r["passed"]}
    assert "Eq26" in failed


def test_coeffs_table(tmp_path):
    code, path = _run(tmp_path, "coeffs", "--max-n", "6")
    assert code == 0
    rows = _load(path)["coefficients"]["rows"]
    assert rows["2"]["beta_symbolic"] == "3*alpha1**2 - alpha2"
    assert rows["3"]["beta_q1"] == "-17/315"
    assert rows["1"]["alpha"]["denominator"] == {"3": 1}
    note = _load(path)["coefficients"]["bernoulli_index_note"]
    assert note["beta_q1_equals_formula_at_n_plus_1"]


def test_coeffs_numeric(tmp_path):
    code, path = _run(tmp_path, "coeffs", "--max-n", "3", "--numeric-q", "1.2,0.3")
    assert code == 0
    row = _load(path)["coefficients"]["rows"]["1"]
    assert isinstance(row["alpha"], list) and len(row["alpha"]) == 2


def test_rep_dumps(tmp_path):
    code, path = _run(tmp_path, "rep", "--two-j", "2", "--format", "csv", name="rep.csv")
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "matrix,row,col,value"
    assert len(lines) == 1 + 4 * 9
    code, path = _run(tmp_path, "rep", "--two-j", "1", "--basis", "symmetric", "--numeric-q", "1.0")
    assert _load(path)["matrices"]["Jp"][0][1] == [1.0, 0.0]


def test_limits_and_coproduct(tmp_path):
    assert _run(tmp_path, "limits", "--two-j-max", "3")[0] == 0
    for which in ("uq", "qh", "uh"):
        assert _run(tmp_path, "coproduct", "--two-j-left", "1", "--two-j-right", "2", "--which", which)[0] == 0
    code, path = _run(tmp_path, "coproduct", "--mode", "numeric", "--numeric-q", "1.2,0.1")
    assert code == 0
    assert all(r["mode"] == "numeric" for r in _load(path)["reports"])


def test_config_errors(tmp_path, capsys):
    assert _run(tmp_path, "verify", "--two-j-max", "99")[0] == 2
    assert _run(tmp_path, "verify", "--two-j-max", "2", "--two-j-min", "3")[0] == 2
    assert _run(tmp_path, "coeffs", "--max-n", "-1")[0] == 2
    assert "configuration error" in capsys.readouterr().err


def test_non_generic_q_is_reported(tmp_path, capsys):
    code, _ = _run(tmp_path, "verify", "--two-j-max", "2", "--mode", "numeric", "--numeric-q", "0,1")
    assert code == 2
    assert "[2]" in capsys.readouterr().err


def test_bad_complex_argument():
    with pytest.raises(SystemExit):
        cli.main(["verify", "--mode", "numeric", "--numeric-q", "a,b"])


def test_default_output_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.REPORT_DIR_ENV, str(tmp_path / "reports"))
    assert cli.main(["limits", "--two-j-max", "1"]) == 0
    assert (tmp_path / "reports" / "limits.json").exists()


def test_random_points_avoid_roots_of_unity():
    from qhdeform import suites

    for p in suites.random_points(50, 3):
        assert 0.5 < abs(p.q) < 2 and abs(p.h) < 1
        assert not suites._near_root_of_unity(p.q)
        assert p.q_real > 0 and abs(p.q_real - 1) >= 0.05
