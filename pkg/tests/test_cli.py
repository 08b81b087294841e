import json
import subprocess
import sys

import numpy as np
import pytest

from sliceconf.cli import main
from sliceconf.profiles import read_csv


def _scenario(tmp_path, data, name="s.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


BASE = {"preset": "unit_s3", "grid": {"n": 1001},
        "checks": ["alpha_beta", "bianchi_residual", "homothety_scaling", "wconst_ckv",
                   {"check": "theorem_premises", "kind": "einstein_sphere"},
                   {"check": "theorem_premises", "kind": "einstein_sphere", "variant": "as_printed"}]}


def test_run_writes_report_and_csv(tmp_path, capsys):
    rep = tmp_path / "r.json"
    code = main(["run", _scenario(tmp_path, BASE), "--report", str(rep), "--csv-dir", str(tmp_path / "csv")])
    out = capsys.readouterr().out
    print(out)
    assert code == 0
    report = json.loads(rep.read_text())
    assert report["schema"] == 1 and report["scenario"] == "unit_s3"
    names = [e["name"] for e in report["entries"]]
    assert len(names) == len(set(names))
    assert "theorem_premises.einstein_sphere.as_printed" in names
    assert "bianchi_residual" in names and "wconst_ckv.printed" in names
    for e in report["entries"]:
        assert set(e) == {"name", "status", "pass", "max_residual", "tolerance", "notes"}
        assert e["status"] in ("pass", "fail", "info", "error")
    prov = report["provenance"]
    assert prov["grid"]["n"] == 1001 and "compact" in prov["tags"]
    assert "bianchi_residual.csv" in prov["csv_files"]
    grid, cols = read_csv(tmp_path / "csv" / "bianchi_residual.csv")
    assert grid.n == 1001 and list(cols) == ["value"]
    assert np.abs(cols["value"].values).max() < 1e-4
    assert "PASS" in out


def test_report_to_stdout_is_deterministic(tmp_path, capsys):
    path = _scenario(tmp_path, BASE)
    main(["run", path])
    first = capsys.readouterr().out
    main(["run", path])
    second = capsys.readouterr().out
    assert first == second
    json.loads(first)


def test_failing_check_exits_one(tmp_path):
    path = _scenario(tmp_path, {**BASE, "checks": ["bianchi_residual"]})
    assert main(["run", path, "--tol", "bianchi_residual=1e-30"]) == 1


def test_check_missing_data_is_an_error_entry(tmp_path, capsys):
    path = _scenario(tmp_path, {"preset": "lemma_slice", "grid": {"n": 64}, "checks": ["lie_residual"]})
    assert main(["run", path]) == 1
    entry = json.loads(capsys.readouterr().out)["entries"][0]
    assert entry["status"] == "error" and entry["notes"]["error"] == "ConfigError"


@pytest.mark.parametrize("data", [
    {**BASE, "colour": "red"},
    {**BASE, "checks": ["nonsense"]},
    {**BASE, "checks": []},
    {**BASE, "custom": {"state": {"rho": 1}}},
    {**BASE, "tolerances": {"made_up": 1e-3}},
    {**BASE, "tolerances": {"bianchi_residual": -1}},
    {**BASE, "grid": {"n": 201, "spacing": 2}},
    {**BASE, "schema": 7},
    {**BASE, "preset": "torus"},
    {**BASE, "checks": [{"check": "theorem_premises", "kind": "other"}]},
    {**BASE, "checks": [{"check": "transformed_scalar", "variant": "other"}]},
])
def test_config_errors_exit_two(tmp_path, data, capsys):
    assert main(["run", _scenario(tmp_path, data)]) == 2
    print(capsys.readouterr().err)


def test_unreadable_inputs_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", str(bad)]) == 2
    assert main(["run", str(tmp_path / "missing.json")]) == 2
    assert main(["run", _scenario(tmp_path, BASE), "--tol", "oops"]) == 2
    assert main(["frobnicate"]) == 2
    assert main(["run", _scenario(tmp_path, BASE), "--fd-order", "3"]) == 2


def test_custom_scenario_runs(tmp_path, capsys):
    data = {"name": "cone", "custom": {"domain": [0.5, 2.5], "metric": {"F": "0.8*chi"}},
            "grid": {"n": 1001}, "checks": ["alpha_beta", "bianchi_residual"]}
    assert main(["run", _scenario(tmp_path, data)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["scenario"] == "cone" and rep["provenance"]["preset"] is None


def test_preset_subcommands(capsys):
    assert main(["preset", "list"]) == 0
    listing = capsys.readouterr().out
    assert listing.count("\n") == 7 and "ltb_like" in listing
    assert main(["preset", "show", "flat"]) == 0
    assert json.loads(capsys.readouterr().out)["name"] == "flat"
    assert main(["preset", "show", "torus"]) == 2


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "sliceconf", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "0.1.0"
