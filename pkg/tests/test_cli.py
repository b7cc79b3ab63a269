import json

import pytest

from bpsk_wiretap import entropy
from bpsk_wiretap.cli import main
from bpsk_wiretap.scenario import ScenarioConfig, rows_from_csv, rows_to_csv, run_sweep


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_capacity(capsys):
    code, out = run(capsys, "capacity", "--tau", "1", "--eta", "0.4472135954999579", "--energy", "1")
    assert code == 0
    payload = json.loads(out.out)
    assert payload["qq"]["value"] == pytest.approx(0.3410, abs=1e-4)


def test_capacity_domain_error(capsys):
    code, out = run(capsys, "capacity", "--tau", "1.5", "--eta", "0.1")
    assert code == 2


def test_sweep_csv_round_trip(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    code, _ = run(capsys, "sweep", "--grid-points", "64", "--out", str(out))
    assert code == 0
    text = out.read_text()
    rows = rows_from_csv(text)
    assert rows == run_sweep(ScenarioConfig(grid_points=64))
    assert rows_to_csv(rows) == text


def test_sweep_json_and_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"grid_points": 3}))
    code, out = run(capsys, "sweep", "--config", str(cfg), "--format", "json")
    assert code == 0 and len(json.loads(out.out)) == 3


def test_bad_config_exit_2(tmp_path, capsys, caplog):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _ = run(capsys, "sweep", "--config", str(cfg))
    assert code == 2
    assert "bogus" in caplog.text


def test_budget(capsys):
    code, out = run(capsys, "budget")
    assert code == 0 and json.loads(out.out)["symbols"] == 50_000_000
    code, out = run(capsys, "budget", "--feedback-fraction", "0")
    assert json.loads(out.out)["symbols"] == 0


def test_simulate(capsys):
    code, out = run(capsys, "simulate", "--M", "2", "--L", "2", "--n", "2", "--seed", "3")
    assert code == 0
    rep = json.loads(out.out)
    assert rep["seed"] == 3 and 0 <= rep["success"] <= 1
    code, out = run(capsys, "simulate", "--experiment", "covering-trend", "--L-list", "2", "8", "--seeds", "3")
    assert code == 0 and [r["L"] for r in json.loads(out.out)["rows"]] == [2, 8]
    code, out = run(capsys, "simulate", "--experiment", "leakage-monotonicity")
    assert code == 0


def test_simulate_resource_exit_3(capsys):
    code, _ = run(capsys, "simulate", "--M", "64", "--L", "64", "--n", "1")
    assert code == 3


def test_simulate_degenerate_exit_2(capsys):
    code, _ = run(capsys, "simulate", "--n", "9", "--prune-delta", "1e-9")
    assert code == 2


def test_verify_identities(capsys):
    code, out = run(capsys, "verify", "identities")
    report = json.loads(out.out)
    assert code == 0 and report["pass"] and report["suite"] == "identities"
    assert all({"name", "pass", "detail"} <= set(c) for c in report["checks"])


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nonsense"])
    assert exc.value.code == 2


def test_perturbed_h_bpsk_fails_identities(monkeypatch, capsys):
    real = entropy.h_bpsk
    monkeypatch.setattr(entropy, "h_bpsk", lambda x: real(x) + 1e-3)
    code, out = run(capsys, "verify", "identities")
    report = json.loads(out.out)
    assert code == 1 and not report["pass"]
    failed = [c["name"] for c in report["checks"] if not c["pass"]]
    assert any("h_bpsk" in name or "dual" in name for name in failed)


def test_subprocess_entry_point(tmp_path):
    import subprocess
    import sys
    proc = subprocess.run([sys.executable, "-m", "bpsk_wiretap", "budget"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["symbols"] == 50_000_000
