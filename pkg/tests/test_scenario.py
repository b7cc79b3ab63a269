import json
import math

import pytest

from bpsk_wiretap.errors import ConfigError
from bpsk_wiretap.scenario import (CSV_COLUMNS, ScenarioConfig, block_budget, rows_from_csv,
                                   rows_from_json, rows_to_csv, rows_to_json, run_sweep, tau_grid)


def test_block_budget():
    assert block_budget(ScenarioConfig()) == 50_000_000
    assert block_budget(ScenarioConfig(symbol_rate=1.0, coherence_window=1.0, feedback_fraction=1.0)) == 1
    assert block_budget(ScenarioConfig(feedback_fraction=0.0)) == 0
    assert block_budget(ScenarioConfig(symbol_rate=3.0, coherence_window=0.1, feedback_fraction=1.0)) == 0
    assert block_budget(ScenarioConfig(symbol_rate=30.0, coherence_window=0.1, feedback_fraction=1.0)) == 3


def test_default_sweep_endpoints_and_order():
    rows = run_sweep(ScenarioConfig())
    assert len(rows) == 128
    assert rows[0].E_r == pytest.approx(1e-2, rel=1e-9)
    assert rows[-1].E_r == pytest.approx(1e2, rel=1e-9)
    assert all(a.E_r < b.E_r for a, b in zip(rows, rows[1:]))
    for r in rows:
        assert r.qq_raw >= r.cq_raw - 1e-12 and r.cc_raw >= r.cq_raw - 1e-12


def test_two_point_grid():
    cfg = ScenarioConfig(grid_points=2)
    assert list(tau_grid(cfg)) == [1e-4, 1e-2]
    assert len(run_sweep(cfg)) == 2


def test_interval_mode_is_no_better_than_worst_case():
    wc = run_sweep(ScenarioConfig(grid_points=16))
    iv = run_sweep(ScenarioConfig(grid_points=16, eta_mode="interval"))
    for a, b in zip(wc, iv):
        assert b.qq_raw == pytest.approx(a.qq_raw, abs=1e-15)


def test_csv_round_trip():
    rows = run_sweep(ScenarioConfig(grid_points=20))
    text = rows_to_csv(rows)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    back = rows_from_csv(text)
    assert back == rows
    assert rows_to_csv(back) == text


def test_json_round_trip():
    rows = run_sweep(ScenarioConfig(grid_points=20))
    text = rows_to_json(rows)
    assert rows_from_json(text) == rows
    rec = json.loads(text)[0]
    assert list(rec) == list(CSV_COLUMNS)
    assert isinstance(rec["clipped_qq"], bool)


def test_sweep_byte_identical():
    cfg = ScenarioConfig(grid_points=40)
    assert rows_to_csv(run_sweep(cfg)) == rows_to_csv(run_sweep(cfg))


def test_csv_rejects_bad_input():
    with pytest.raises(ConfigError):
        rows_from_csv("a,b\n1,2\n")
    good = rows_to_csv(run_sweep(ScenarioConfig(grid_points=2)))
    with pytest.raises(ConfigError):
        rows_from_csv(good.replace("false", "maybe", 1).replace("true", "maybe", 1))


@pytest.mark.parametrize("kwargs, field", [
    ({"energy_E": -1.0}, "energy_E"),
    ({"tau_range": (0.0, 0.1)}, "tau_range"),
    ({"tau_range": (0.5, 0.1)}, "tau_range"),
    ({"eta_sq_fraction_range": (0.1, 2.0)}, "eta_sq_fraction_range"),
    ({"grid_points": 1}, "grid_points"),
    ({"feedback_fraction": 1.5}, "feedback_fraction"),
    ({"eta_mode": "best"}, "eta_mode"),
    ({"tau_range": 3}, "tau_range"),
])
def test_config_validation_names_field(kwargs, field):
    with pytest.raises(ConfigError, match=field):
        ScenarioConfig(**kwargs)


def test_config_from_file(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"energy_E": 100.0, "tau_range": [0.01, 0.1], "grid_points": 5}))
    cfg = ScenarioConfig.from_file(path)
    assert cfg.energy_E == 100.0 and cfg.tau_range == (0.01, 0.1)
    assert ScenarioConfig.from_dict(cfg.to_dict()) == cfg
    path.write_text(json.dumps({"energy": 1.0}))
    with pytest.raises(ConfigError, match="unknown config keys: energy"):
        ScenarioConfig.from_file(path)
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        ScenarioConfig.from_file(path)


def test_replace_ignores_none():
    cfg = ScenarioConfig().replace(energy_E=None, grid_points=7)
    assert cfg.energy_E == 1e6 and cfg.grid_points == 7
    assert math.isclose(run_sweep(cfg)[0].E_r, 1e-2)
