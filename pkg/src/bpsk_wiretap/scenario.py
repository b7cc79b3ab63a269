"""Satellite-downlink scenario: configuration, capacity sweep, block budget, CSV/JSON I/O.

Config files are JSON objects whose keys are the :class:`ScenarioConfig`
field names; unknown keys are rejected. Ranges are two-element lists.

==========================  ==========  ===========================================
key                         default     meaning
==========================  ==========  ===========================================
``energy_E``                1e6         mean photon number per transmitted symbol
``tau_range``               [1e-4,1e-2] amplitude transmissivity range of the main link
``eta_sq_fraction_range``   [0.02,0.2]  range of eta^2 / tau^2 for the eavesdropper
``grid_points``             128         number of log-spaced tau values
``worst_case_eta_fraction`` 0.2         eta^2 / tau^2 used by the default sweep
``eta_mode``                worst_case  ``worst_case`` or ``interval`` (both range ends)
``symbol_rate``             1e10        symbols per second
``coherence_window``        1e-2        seconds over which the channel is constant
``feedback_fraction``       0.5         share of the window spent on feedback
==========================  ==========  ===========================================

The nominal 0.1 W transmitter corresponds to ``energy_E = 1e6``; the config
takes photon numbers directly.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

import numpy as np

from .capacity import ChannelParamSet, capacity_report
from .errors import ConfigError

CSV_COLUMNS = ("E_r", "qq_raw", "qq", "cq_raw", "cq", "cc_raw", "cc",
               "clipped_qq", "clipped_cq", "clipped_cc")
_FLAG_COLUMNS = frozenset(c for c in CSV_COLUMNS if c.startswith("clipped_"))
ETA_MODES = ("worst_case", "interval")


@dataclass(frozen=True)
class ScenarioConfig:
    energy_E: float = 1e6
    tau_range: tuple[float, float] = (1e-4, 1e-2)
    eta_sq_fraction_range: tuple[float, float] = (0.02, 0.2)
    grid_points: int = 128
    worst_case_eta_fraction: float = 0.2
    eta_mode: str = "worst_case"
    symbol_rate: float = 1e10
    coherence_window: float = 1e-2
    feedback_fraction: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "tau_range", _pair(self.tau_range, "tau_range"))
        object.__setattr__(self, "eta_sq_fraction_range",
                           _pair(self.eta_sq_fraction_range, "eta_sq_fraction_range"))
        for name in ("energy_E", "worst_case_eta_fraction", "symbol_rate", "coherence_window"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)) or isinstance(value, bool) or not value > 0 \
                    or math.isinf(value):
                raise ConfigError(f"{name}: must be a positive finite number, got {value!r}")
        if not 0 <= self.feedback_fraction <= 1:
            raise ConfigError(f"feedback_fraction: must lie in [0, 1], got {self.feedback_fraction!r}")
        if isinstance(self.grid_points, bool) or int(self.grid_points) != self.grid_points \
                or self.grid_points < 2:
            raise ConfigError(f"grid_points: must be an integer >= 2, got {self.grid_points!r}")
        lo, hi = self.tau_range
        if not 0 < lo <= hi <= 1:
            raise ConfigError(f"tau_range: must satisfy 0 < lo <= hi <= 1, got {self.tau_range}")
        lo, hi = self.eta_sq_fraction_range
        if not 0 < lo <= hi <= 1:
            raise ConfigError(f"eta_sq_fraction_range: must satisfy 0 < lo <= hi <= 1, "
                              f"got {self.eta_sq_fraction_range}")
        if not self.worst_case_eta_fraction <= 1:
            raise ConfigError("worst_case_eta_fraction: must not exceed 1")
        if self.eta_mode not in ETA_MODES:
            raise ConfigError(f"eta_mode: must be one of {ETA_MODES}, got {self.eta_mode!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> "ScenarioConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        return cls.from_dict(data)

    def replace(self, **overrides) -> "ScenarioConfig":
        overrides = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **overrides)

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["tau_range"] = list(self.tau_range)
        out["eta_sq_fraction_range"] = list(self.eta_sq_fraction_range)
        return out


def _pair(value, name: str) -> tuple[float, float]:
    try:
        lo, hi = value
        return float(lo), float(hi)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: must be a pair [lo, hi], got {value!r}") from None


def block_budget(cfg: ScenarioConfig) -> int:
    """Symbols transmittable while the channel is constant: ``floor(rate * window * fraction)``.

    Computed in decimal arithmetic on the shortest float representations so
    that e.g. ``1e10 * 1e-2 * 0.5`` gives exactly ``5e7``.
    """
    product = Decimal(repr(float(cfg.symbol_rate))) * Decimal(repr(float(cfg.coherence_window))) \
        * Decimal(repr(float(cfg.feedback_fraction)))
    return int(product.to_integral_value(rounding="ROUND_FLOOR"))


@dataclass(frozen=True)
class SweepRow:
    E_r: float
    qq_raw: float
    qq: float
    cq_raw: float
    cq: float
    cc_raw: float
    cc: float
    clipped_qq: bool
    clipped_cq: bool
    clipped_cc: bool
    tau: float = field(default=float("nan"), compare=False)

    def as_dict(self) -> dict:
        return {c: getattr(self, c) for c in CSV_COLUMNS}


def tau_grid(cfg: ScenarioConfig) -> np.ndarray:
    lo, hi = cfg.tau_range
    grid = np.logspace(math.log10(lo), math.log10(hi), cfg.grid_points)
    grid[0], grid[-1] = lo, hi
    return grid


def run_sweep(cfg: ScenarioConfig) -> list[SweepRow]:
    """Capacities on a log-spaced ``tau`` grid, ordered by received photon number."""
    rows = []
    for tau in tau_grid(cfg):
        tau = float(tau)
        if cfg.eta_mode == "worst_case":
            fractions = (cfg.worst_case_eta_fraction,)
        else:
            fractions = cfg.eta_sq_fraction_range
        etas = tuple(math.sqrt(f) * tau for f in fractions)
        report = capacity_report(ChannelParamSet((tau,), etas, cfg.energy_E))
        rows.append(SweepRow(tau=tau, **report.as_row()))
    rows.sort(key=lambda r: r.E_r)
    return rows


# ---------------------------------------------------------------------------
# serialization


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return format(float(value), ".17g")


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        d = row.as_dict() if hasattr(row, "as_dict") else row
        writer.writerow([_fmt(d[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def rows_from_csv(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ConfigError(f"unexpected CSV header {reader.fieldnames}")
    out = []
    for rec in reader:
        values = {}
        for c in CSV_COLUMNS:
            if c in _FLAG_COLUMNS:
                if rec[c] not in ("true", "false"):
                    raise ConfigError(f"column {c}: expected true/false, got {rec[c]!r}")
                values[c] = rec[c] == "true"
            else:
                values[c] = float(rec[c])
        out.append(SweepRow(**values))
    return out


def _json_safe(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (float, np.floating)):
        return float(format(float(value), ".17g"))
    return value


def rows_to_json(rows) -> str:
    records = []
    for row in rows:
        d = row.as_dict() if hasattr(row, "as_dict") else row
        records.append({c: _json_safe(d[c]) for c in CSV_COLUMNS})
    return json.dumps(records, indent=2)


def rows_from_json(text: str) -> list[SweepRow]:
    return [SweepRow(**{c: rec[c] for c in CSV_COLUMNS}) for rec in json.loads(text)]
