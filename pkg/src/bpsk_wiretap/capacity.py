"""Compound private-capacity formulas for BPSK over pure-loss links.

Three receiver/eavesdropper technology pairings are covered:

* ``qq``: both parties may use arbitrary quantum measurements,
  ``min_tau h_bpsk(tau^2 E) - max_eta h_bpsk(eta^2 E)``.
* ``cq``: the legitimate receiver uses homodyne detection (a binary symmetric
  channel), the eavesdropper is unrestricted,
  ``1 - max_tau h(P(tau^2 E)) - max_eta h_bpsk(eta^2 E)``.
* ``cc``: both parties are limited to homodyne detection,
  ``[1 - max_tau h(P(tau^2 E))] - max_eta [1 - h(P(eta^2 E))]``.

All transmissivity parameters are amplitude scales; the mean photon number
seen by a receiver is ``t**2 * E``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .entropy import binary_entropy, h_bpsk, homodyne_error
from .errors import ConfigError, DomainError

__all__ = [
    "ChannelParamSet",
    "CapacityEntry",
    "CapacityReport",
    "received_photon_number",
    "qq_capacity",
    "cq_capacity",
    "cc_capacity",
    "clip_nonnegative",
    "capacity_report",
    "capacity_sweep",
]


def _check_transmissivity(t: float, name: str = "t") -> float:
    t = float(t)
    if not (0.0 <= t <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {t!r}")
    return t


def received_photon_number(t: float, energy: float) -> float:
    """Mean photon number ``t**2 * E`` after a pure-loss link of amplitude ``t``."""
    t = _check_transmissivity(t)
    energy = float(energy)
    if not energy >= 0.0:
        raise DomainError(f"E must be non-negative, got {energy!r}")
    return t * t * energy


@dataclass(frozen=True)
class ChannelParamSet:
    """Legitimate (``tau_set``) and eavesdropper (``eta_set``) link sets plus input energy.

    Sets are stored sorted and de-duplicated. Use :meth:`from_intervals` for
    continuous ranges: every capacity term is monotone in the transmissivity,
    so only interval endpoints can attain the worst case.
    """

    tau_set: tuple[float, ...]
    eta_set: tuple[float, ...]
    energy: float

    def __post_init__(self):
        taus = tuple(sorted({_check_transmissivity(t, "tau") for t in self.tau_set}))
        etas = tuple(sorted({_check_transmissivity(e, "eta") for e in self.eta_set}))
        if not taus:
            raise ConfigError("tau_set must be non-empty")
        if not etas:
            raise ConfigError("eta_set must be non-empty")
        energy = float(self.energy)
        if not energy >= 0.0 or math.isinf(energy):
            raise ConfigError(f"energy must be finite and non-negative, got {self.energy!r}")
        object.__setattr__(self, "tau_set", taus)
        object.__setattr__(self, "eta_set", etas)
        object.__setattr__(self, "energy", energy)

    @classmethod
    def from_intervals(cls, tau_range: tuple[float, float], eta_range: tuple[float, float],
                       energy: float) -> "ChannelParamSet":
        for name, (lo, hi) in (("tau_range", tau_range), ("eta_range", eta_range)):
            if lo > hi:
                raise ConfigError(f"{name} must satisfy lo <= hi, got ({lo}, {hi})")
        return cls(tuple(tau_range), tuple(eta_range), energy)

    @classmethod
    def singleton(cls, tau: float, eta: float, energy: float) -> "ChannelParamSet":
        return cls((tau,), (eta,), energy)


@dataclass(frozen=True)
class CapacityEntry:
    """One capacity formula evaluated at one parameter set."""

    raw: float
    value: float
    clipped: bool
    worst_tau: float
    worst_eta: float


@dataclass(frozen=True)
class CapacityReport:
    energy: float
    qq: CapacityEntry
    cq: CapacityEntry
    cc: CapacityEntry
    received_photons: float = field(default=float("nan"))

    def as_row(self) -> dict:
        return {
            "E_r": self.received_photons,
            "qq_raw": self.qq.raw,
            "qq": self.qq.value,
            "cq_raw": self.cq.raw,
            "cq": self.cq.value,
            "cc_raw": self.cc.raw,
            "cc": self.cc.value,
            "clipped_qq": self.qq.clipped,
            "clipped_cq": self.cq.clipped,
            "clipped_cc": self.cc.clipped,
        }


def clip_nonnegative(raw: float) -> tuple[float, bool]:
    """Return ``(max(raw, 0), raw < 0)``."""
    raw = float(raw)
    if raw < 0.0:
        return 0.0, True
    return raw, False


def _extremum(values: Sequence[float], params: Sequence[float], *, largest: bool) -> tuple[float, float]:
    # params are sorted ascending; strict comparison keeps the smallest parameter on ties
    best_val, best_par = values[0], params[0]
    for v, p in zip(values[1:], params[1:]):
        if (v > best_val) if largest else (v < best_val):
            best_val, best_par = v, p
    return best_val, best_par


def _entry(bob: tuple[float, float], eve: tuple[float, float], offset: float = 0.0) -> CapacityEntry:
    (bob_term, tau), (eve_term, eta) = bob, eve
    raw = offset + bob_term - eve_term
    value, clipped = clip_nonnegative(raw)
    return CapacityEntry(raw, value, clipped, tau, eta)


def _terms(params: ChannelParamSet, fn: Callable[[float], float], which: str) -> list[float]:
    ts = params.tau_set if which == "tau" else params.eta_set
    return [fn(t * t * params.energy) for t in ts]


def _homodyne_entropy(nbar: float) -> float:
    return binary_entropy(homodyne_error(nbar))


def _homodyne_information(nbar: float) -> float:
    return 1.0 - binary_entropy(homodyne_error(nbar))


def qq_capacity(params: ChannelParamSet) -> CapacityEntry:
    """Quantum receiver vs. quantum eavesdropper (the compound BPSK capacity)."""
    bob = _extremum(_terms(params, h_bpsk, "tau"), params.tau_set, largest=False)
    eve = _extremum(_terms(params, h_bpsk, "eta"), params.eta_set, largest=True)
    return _entry(bob, eve)


def cq_capacity(params: ChannelParamSet) -> CapacityEntry:
    """Homodyne receiver vs. quantum eavesdropper."""
    bob_loss = _extremum(_terms(params, _homodyne_entropy, "tau"), params.tau_set, largest=True)
    eve = _extremum(_terms(params, h_bpsk, "eta"), params.eta_set, largest=True)
    # 1 - max h(P) - max h_bpsk
    return _entry((-bob_loss[0], bob_loss[1]), eve, offset=1.0)


def cc_capacity(params: ChannelParamSet) -> CapacityEntry:
    """Homodyne receiver vs. homodyne eavesdropper (classical degraded BSC wiretap rate)."""
    bob_loss = _extremum(_terms(params, _homodyne_entropy, "tau"), params.tau_set, largest=True)
    eve = _extremum(_terms(params, _homodyne_information, "eta"), params.eta_set, largest=True)
    return _entry((-bob_loss[0], bob_loss[1]), eve, offset=1.0)


def capacity_report(params: ChannelParamSet) -> CapacityReport:
    """Evaluate all three formulas; ``received_photons`` uses the worst-case ``tau``."""
    qq = qq_capacity(params)
    return CapacityReport(
        energy=params.energy,
        qq=qq,
        cq=cq_capacity(params),
        cc=cc_capacity(params),
        received_photons=params.tau_set[0] ** 2 * params.energy,
    )


def capacity_sweep(energy: float,
                   grid: Iterable[tuple[float, float | Sequence[float]]]) -> list[CapacityReport]:
    """Evaluate :func:`capacity_report` over ``(tau, eta_sq_fractions)`` grid points.

    Each point uses the singleton Bob set ``{tau}`` and the eavesdropper set
    ``{sqrt(f) * tau for f in eta_sq_fractions}``; a bare float is a single
    fraction. Reports come back in grid order.
    """
    grid = list(grid)
    if not grid:
        raise ConfigError("grid must contain at least one point")
    reports = []
    for index, (tau, fractions) in enumerate(grid):
        if isinstance(fractions, (int, float)):
            fractions = (fractions,)
        try:
            etas = tuple(math.sqrt(float(f)) * float(tau) for f in fractions)
            params = ChannelParamSet((tau,), etas, energy)
            reports.append(capacity_report(params))
        except (DomainError, ConfigError, ValueError) as exc:
            raise type(exc)(f"grid point {index}: {exc}") from exc
    return reports
