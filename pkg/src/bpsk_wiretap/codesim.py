"""Randomized BPSK wiretap codes at desk-scale block lengths.

A codebook holds ``M x L`` codewords of ``n`` BPSK symbols ``+-sqrt(E)``:
message ``m`` is sent by picking one of its ``L`` codewords at random. The
legitimate receiver decodes the pair ``(m, l)`` with the square-root
measurement; the eavesdropper's leakage is the Holevo quantity of the
message-averaged states.

Random draws use NumPy's PCG64 bit generator seeded with the codebook seed
(``numpy.random.Generator(numpy.random.PCG64(seed))``), so codebooks are
reproducible across platforms.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (DegenerateInputError, DomainError, PropertyViolation, ResourceError,
                     UnsupportedConfigurationError)
from .gram import WeightedEnsemble, build_gram, ensemble_entropy, signed_mixture_trace_norms, srm_success
from .proof import FiniteDistribution, TypicalityParams, is_strongly_typical, typical_types

MAX_ENSEMBLE_STATES = 512
MAX_SYMBOLS = 10_000_000
_BPSK = FiniteDistribution.uniform((-1, 1))


@dataclass(frozen=True)
class Codebook:
    signs: np.ndarray
    energy: float
    seed: int | None = None
    prune_delta: float | None = None

    def __post_init__(self):
        signs = np.asarray(self.signs)
        if signs.ndim != 3 or min(signs.shape) < 1:
            raise DomainError(f"signs must have shape (M, L, n) with all sizes >= 1, got {signs.shape}")
        if not np.all(np.abs(signs) == 1):
            raise DomainError("codebook entries must be +1 or -1")
        if not self.energy >= 0:
            raise DomainError(f"energy must be non-negative, got {self.energy!r}")
        signs = signs.astype(np.int8)
        signs.setflags(write=False)
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "energy", float(self.energy))

    @property
    def M(self) -> int:
        return self.signs.shape[0]

    @property
    def L(self) -> int:
        return self.signs.shape[1]

    @property
    def n(self) -> int:
        return self.signs.shape[2]

    def labels(self, scale: float = 1.0) -> np.ndarray:
        """``(M * L, n)`` coherent amplitudes after a link of amplitude transmissivity ``scale``."""
        amp = scale * math.sqrt(self.energy)
        return (self.signs.reshape(self.M * self.L, self.n) * amp).astype(complex)

    def message_labels(self, m: int, scale: float = 1.0) -> np.ndarray:
        if not 0 <= m < self.M:
            raise DomainError(f"message index {m} out of range [0, {self.M})")
        amp = scale * math.sqrt(self.energy)
        return (self.signs[m] * amp).astype(complex)


def _check_budget(states: int) -> None:
    if states > MAX_ENSEMBLE_STATES:
        raise ResourceError(f"{states} ensemble states exceed the budget of {MAX_ENSEMBLE_STATES}")


def _check_scale(t: float, name: str) -> float:
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {t!r}")
    return t


def sample_codebook(M: int, L: int, n: int, energy: float, seed: int,
                    prune: float | None = None) -> Codebook:
    """Draw i.i.d. uniform signs; with ``prune=delta`` every codeword is redrawn until delta-typical."""
    if min(M, L, n) < 1:
        raise DomainError("M, L and n must be positive")
    if M * L * n > MAX_SYMBOLS:
        raise ResourceError(f"M*L*n = {M * L * n} exceeds the budget of {MAX_SYMBOLS}")
    rng = np.random.Generator(np.random.PCG64(seed))
    if prune is None:
        bits = rng.integers(0, 2, size=(M, L, n))
    else:
        params = TypicalityParams(n, prune)
        if not typical_types(_BPSK, n, prune):
            raise DegenerateInputError(f"no length-{n} sign sequence is {prune}-typical")
        bits = np.empty((M, L, n), dtype=np.int64)
        for m in range(M):
            for l in range(L):
                while True:
                    draw = rng.integers(0, 2, size=n)
                    if is_strongly_typical(2 * draw - 1, _BPSK, params):
                        bits[m, l] = draw
                        break
    return Codebook(2 * bits - 1, energy, seed, prune)


def success_probability(cb: Codebook, tau: float | Sequence[float]) -> float:
    """Average probability that the SRM recovers ``(m, l)`` over a link of amplitude ``tau``."""
    if not isinstance(tau, (int, float)):
        taus = list(tau)
        if len(taus) != 1:
            raise UnsupportedConfigurationError(
                "success probability is defined for a single legitimate link; "
                f"got {len(taus)} transmissivities")
        tau = taus[0]
    tau = _check_scale(tau, "tau")
    _check_budget(cb.M * cb.L)
    return srm_success(build_gram(WeightedEnsemble.uniform(cb.labels(tau))))


def _distinct(signs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # at most 2^n distinct codewords, however large M * L is
    uniq, inverse = np.unique(signs, axis=0, return_inverse=True)
    return uniq, inverse.reshape(-1)


def _entropy(signs: np.ndarray, amp: float) -> float:
    uniq, inverse = _distinct(signs)
    weights = np.bincount(inverse, minlength=len(uniq)) / len(inverse)
    return ensemble_entropy(build_gram(WeightedEnsemble(uniq * amp, weights)))


def leakage(cb: Codebook, eta: float) -> float:
    """Holevo information (bits) between the message and the eavesdropper's output."""
    eta = _check_scale(eta, "eta")
    _check_budget(cb.M * cb.L)
    amp = eta * math.sqrt(cb.energy)
    total = _entropy(cb.signs.reshape(cb.M * cb.L, cb.n), amp)
    conditional = sum(_entropy(cb.signs[m], amp) for m in range(cb.M)) / cb.M
    return max(total - conditional, 0.0)


def _covering_distances(cb: Codebook, eta: float, messages: Sequence[int]) -> list[float]:
    # each message's states are a subset of the full ensemble, so the difference of
    # averages is a signed mixture over the distinct codewords only
    _check_budget(cb.M * cb.L + cb.L)
    uniq, inverse = _distinct(cb.signs.reshape(cb.M * cb.L, cb.n))
    overall = np.bincount(inverse, minlength=len(uniq)) / len(inverse)
    rows = []
    for m in messages:
        own = inverse[m * cb.L:(m + 1) * cb.L]
        rows.append(overall - np.bincount(own, minlength=len(uniq)) / cb.L)
    labels = uniq * (eta * math.sqrt(cb.energy))
    return [min(float(d), 2.0) for d in signed_mixture_trace_norms(labels, rows)]


def covering_distance(cb: Codebook, eta: float, m: int) -> float:
    """Trace norm between the eavesdropper's overall average state and that of message ``m``."""
    eta = _check_scale(eta, "eta")
    if not 0 <= m < cb.M:
        raise DomainError(f"message index {m} out of range [0, {cb.M})")
    return _covering_distances(cb, eta, [m])[0]


@dataclass(frozen=True)
class WiretapCodeReport:
    """Outcome of one code at one ``(tau, eta)`` pair; ``covering_distance`` is the worst message."""

    success: float
    leakage_bits: float
    covering_distance: float
    tau: float
    eta: float
    M: int
    L: int
    n: int
    E: float
    seed: int | None

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate_code(cb: Codebook, tau: float, eta: float) -> WiretapCodeReport:
    return WiretapCodeReport(
        success=success_probability(cb, tau),
        leakage_bits=leakage(cb, eta),
        covering_distance=max(_covering_distances(cb, _check_scale(eta, "eta"), range(cb.M))),
        tau=float(tau), eta=float(eta), M=cb.M, L=cb.L, n=cb.n, E=cb.energy, seed=cb.seed,
    )


def covering_trend(M: int, n: int, energy: float, eta: float, L_list: Iterable[int],
                   seeds: Iterable[int]) -> list[dict]:
    """Mean and sample standard deviation of the covering distance for each ``L``.

    Every seed draws a fresh codebook for each ``L``; the statistic pools all
    seeds and messages.
    """
    seeds = list(seeds)
    rows = []
    for L in L_list:
        samples = []
        for seed in seeds:
            cb = sample_codebook(M, L, n, energy, seed)
            samples.extend(_covering_distances(cb, _check_scale(eta, "eta"), range(M)))
        arr = np.asarray(samples)
        std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
        rows.append({"L": int(L), "mean": float(arr.mean()), "std": std, "count": int(arr.size)})
    return rows


def leakage_monotonicity(cb: Codebook, eta_list: Sequence[float], slack: float = 1e-9) -> list[dict]:
    """Leakage at each ``eta``; raises :class:`PropertyViolation` if it ever decreases."""
    etas = [float(e) for e in eta_list]
    if any(b < a for a, b in zip(etas, etas[1:])):
        raise DomainError("eta_list must be sorted ascending")
    rows = [{"eta": e, "leakage": leakage(cb, e)} for e in etas]
    for prev, cur in zip(rows, rows[1:]):
        if cur["leakage"] < prev["leakage"] - slack:
            raise PropertyViolation(
                f"leakage decreased from {prev['leakage']!r} at eta={prev['eta']} "
                f"to {cur['leakage']!r} at eta={cur['eta']}")
    return rows
