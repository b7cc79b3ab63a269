"""Finite-blocklength tools behind the random-coding argument.

Strong typicality (membership, exhaustive typical sets, pruned source
distributions), typical-subspace dimensions, and evaluators for the packing
and covering guarantees with the parameter choices ``d = 1``,
``D = (1 - eps') 2^{n (S(sigma) - c' delta)}`` and
``D~ = 2^{n (S(sigma~) + delta)}``.

Large quantities are carried as base-2 logarithms; a bound that says nothing
(negative success guarantee, trace distance above 2, failure probability at
least 1) is returned with ``vacuous=True`` rather than clipped.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Mapping, Sequence

import numpy as np

from .entropy import binary_entropy, shannon_entropy
from .errors import ConfigError, DegenerateInputError, DomainError, ResourceError

ENUMERATION_CAP = 2 ** 20
# absorbs rounding in |N(x)/n - p(x)| <= delta at the set boundary
_TYPICALITY_SLACK = 1e-12


@dataclass(frozen=True)
class FiniteDistribution:
    symbols: tuple
    probs: np.ndarray

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        symbols = tuple(self.symbols)
        if len(symbols) != probs.size or len(set(symbols)) != len(symbols):
            raise ConfigError("symbols must be distinct and match the probability vector")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-12:
            raise ConfigError(f"probabilities must be non-negative and sum to 1 (sum={probs.sum()!r})")
        object.__setattr__(self, "symbols", symbols)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def from_mapping(cls, mapping: Mapping[Hashable, float]) -> "FiniteDistribution":
        return cls(tuple(mapping), np.array(list(mapping.values()), dtype=float))

    @classmethod
    def uniform(cls, symbols: Sequence[Hashable]) -> "FiniteDistribution":
        symbols = tuple(symbols)
        return cls(symbols, np.full(len(symbols), 1.0 / len(symbols)))

    @property
    def size(self) -> int:
        return len(self.symbols)

    def entropy(self) -> float:
        return shannon_entropy(self.probs)

    def index(self, symbol) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise DomainError(f"symbol {symbol!r} is not in the alphabet {self.symbols}") from None


def default_typicality_constant(p: FiniteDistribution) -> float:
    """``c = sum_{x: p(x) > 0} log2(1 / p(x))``.

    For a strongly typical sequence the sample entropy then deviates from
    ``H(p)`` by at most ``c * delta``, which makes both cardinality bounds of
    the typical set hold for every ``n``.
    """
    support = p.probs[p.probs > 0]
    return float(-np.sum(np.log2(support)))


@dataclass(frozen=True)
class TypicalityParams:
    n: int
    delta: float
    eps: float = 0.05
    c: float | None = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ConfigError(f"n must be a positive integer, got {self.n!r}")
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta!r}")
        if not 0 < self.eps < 1:
            raise ConfigError(f"eps must lie in (0, 1), got {self.eps!r}")
        if self.c is not None and not self.c > 0:
            raise ConfigError(f"c must be positive, got {self.c!r}")

    def constant(self, p: FiniteDistribution) -> float:
        return default_typicality_constant(p) if self.c is None else float(self.c)


def _count_ok(counts: np.ndarray, n: int, probs: np.ndarray, delta: float) -> np.ndarray:
    # counts has the symbol axis last
    freq = counts / n
    close = np.abs(freq - probs) <= delta + _TYPICALITY_SLACK
    ok = np.where(probs > 0, close, counts == 0)
    return np.all(ok, axis=-1)


def is_strongly_typical(xn: Sequence[Hashable], p: FiniteDistribution, params: TypicalityParams) -> bool:
    """Delta-strong typicality of ``xn``; ``params.n`` is ignored in favour of ``len(xn)``."""
    xn = list(xn)
    if not xn:
        raise DomainError("empty sequence")
    counts = np.zeros(p.size)
    for x in xn:
        counts[p.index(x)] += 1
    return bool(_count_ok(counts, len(xn), p.probs, params.delta))


def typicality_failure_bound(p: FiniteDistribution, n: int, delta: float) -> float:
    """Hoeffding plus union bound on ``Pr[X^n not typical]``, capped at 1."""
    k = int(np.count_nonzero(p.probs))
    return min(1.0, 2.0 * k * math.exp(-2.0 * n * delta * delta))


@dataclass(frozen=True)
class TypicalSet:
    """Exhaustively enumerated typical set.

    Sequences are stored as integers in base ``|alphabet|`` with the first
    symbol most significant.
    """

    distribution: FiniteDistribution
    n: int
    delta: float
    indices: np.ndarray
    c: float
    counts: np.ndarray | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return int(self.indices.size)

    def digits(self) -> np.ndarray:
        """``(len(self), n)`` array of symbol indices."""
        k = self.distribution.size
        powers = k ** np.arange(self.n - 1, -1, -1, dtype=np.int64)
        return (self.indices[:, None] // powers[None, :]) % k

    def symbol_counts(self) -> np.ndarray:
        """``(len(self), |alphabet|)`` occurrence counts per sequence."""
        if self.counts is not None:
            return self.counts
        digits = self.digits()
        return np.stack([(digits == s).sum(axis=1) for s in range(self.distribution.size)], axis=1)

    def sequence_probabilities(self) -> np.ndarray:
        probs = self.distribution.probs
        # a huge finite negative keeps 0 * log(0) at zero in the matrix product
        logp = np.where(probs > 0, np.log(np.where(probs > 0, probs, 1.0)), -1e300)
        return np.exp(self.symbol_counts() @ logp)

    def __iter__(self) -> Iterator[tuple]:
        symbols = self.distribution.symbols
        for row in self.digits():
            yield tuple(symbols[i] for i in row)

    def probability(self) -> float:
        """``Pr[X^n in T]`` under the i.i.d. source."""
        return float(np.sum(self.sequence_probabilities()))

    def log2_size_bounds(self, eps: float) -> tuple[float, float]:
        """``(log2 lower, log2 upper)`` cardinality bounds ``(1-eps) 2^{n(H - c delta)}`` and ``2^{n(H + c delta)}``."""
        h = self.distribution.entropy()
        slack = self.n * self.c * self.delta
        return math.log2(1.0 - eps) + self.n * h - slack, self.n * h + slack

    def satisfies_cardinality_bounds(self, eps: float | None = None) -> bool:
        """Check both cardinality bounds; ``eps`` defaults to ``1 - Pr[X^n in T]``."""
        if eps is None:
            eps = max(1.0 - self.probability(), 0.0)
        if eps >= 1.0:
            return False
        lo, hi = self.log2_size_bounds(eps)
        size = len(self)
        if size == 0:
            return False
        log_size = math.log2(size)
        return lo <= log_size + 1e-12 and log_size <= hi + 1e-12


def sequence_probabilities(p: FiniteDistribution, digits: np.ndarray) -> np.ndarray:
    return np.prod(p.probs[digits], axis=-1)


def _enumerate(p: FiniteDistribution, n: int, cap: int) -> tuple[np.ndarray, np.ndarray]:
    k = p.size
    total = k ** n
    if total > cap:
        raise ResourceError(f"{k}^{n} = {total} sequences exceed the enumeration cap {cap}")
    return _all_counts(k, n)


@functools.lru_cache(maxsize=4)
def _all_counts(k: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    # read-only so cached arrays cannot be corrupted by callers
    total = k ** n
    indices = np.arange(total, dtype=np.int64)
    counts = np.zeros((total, k), dtype=np.int64)
    rest = indices.copy()
    for _ in range(n):
        digit = rest % k
        for s in range(k):
            counts[:, s] += digit == s
        rest //= k
    indices.setflags(write=False)
    counts.setflags(write=False)
    return indices, counts


def typical_set(p: FiniteDistribution, params: TypicalityParams, cap: int = ENUMERATION_CAP) -> TypicalSet:
    """Enumerate ``T_delta`` by brute force over all ``|alphabet|^n`` sequences."""
    indices, counts = _enumerate(p, params.n, cap)
    # membership depends on the type only, so classify types and look sequences up by type id
    radix = (params.n + 1) ** np.arange(p.size, dtype=np.int64)
    ok_ids = [int(np.dot(t, radix)) for t in typical_types(p, params.n, params.delta)]
    mask = np.isin(counts @ radix, ok_ids)
    return TypicalSet(p, params.n, params.delta, indices[mask], params.constant(p), counts[mask])


def _types(n: int, k: int) -> Iterator[tuple[int, ...]]:
    # all count vectors of length k summing to n
    for bars in itertools.combinations(range(n + k - 1), k - 1):
        prev = -1
        out = []
        for b in bars:
            out.append(b - prev - 1)
            prev = b
        out.append(n + k - 2 - prev)
        yield tuple(out)


def typical_types(p: FiniteDistribution, n: int, delta: float) -> list[tuple[int, ...]]:
    """Count vectors (types) whose sequences are delta-strongly typical."""
    k = p.size
    out = []
    for counts in _types(n, k):
        if _count_ok(np.asarray(counts, dtype=float), n, p.probs, delta):
            out.append(counts)
    return out


def typical_set_size(p: FiniteDistribution, params: TypicalityParams) -> int:
    """``|T_delta|`` from a sum of multinomial coefficients over typical types."""
    n = params.n
    return sum(math.factorial(n) // math.prod(math.factorial(c) for c in counts)
               for counts in typical_types(p, n, params.delta))


@dataclass(frozen=True)
class PrunedDistribution:
    """Source distribution conditioned on the typical set: ``p(x^n) / xi`` on ``T_delta``."""

    typical: TypicalSet
    probs: np.ndarray
    xi: float

    def entropy(self) -> float:
        return shannon_entropy(self.probs)

    def entropy_rate(self) -> float:
        return self.entropy() / self.typical.n


def pruned_distribution(p: FiniteDistribution, params: TypicalityParams,
                        cap: int = ENUMERATION_CAP) -> PrunedDistribution:
    ts = typical_set(p, params, cap)
    if len(ts) == 0:
        raise DegenerateInputError(f"the typical set is empty for n={params.n}, delta={params.delta}")
    raw = ts.sequence_probabilities()
    xi = float(raw.sum())
    return PrunedDistribution(ts, raw / xi, xi)


def sample_pruned(p: FiniteDistribution, params: TypicalityParams, rng: np.random.Generator,
                  size: int, max_tries: int = 100_000) -> np.ndarray:
    """Rejection-sample ``size`` typical sequences (symbol indices), for ``n`` beyond enumeration."""
    if not typical_types(p, params.n, params.delta):
        raise DegenerateInputError(f"the typical set is empty for n={params.n}, delta={params.delta}")
    out = np.empty((size, params.n), dtype=np.int64)
    for row in range(size):
        for _ in range(max_tries):
            draw = rng.choice(p.size, size=params.n, p=p.probs)
            counts = np.bincount(draw, minlength=p.size)
            if _count_ok(counts, params.n, p.probs, params.delta):
                out[row] = draw
                break
        else:
            raise DegenerateInputError(f"no typical sequence found in {max_tries} draws")
    return out


def typical_subspace_dims(spectrum: Sequence[float], params: TypicalityParams) -> tuple[int, bool]:
    """Dimension of the strongly typical subspace of ``rho^{(x)n}`` and whether it is ``<= 2^{n(S + c delta)}``.

    ``spectrum`` is the eigenvalue list of ``rho``; the subspace is spanned by
    eigenvector products whose index sequence is typical.
    """
    p = FiniteDistribution(tuple(range(len(spectrum))), np.asarray(spectrum, dtype=float))
    dim = typical_set_size(p, params)
    bound = params.n * (p.entropy() + params.constant(p) * params.delta)
    return dim, bool(dim == 0 or math.log2(dim) <= bound + 1e-12)


# ---------------------------------------------------------------------------
# packing / covering


@dataclass(frozen=True)
class ProofParams:
    """Inputs to the finite-n packing and covering guarantees.

    ``S_sigma`` and ``S_sigma_tilde`` are the single-letter entropies of the
    receiver's and eavesdropper's average states. ``d = d~ = 1`` for pure
    codeword states.
    """

    S_sigma: float
    S_sigma_tilde: float
    eps: float
    eps_prime: float
    M_size: int
    L_size: int
    d: float = 1.0
    d_tilde: float = 1.0

    def __post_init__(self):
        for name in ("S_sigma", "S_sigma_tilde"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if not 0 <= self.eps < 1 or not 0 <= self.eps_prime < 1:
            raise ConfigError("eps and eps_prime must lie in [0, 1)")
        if self.M_size < 1 or self.L_size < 1:
            raise ConfigError("code sizes must be positive")

    def log2_D(self, n: int, c_prime: float, delta: float) -> float:
        return math.log2(1.0 - self.eps_prime) + n * (self.S_sigma - c_prime * delta)

    def log2_D_tilde(self, n: int, delta: float) -> float:
        return n * (self.S_sigma_tilde + delta)


@dataclass(frozen=True)
class PackingBound:
    value: float
    log2_penalty: float
    vacuous: bool


@dataclass(frozen=True)
class CoveringBound:
    distance: float
    failure_probability: float
    log2_failure: float
    vacuous: bool


def _pow2(x: float) -> float:
    return math.inf if x > 1023 else 2.0 ** x


def packing_bound(params: ProofParams, n: int, c_prime: float, delta: float,
                  truncation_slack: bool = False) -> PackingBound:
    """Guaranteed expected decoding success ``1 - 6 sqrt(eps) - 4 |M||L| d / D`` (minus ``1/n``).

    ``truncation_slack`` subtracts the extra ``1/n`` incurred when moving from
    the truncated states back to the exact coherent states.
    """
    log2_D = params.log2_D(n, c_prime, delta)
    log2_pen = 2.0 + math.log2(params.M_size) + math.log2(params.L_size) + math.log2(params.d) - log2_D
    value = 1.0 - 6.0 * math.sqrt(params.eps) - _pow2(log2_pen)
    if truncation_slack:
        value -= 1.0 / n
    # the packing lemma also needs d < D
    vacuous = value <= 0.0 or log2_D <= math.log2(params.d)
    return PackingBound(value, log2_pen, vacuous)


def covering_bound(eps: float, L_size: int, D_tilde: float | None = None, *,
                   log2_D_tilde: float | None = None, n: int | None = None,
                   d: float = 1.0) -> CoveringBound:
    """Distance guarantee ``30 eps^{1/4}`` (plus ``1/n``) and its failure probability.

    The failure probability ``2 D~ exp(-eps^3 |L| d / (4 D~))`` is evaluated in
    log space; pass ``log2_D_tilde`` when ``D~`` itself does not fit a float.
    """
    if not 0 < eps < 1:
        raise DomainError(f"eps must lie in (0, 1), got {eps!r}")
    if L_size < 1:
        raise DomainError("L_size must be positive")
    if log2_D_tilde is None:
        if D_tilde is None or not D_tilde > 0:
            raise DomainError("D_tilde must be positive")
        log2_D_tilde = math.log2(D_tilde)
    distance = 30.0 * eps ** 0.25 + (1.0 / n if n else 0.0)
    log2_rate = 3.0 * math.log2(eps) + math.log2(L_size) + math.log2(d) - 2.0 - log2_D_tilde
    decay = _pow2(log2_rate)  # eps^3 |L| d / (4 D~)
    log2_fail = 1.0 + log2_D_tilde - decay / math.log(2.0)
    failure = 0.0 if log2_fail < -1074 else _pow2(log2_fail)
    return CoveringBound(distance, failure, log2_fail, distance > 2.0 or log2_fail >= 0.0)


def achievable_rate(S_bob: float, S_eve_worst: float) -> float:
    """Rate ``S(rho_bar) - max_eta S(rho~_eta)``; not clipped."""
    if S_bob < 0 or S_eve_worst < 0:
        raise DomainError("entropies must be non-negative")
    return S_bob - S_eve_worst


def entropy_slack(n: int, energy: float) -> float:
    """Entropy loss ``h(1/n) + E h(1/(E n))`` from truncating to trace distance ``1/n``."""
    if n < 1:
        raise DomainError("n must be positive")
    if energy <= 0:
        return binary_entropy(1.0 / n)
    return binary_entropy(1.0 / n) + energy * binary_entropy(min(1.0 / (energy * n), 1.0))


def cutoff_for_block(n: int) -> int:
    """Per-mode Fock cutoff ``ceil(2 log2 n)``, keeping the n-mode truncation error near ``1/n``."""
    if n < 1:
        raise DomainError("n must be positive")
    return max(1, math.ceil(2.0 * math.log2(n))) if n > 1 else 1
