"""Scalar information-theoretic functions. All entropies are in bits."""

from __future__ import annotations

import math
from collections import Counter
from typing import Hashable, Iterable, Mapping

from scipy.special import erfc

from .errors import DomainError

_LN2 = math.log(2.0)


def _check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def _check_photon_number(nbar: float, name: str = "nbar") -> float:
    nbar = float(nbar)
    if not nbar >= 0.0:
        raise DomainError(f"{name} must be a non-negative photon number, got {nbar!r}")
    return nbar


def _h_small(q: float) -> float:
    # q <= 1/2; log1p keeps log(1-q) accurate for small q
    if q == 0.0:
        return 0.0
    return -(q * math.log(q) + (1.0 - q) * math.log1p(-q)) / _LN2


# below this distance from 1/2 the even power series is used
_SERIES_RADIUS = 0.1


def _h_near_half(u: float) -> float:
    # h(1/2 - u) = 1 - sum_k (2u)^(2k) / (2 ln2 k (2k - 1)); monotone in u under rounding
    t = 4.0 * u * u
    total, power = 0.0, 1.0
    for k in range(1, 16):
        power *= t
        total += power / (k * (2 * k - 1))
    return 1.0 - total / (2.0 * _LN2)


def binary_entropy(p: float) -> float:
    """Binary entropy ``h(p)`` in bits, with ``h(0) = h(1) = 0``.

    The argument is folded onto ``[0, 1/2]`` before evaluation, so
    ``binary_entropy(p) == binary_entropy(1 - p)`` whenever ``1 - (1 - p)``
    is exactly ``p`` in floating point. Close to ``p = 1/2`` a power series in
    ``p - 1/2`` replaces the logarithms.
    """
    p = _check_probability(p)
    u = abs(p - 0.5)
    if u < _SERIES_RADIUS:
        return _h_near_half(u)
    q = p if p <= 0.5 else 1.0 - p
    return min(_h_small(q), 1.0)


def h_bpsk(nbar: float) -> float:
    """Entropy of the equiprobable ensemble ``{|+a>, |-a>}`` with ``|a|^2 = nbar``.

    Evaluated as ``h((1 + exp(-2 nbar)) / 2)``, which equals
    ``h(cosh(nbar) exp(-nbar))`` but does not overflow for large ``nbar``.
    """
    nbar = _check_photon_number(nbar)
    u = 0.5 * math.exp(-2.0 * nbar)
    if u < _SERIES_RADIUS:
        return _h_near_half(u)
    # the smaller eigenvalue (1 - e^{-2n})/2 computed directly avoids cancellation
    return binary_entropy(-0.5 * math.expm1(-2.0 * nbar))


def h_bpsk_cosh(nbar: float) -> float:
    """Literal form ``h(cosh(nbar) exp(-nbar))``; valid only below cosh overflow."""
    nbar = _check_photon_number(nbar)
    return binary_entropy(min(math.cosh(nbar) * math.exp(-nbar), 1.0))


def homodyne_error(nbar: float) -> float:
    """Homodyne bit-error probability ``(1 - erf(sqrt(2 nbar))) / 2`` for BPSK."""
    nbar = _check_photon_number(nbar)
    return 0.5 * float(erfc(math.sqrt(2.0 * nbar)))


def entropy_continuity_bound(eps: float, energy: float) -> float:
    """Energy-constrained continuity bound ``h(eps) + E h(eps / E)``.

    Valid for trace distance ``0 <= eps <= E / (1 + E)`` (``eps`` is half the
    trace norm). Raises :class:`DomainError` outside that range.
    """
    eps = _check_probability(eps, "eps")
    energy = _check_photon_number(energy, "E")
    limit = energy / (1.0 + energy)
    if eps > limit * (1.0 + 1e-12):
        raise DomainError(f"eps={eps!r} exceeds the validity bound E/(1+E)={limit!r}")
    if eps == 0.0:
        return 0.0
    return binary_entropy(eps) + energy * binary_entropy(min(eps / energy, 1.0))


def sample_entropy(xn: Iterable[Hashable], p: Mapping[Hashable, float]) -> float:
    """Sample entropy ``-(1/n) log2 p(x^n)`` of a sequence under an i.i.d. source."""
    counts = Counter(xn)
    n = sum(counts.values())
    if n == 0:
        raise DomainError("sample entropy of an empty sequence is undefined")
    total = 0.0
    for symbol, count in counts.items():
        prob = p.get(symbol, 0.0)
        if prob <= 0.0:
            raise DomainError(f"symbol {symbol!r} has zero probability")
        total -= count * math.log2(prob)
    return total / n


def shannon_entropy(probs: Iterable[float]) -> float:
    """Shannon entropy in bits with the ``0 log 0 = 0`` convention."""
    total = 0.0
    for q in probs:
        if q > 0.0:
            total -= q * math.log2(q)
    return total
