"""Truncated Fock-space oracle.

Dense number-basis representations of coherent states, density operators,
entropies, trace norms and square-root-measurement POVMs. This is the
brute-force reference that :mod:`bpsk_wiretap.gram` is checked against; it
is not meant to be fast.

Dense operators are capped at ``(N+1)**k <= max_dense_dim()`` (default 4096,
override with the ``BPSK_WIRETAP_FOCK_MAX_DIM`` environment variable).
Ensembles that are too large for dense operators but whose explicit Fock
vectors still fit in memory are handled by the ``*_fock`` functions at the
bottom of the module, which keep every state as an explicit matrix of Fock
coefficients and only compress onto the span of those vectors.
"""

from __future__ import annotations

import math
import os
import warnings
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.special import gammaln
from scipy.stats import poisson

from .entropy import shannon_entropy
from .errors import ConfigError, ResourceError, ShapeError
from .gram import ERROR_TOL, WeightedEnsemble, clamp_spectrum

MAX_DIM_ENV = "BPSK_WIRETAP_FOCK_MAX_DIM"
DEFAULT_MAX_DIM = 4096
TAIL_CUTOFF_FACTOR = 8.0 * math.e


def max_dense_dim() -> int:
    raw = os.environ.get(MAX_DIM_ENV)
    if raw is None:
        return DEFAULT_MAX_DIM
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(f"{MAX_DIM_ENV} must be an integer, got {raw!r}") from exc
    if value < 1:
        raise ConfigError(f"{MAX_DIM_ENV} must be positive, got {value}")
    return value


def _check_cutoff(N: int) -> int:
    if int(N) != N or N < 0:
        raise ConfigError(f"cutoff must be a non-negative integer, got {N!r}")
    return int(N)


# ---------------------------------------------------------------------------
# states


def coherent_vector(alpha: complex, N: int) -> np.ndarray:
    """Number-basis coefficients ``exp(-|a|^2/2) a^n / sqrt(n!)`` for ``n <= N``.

    Magnitudes are computed in log space, so large ``N`` does not overflow.
    """
    N = _check_cutoff(N)
    alpha = complex(alpha)
    out = np.zeros(N + 1, dtype=complex)
    if alpha == 0:
        out[0] = 1.0
        return out
    n = np.arange(N + 1)
    r = abs(alpha)
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    out[:] = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    return out


def product_vector(label, N: int) -> np.ndarray:
    """Tensor product of per-mode truncated coherent vectors (mode 0 most significant)."""
    label = np.atleast_1d(np.asarray(label, dtype=complex))
    return reduce(np.kron, (coherent_vector(a, N) for a in label))


@dataclass(frozen=True)
class TruncationReport:
    """Probability mass of ``|alpha>`` above the cutoff, against the ``2^-N / 2`` bound."""

    cutoff: int
    tail: float
    bound: float
    precondition: bool
    satisfied: bool


def tail_probability(alpha: complex, N: int) -> TruncationReport:
    """Poisson tail ``1 - sum_{n<=N} Pr[n]`` of a coherent state with mean ``|alpha|^2``.

    ``precondition`` records whether ``N > 8 e |alpha|^2``, the regime where
    the tail is guaranteed to be at most ``2^-N / 2``.
    """
    N = _check_cutoff(N)
    mean = abs(complex(alpha)) ** 2
    tail = float(poisson.sf(N, mean)) if mean > 0 else 0.0
    bound = 0.5 * 2.0 ** (-N)
    return TruncationReport(N, tail, bound, N > TAIL_CUTOFF_FACTOR * mean, tail <= bound)


@dataclass(frozen=True)
class FockOperator:
    """Dense operator on ``k`` modes, each truncated at ``cutoff`` photons."""

    matrix: np.ndarray
    cutoff: int
    modes: int = 1

    def __post_init__(self):
        dim = (self.cutoff + 1) ** self.modes
        if self.matrix.shape != (dim, dim):
            raise ShapeError(f"expected a {dim}x{dim} matrix for cutoff {self.cutoff} "
                             f"and {self.modes} mode(s), got {self.matrix.shape}")

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_vector(cls, vec: np.ndarray, cutoff: int, modes: int = 1) -> "FockOperator":
        vec = np.asarray(vec, dtype=complex)
        return cls(np.outer(vec, vec.conj()), cutoff, modes)

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def _guard_dim(cutoff: int, modes: int) -> int:
    dim = (cutoff + 1) ** modes
    cap = max_dense_dim()
    if dim > cap:
        raise ResourceError(f"Fock dimension ({cutoff}+1)^{modes} = {dim} exceeds the cap {cap} "
                            f"(set {MAX_DIM_ENV} to raise it)")
    return dim


def check_density(rho: FockOperator, tol: float = 1e-8) -> None:
    """Raise :class:`ConfigError` unless ``rho`` is Hermitian, unit trace and PSD."""
    m = rho.matrix
    if not np.allclose(m, m.conj().T, atol=1e-12 * max(1.0, np.abs(m).max())):
        raise ConfigError("operator is not Hermitian")
    if abs(np.trace(m).real - 1.0) > tol:
        raise ConfigError(f"density operator must have unit trace, got {np.trace(m).real!r}")
    if np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min() < -ERROR_TOL:
        raise ConfigError("density operator is not positive semidefinite")


def _truncate_mode(tensor: np.ndarray, mode: int, modes: int, N: int) -> np.ndarray:
    # tensor has 2*modes axes: kets first, then bras
    ket, bra = mode, modes + mode
    keep = [slice(None)] * (2 * modes)
    keep[ket] = slice(0, N + 1)
    keep[bra] = slice(0, N + 1)
    out = tensor[tuple(keep)].copy()
    if tensor.shape[ket] > N + 1:
        # mass above the cutoff on this mode is moved to |0><0| of the same mode
        tail = [slice(None)] * (2 * modes)
        tail[ket] = slice(N + 1, None)
        tail[bra] = slice(N + 1, None)
        discarded = np.trace(tensor[tuple(tail)], axis1=ket, axis2=bra)
        target = [slice(None)] * (2 * modes)
        target[ket] = 0
        target[bra] = 0
        out[tuple(target)] += discarded
    return out


def truncate_renormalize(rho: FockOperator, N: int) -> FockOperator:
    """Apply ``rho -> P_N rho P_N + Tr[(1 - P_N) rho] |0><0|`` independently on every mode.

    ``rho`` must be a density operator with cutoff ``>= N``. The result has
    unit trace and cutoff ``N``.
    """
    N = _check_cutoff(N)
    check_density(rho)
    if rho.cutoff < N:
        raise ConfigError(f"cannot truncate cutoff {rho.cutoff} up to {N}")
    k = rho.modes
    d = rho.cutoff + 1
    tensor = rho.matrix.reshape((d,) * (2 * k))
    for mode in range(k):
        tensor = _truncate_mode(tensor, mode, k, N)
    dim = (N + 1) ** k
    return FockOperator(tensor.reshape(dim, dim), N, k)


def truncated_coherent_density(alpha: complex, N: int) -> np.ndarray:
    """Single-mode ``P_N |a><a| P_N + tail |0><0|`` built directly from the exact state."""
    v = coherent_vector(alpha, N)
    rho = np.outer(v, v.conj())
    rho[0, 0] += tail_probability(alpha, N).tail
    return rho


def density_from_ensemble(ensemble: WeightedEnsemble, N: int) -> FockOperator:
    """Dense truncated, renormalized average state ``sum_i w_i rho'_i``."""
    N = _check_cutoff(N)
    k = ensemble.modes
    dim = _guard_dim(N, k)
    worst = float(np.max(np.abs(ensemble.labels)) ** 2)
    if not N > TAIL_CUTOFF_FACTOR * worst:
        warnings.warn(f"cutoff {N} does not exceed 8e|alpha|^2 = {TAIL_CUTOFF_FACTOR * worst:.3g}; "
                      "truncation error is not guaranteed small", stacklevel=2)
    out = np.zeros((dim, dim), dtype=complex)
    for w, label in zip(ensemble.weights, ensemble.labels):
        out += w * reduce(np.kron, (truncated_coherent_density(a, N) for a in label))
    return FockOperator(out, N, k)


def photon_number_expectation(rho: FockOperator) -> float:
    """``Tr[N rho]`` with ``N`` the total photon number, read off the diagonal."""
    d = rho.cutoff + 1
    counts = np.zeros(1)
    for _ in range(rho.modes):
        counts = np.add.outer(counts, np.arange(d)).reshape(-1)
    return float(np.real(np.diag(rho.matrix)) @ counts)


# ---------------------------------------------------------------------------
# functionals


def _spectrum(mat: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))


def von_neumann_entropy(rho: FockOperator | np.ndarray) -> float:
    mat = rho.matrix if isinstance(rho, FockOperator) else np.asarray(rho)
    return shannon_entropy(clamp_spectrum(_spectrum(mat)))


def trace_norm_distance(a: FockOperator | np.ndarray, b: FockOperator | np.ndarray) -> float:
    """Full trace norm ``||a - b||_1``."""
    ma = a.matrix if isinstance(a, FockOperator) else np.asarray(a)
    mb = b.matrix if isinstance(b, FockOperator) else np.asarray(b)
    if ma.shape != mb.shape:
        raise ShapeError(f"shape mismatch: {ma.shape} vs {mb.shape}")
    return float(np.sum(np.abs(_spectrum(ma - mb))))


def _support_inverse_sqrt(mat: np.ndarray, rel_tol: float = 1e-12) -> np.ndarray:
    vals, vecs = np.linalg.eigh(0.5 * (mat + mat.conj().T))
    keep = vals > rel_tol * max(vals.max(), 0.0)
    inv = np.zeros_like(vals)
    inv[keep] = 1.0 / np.sqrt(vals[keep])
    return (vecs * inv) @ vecs.conj().T


def srm_povm(states, weights=None) -> list[np.ndarray]:
    """Square-root measurement for pure states given as Fock vectors.

    Returns ``len(states) + 1`` elements: ``rho^-1/2 w_i |psi_i><psi_i| rho^-1/2``
    for each state (pseudo-inverse on the support of ``rho``), followed by the
    completion ``1 - sum_i Lambda_i``.
    """
    vecs = [np.asarray(s, dtype=complex) for s in states]
    if not vecs:
        raise ConfigError("srm_povm needs at least one state")
    m = len(vecs)
    w = np.full(m, 1.0 / m) if weights is None else np.asarray(weights, dtype=float)
    avg = sum(wi * np.outer(v, v.conj()) for wi, v in zip(w, vecs))
    root_inv = _support_inverse_sqrt(avg)
    elements = []
    for wi, v in zip(w, vecs):
        u = root_inv @ v
        elements.append(wi * np.outer(u, u.conj()))
    completion = np.eye(avg.shape[0]) - sum(elements)
    elements.append(0.5 * (completion + completion.conj().T))
    return elements


def povm_success(povm, states, weights=None) -> float:
    """``sum_i w_i <psi_i|Lambda_i|psi_i>`` (the completion element is ignored)."""
    m = len(states)
    w = np.full(m, 1.0 / m) if weights is None else np.asarray(weights, dtype=float)
    total = 0.0
    for wi, el, v in zip(w, povm, states):
        v = np.asarray(v, dtype=complex)
        total += wi * float(np.real(v.conj() @ el @ v))
    return total


def _operator_range(mat: np.ndarray, name: str, tol: float = 1e-10) -> None:
    vals = _spectrum(mat)
    if vals.min() < -tol or vals.max() > 1.0 + tol:
        raise ConfigError(f"{name} must satisfy 0 <= {name} <= 1 "
                          f"(spectrum in [{vals.min():.3e}, {vals.max():.3e}])")


def check_finite_support_lemma(effect, rho, sigma, slack: float = 1e-10) -> bool:
    """True iff ``Tr[L rho] <= Tr[L sigma] + ||rho - sigma||_1`` within ``slack``."""
    mats = [x.matrix if isinstance(x, FockOperator) else np.asarray(x, dtype=complex)
            for x in (effect, rho, sigma)]
    for mat, name in zip(mats, ("Lambda", "rho", "sigma")):
        _operator_range(mat, name)
    lam, r, s = mats
    lhs = float(np.real(np.trace(lam @ r)))
    rhs = float(np.real(np.trace(lam @ s))) + trace_norm_distance(r, s)
    return lhs <= rhs + slack


# ---------------------------------------------------------------------------
# random test objects


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = dim if rank is None else rank
    x = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = x @ x.conj().T
    return rho / np.trace(rho).real


def random_effect_operator(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Random ``0 <= L <= 1``: random eigenbasis with eigenvalues uniform on [0, 1]."""
    x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, _ = np.linalg.qr(x)
    vals = rng.uniform(0.0, 1.0, size=dim)
    return (q * vals) @ q.conj().T


# ---------------------------------------------------------------------------
# span-compressed route for ensembles too large for dense operators


def _vector_budget() -> int:
    return max_dense_dim() ** 2


def state_factors(label, N: int, tail_floor: float = 1e-36) -> np.ndarray:
    """Columns ``B`` with ``B B^dagger`` the per-mode truncated, renormalized product state.

    Each mode contributes ``P_N|a>`` and ``sqrt(tail)|0>``; tails below
    ``tail_floor`` are dropped because they cannot affect any result at
    double precision.
    """
    N = _check_cutoff(N)
    label = np.atleast_1d(np.asarray(label, dtype=complex))
    if (N + 1) ** label.size > _vector_budget():
        raise ResourceError(f"Fock vectors of dimension ({N}+1)^{label.size} exceed the budget")
    per_mode = []
    for a in label:
        cols = [coherent_vector(a, N)]
        tail = tail_probability(a, N).tail
        if tail > tail_floor:
            e0 = np.zeros(N + 1, dtype=complex)
            e0[0] = math.sqrt(tail)
            cols.append(e0)
        per_mode.append(np.stack(cols, axis=1))
    return reduce(np.kron, per_mode)


def _weighted_factors(ensemble: WeightedEnsemble, N: int) -> list[np.ndarray]:
    return [math.sqrt(w) * state_factors(lab, N) for w, lab in zip(ensemble.weights, ensemble.labels)]


class FockSpanOracle:
    """Truncated ensemble average held as explicit Fock factors and one SVD.

    ``rho_bar = B B^dagger`` with ``B`` the weighted :func:`state_factors`
    stacked side by side; the left singular vectors give an orthonormal basis
    of the span in which every quantity below is computed exactly.
    """

    def __init__(self, ensemble: WeightedEnsemble, N: int):
        self.ensemble = ensemble
        self.N = N
        self.factors = _weighted_factors(ensemble, N)
        u, s, _ = np.linalg.svd(np.hstack(self.factors), full_matrices=False)
        self.singular_values = s
        self.basis = u[:, s > 1e-12 * s.max()]

    def entropy(self) -> float:
        return shannon_entropy(self.singular_values ** 2)

    def srm_success(self, rel_tol: float = 1e-9) -> float:
        s = self.singular_values
        keep = s > rel_tol * s.max()
        u, s = self.basis[:, :int(keep.sum())], s[keep]
        total = 0.0
        for wf in self.factors:
            x = u.conj().T @ wf            # sqrt(w) rho_i^{1/2} in the span basis
            c = x / s[:, None]             # rho_bar^{-1/2} sqrt(w) rho_i^{1/2}
            # w Tr[Lambda_i rho_i] with Lambda_i = rho_bar^-1/2 w rho_i rho_bar^-1/2
            total += float(np.sum(np.abs(c.conj().T @ x) ** 2))
        return total

    def distance(self, other: WeightedEnsemble) -> float:
        """``||rho_bar - rho_bar_other||_1`` with both averages truncated at the same cutoff."""
        if other.modes != self.ensemble.modes:
            raise ShapeError(f"mode-count mismatch: {self.ensemble.modes} vs {other.modes}")
        b1 = np.hstack(self.factors)
        b2 = np.hstack(_weighted_factors(other, self.N))
        u = self.basis
        residual = b2 - u @ (u.conj().T @ b2)
        if np.linalg.norm(residual) > 1e-12:
            # the other ensemble leaves the span; extend the basis
            q, r, _ = np.linalg.svd(residual, full_matrices=False)
            u = np.hstack([u, q[:, r > 1e-12 * r.max()]])
        x1, x2 = u.conj().T @ b1, u.conj().T @ b2
        diff = x1 @ x1.conj().T - x2 @ x2.conj().T
        return float(np.sum(np.abs(_spectrum(diff))))


def ensemble_entropy_fock(ensemble: WeightedEnsemble, N: int) -> float:
    """Entropy of the truncated average state from the singular values of its Fock factors."""
    return FockSpanOracle(ensemble, N).entropy()


def srm_success_fock(ensemble: WeightedEnsemble, N: int) -> float:
    """SRM success computed with explicit operators restricted to the span of the states."""
    return FockSpanOracle(ensemble, N).srm_success()


def average_state_distance_fock(e1: WeightedEnsemble, e2: WeightedEnsemble, N: int) -> float:
    return FockSpanOracle(e1, N).distance(e2)
