"""Exact ensemble functionals for multimode coherent states via Gram matrices.

For a pure-state ensemble ``{w_i, |psi_i>}`` the weighted Gram matrix
``G_ij = sqrt(w_i w_j) <psi_i|psi_j>`` shares its nonzero spectrum with the
average state ``sum_i w_i |psi_i><psi_i|``. Everything here works on that
``M x M`` matrix, so the cost is independent of the photon-number cutoff
that a Fock-space computation would need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import shannon_entropy
from .errors import ConfigError, NumericalError, ShapeError, UnsupportedConfigurationError

# eigenvalues in [-CLAMP_TOL, 0) are set to zero; below -ERROR_TOL is an error
CLAMP_TOL = 1e-10
ERROR_TOL = 1e-8
_SPAN_TOL = 1e-13


def as_labels(labels) -> np.ndarray:
    """Coerce a label or a list of labels to a complex ``(K, n)`` array."""
    arr = np.asarray(labels, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    elif arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2 or arr.shape[1] < 1:
        raise ShapeError(f"labels must have shape (K, n) with n >= 1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ShapeError("labels must be finite")
    return arr


def coherent_overlap(a, b) -> complex:
    """Inner product ``<a|b>`` of two multimode coherent states."""
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    b = np.atleast_1d(np.asarray(b, dtype=complex))
    if a.shape != b.shape or a.ndim != 1:
        raise ShapeError(f"mode-count mismatch: {a.shape} vs {b.shape}")
    log = np.sum(-0.5 * np.abs(a) ** 2 - 0.5 * np.abs(b) ** 2 + np.conj(a) * b)
    return complex(np.exp(log))


def overlap_matrix(labels_a, labels_b=None) -> np.ndarray:
    """Matrix of coherent-state overlaps ``<a_i|b_j>`` between two label sets."""
    a = as_labels(labels_a)
    b = a if labels_b is None else as_labels(labels_b)
    if a.shape[1] != b.shape[1]:
        raise ShapeError(f"mode-count mismatch: {a.shape[1]} vs {b.shape[1]}")
    na = np.sum(np.abs(a) ** 2, axis=1)
    nb = np.sum(np.abs(b) ** 2, axis=1)
    log = -0.5 * na[:, None] - 0.5 * nb[None, :] + np.conj(a) @ b.T
    return np.exp(log)


@dataclass(frozen=True)
class WeightedEnsemble:
    """Coherent-state labels of shape ``(K, n)`` with prior weights."""

    labels: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        labels = as_labels(self.labels)
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if weights.shape[0] != labels.shape[0]:
            raise ShapeError(f"{labels.shape[0]} labels but {weights.shape[0]} weights")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
            raise ConfigError(f"weights must be non-negative and sum to 1 (sum={weights.sum()!r})")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, labels) -> "WeightedEnsemble":
        labels = as_labels(labels)
        k = labels.shape[0]
        return cls(labels, np.full(k, 1.0 / k))

    @property
    def modes(self) -> int:
        return self.labels.shape[1]

    def __len__(self):
        return self.labels.shape[0]

    def scaled(self, factor: float) -> "WeightedEnsemble":
        """Ensemble after a pure-loss channel of amplitude transmissivity ``factor``."""
        return WeightedEnsemble(self.labels * factor, self.weights)


@dataclass(frozen=True)
class GramMatrix:
    matrix: np.ndarray
    weights: np.ndarray

    def eigenvalues(self) -> np.ndarray:
        return clamp_spectrum(np.linalg.eigvalsh(self.matrix))


def clamp_spectrum(eigvals: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """Zero out small negative eigenvalues; raise on clearly negative ones."""
    eigvals = np.asarray(eigvals, dtype=float)
    if eigvals.size and eigvals.min() < -ERROR_TOL * scale:
        raise NumericalError(f"matrix is not positive semidefinite (min eigenvalue {eigvals.min():.3e})")
    return np.where(eigvals < 0.0, 0.0, eigvals)


def build_gram(ensemble: WeightedEnsemble) -> GramMatrix:
    """Weighted Gram matrix ``sqrt(w_i w_j) <psi_i|psi_j>``."""
    if not isinstance(ensemble, WeightedEnsemble):
        raise TypeError("build_gram expects a WeightedEnsemble")
    sw = np.sqrt(ensemble.weights)
    g = overlap_matrix(ensemble.labels) * np.outer(sw, sw)
    g = 0.5 * (g + g.conj().T)
    return GramMatrix(g, ensemble.weights)


def ensemble_entropy(gram: GramMatrix) -> float:
    """Von Neumann entropy of the average state, in bits (the Holevo quantity for pure states)."""
    return shannon_entropy(gram.eigenvalues())


def _psd_sqrt(mat: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(mat)
    vals = clamp_spectrum(vals, scale=max(1.0, float(np.trace(mat).real)))
    vals = np.where(vals > _SPAN_TOL * vals.max(), vals, 0.0)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def srm_success(gram: GramMatrix) -> float:
    """Average success probability of the square-root measurement.

    Equals ``sum_i ((sqrt G)_ii)^2`` for a uniformly weighted ensemble.
    """
    w = gram.weights
    if not np.allclose(w, w[0], rtol=0.0, atol=1e-12):
        raise UnsupportedConfigurationError("srm_success requires uniform weights")
    root = _psd_sqrt(gram.matrix)
    return float(np.sum(np.abs(np.diag(root)) ** 2))


def span_coordinates(labels) -> np.ndarray:
    """Rows ``B`` with ``B B^dagger = K``: the states written in an orthonormal basis of their span.

    Directions whose Gram eigenvalue is at round-off level are dropped; keeping
    them would add noise of order ``sqrt(1e-16)`` to every derived quantity.
    """
    k = overlap_matrix(labels)
    vals, vecs = np.linalg.eigh(0.5 * (k + k.conj().T))
    vals = clamp_spectrum(vals, scale=max(1.0, float(vals.max())))
    keep = vals > _SPAN_TOL * vals.max()
    return vecs[:, keep] * np.sqrt(vals[keep])


def _trace_norm_in_span(coords: np.ndarray, coefficients) -> float:
    c = np.asarray(coefficients, dtype=float)
    if c.shape != (coords.shape[0],):
        raise ShapeError(f"expected {coords.shape[0]} coefficients, got shape {c.shape}")
    mat = coords.conj().T @ (c[:, None] * coords)
    mat = 0.5 * (mat + mat.conj().T)
    return float(np.sum(np.abs(np.linalg.eigvalsh(mat))))


def signed_mixture_trace_norm(labels, coefficients) -> float:
    """Trace norm of ``sum_j c_j |psi_j><psi_j|`` for real (possibly negative) ``c_j``.

    The nonzero spectrum of that operator equals the spectrum of
    ``B^dagger diag(c) B`` with ``B`` from :func:`span_coordinates`.
    """
    return _trace_norm_in_span(span_coordinates(labels), coefficients)


def signed_mixture_trace_norms(labels, coefficient_rows) -> np.ndarray:
    """:func:`signed_mixture_trace_norm` for several coefficient vectors over the same states."""
    coords = span_coordinates(labels)
    return np.array([_trace_norm_in_span(coords, row) for row in coefficient_rows])


def average_state_distance(e1: WeightedEnsemble, e2: WeightedEnsemble) -> float:
    """Trace norm ``||rho1 - rho2||_1`` between the two ensemble averages, in ``[0, 2]``."""
    if e1.modes != e2.modes:
        raise ShapeError(f"mode-count mismatch: {e1.modes} vs {e2.modes}")
    labels = np.vstack([e1.labels, e2.labels])
    coeffs = np.concatenate([e1.weights, -e2.weights])
    return min(signed_mixture_trace_norm(labels, coeffs), 2.0)
