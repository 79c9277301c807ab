"""Dense linear-algebra and special-function primitives.

Everything here is a pure function of its inputs (plus an explicit RNG
handle where randomness is involved), so calls are safe from concurrent
threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.special

from .validation import as_rng, check_data_matrix, check_symmetric

__all__ = [
    "CovarianceResult",
    "PowerIterationError",
    "center_and_covariance",
    "top_eigenpair",
    "top_eigenvalue_dense",
    "full_sym_eigendecomposition",
    "random_orthogonal",
    "project_capped_simplex",
    "erfc",
]


@dataclass(frozen=True)
class CovarianceResult:
    """Sample mean and covariance of a data matrix.

    ``normalization`` records the divisor used for the covariance:
    ``"over_n"`` or ``"over_n_minus_1"``.
    """

    mean: np.ndarray
    covariance: np.ndarray
    normalization: str


class PowerIterationError(RuntimeError):
    """Power iteration failed to reach the residual tolerance."""

    def __init__(self, residual: float, eigenvalue: float, vector: np.ndarray):
        super().__init__(
            f"power iteration did not converge: residual={residual:.3e}")
        self.residual = residual
        self.eigenvalue = eigenvalue
        self.vector = vector


def center_and_covariance(X, normalization: str = "over_n") -> CovarianceResult:
    """Row mean and sample covariance of an (n, d) data matrix.

    The ``over_n`` divisor matches the spectral-threshold convention;
    ``over_n_minus_1`` is the unbiased divisor used by the trace-scaling
    heuristic.  Requires n >= 2.
    """
    X = check_data_matrix(X, min_rows=2)
    n = X.shape[0]
    if normalization == "over_n":
        divisor = n
    elif normalization == "over_n_minus_1":
        divisor = n - 1
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    mean = X.mean(axis=0)
    centered = X - mean
    cov = centered.T @ centered / divisor
    cov = (cov + cov.T) / 2.0  # kill asymmetric rounding noise
    return CovarianceResult(mean=mean, covariance=cov, normalization=normalization)


def _power_iterate(S, shift: float, tol: float, max_iter: int,
                   rng: np.random.Generator):
    d = S.shape[0]
    v = rng.standard_normal(d)
    v /= np.linalg.norm(v)
    lam = float(v @ (S @ v))
    residual = np.inf
    for _ in range(max_iter):
        w = S @ v + shift * v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            v = rng.standard_normal(d)
            v /= np.linalg.norm(v)
            continue
        v = w / norm
        Sv = S @ v
        lam = float(v @ Sv)
        residual = float(np.linalg.norm(Sv - lam * v))
        if residual <= tol * max(1.0, abs(lam)):
            return lam, v, residual, True
    return lam, v, residual, False


def top_eigenpair(S, tol: float = 1e-8, max_iter: int = 2000,
                  rng=None) -> tuple[float, np.ndarray]:
    """Algebraically largest eigenvalue and a unit eigenvector of symmetric S.

    Power iteration from a random start.  A first pass runs unshifted and
    finds the eigenvalue of largest magnitude; if that value is negative
    (or the pass stalls), a second pass runs on S + shift*I with the shift
    sized so the algebraically largest eigenvalue dominates.  Convergence:
    ``||S v - lam v|| <= tol * max(1, |lam|)``.  Raises
    :class:`PowerIterationError` when the residual target is not met.
    """
    S = check_symmetric(S)
    d = S.shape[0]
    if d == 1:
        return float(S[0, 0]), np.ones(1)
    rng = as_rng(rng if rng is not None else 0)

    lam, v, residual, ok = _power_iterate(S, 0.0, tol, max_iter, rng)
    if ok and lam >= 0.0:
        return lam, v
    # Negative dominant eigenvalue (or a +/- magnitude tie): shift the
    # spectrum up so the algebraic maximum dominates, then undo the shift.
    if ok:
        shift = abs(lam) * (1.0 + 1e-6) + 1e-12
    else:
        radii = np.abs(S).sum(axis=1) - np.abs(np.diag(S))
        shift = max(0.0, -float((np.diag(S) - radii).min())) + 1e-12
    # the shift compresses the relative gap, so the second pass gets a
    # doubled budget
    lam, v, residual, ok = _power_iterate(S, shift, tol, 2 * max_iter, rng)
    if ok:
        return lam, v
    raise PowerIterationError(residual, lam, v)


def top_eigenvalue_dense(S) -> tuple[float, np.ndarray]:
    """Top eigenpair via a full dense decomposition (fallback path)."""
    evals, evecs = full_sym_eigendecomposition(S)
    return float(evals[0]), evecs[:, 0]


def full_sym_eigendecomposition(S) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvectors of symmetric S."""
    S = check_symmetric(S)
    evals, evecs = np.linalg.eigh(S)
    order = np.argsort(evals)[::-1]
    return evals[order], evecs[:, order]


def random_orthogonal(d: int, rng=None) -> np.ndarray:
    """Haar-like random orthogonal (d, d) matrix.

    QR decomposition of a standard-normal matrix with the R diagonal's
    signs folded into Q, which removes the sign bias of raw QR.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    rng = as_rng(rng)
    A = rng.standard_normal((d, d))
    Q, R = np.linalg.qr(A)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def project_capped_simplex(w, cap: float) -> np.ndarray:
    """Euclidean projection onto {v : sum(v) = 1, 0 <= v_i <= cap}.

    Solved through the scalar dual: v_i = clip(w_i - theta, 0, cap) with
    theta chosen by bisection so the coordinates sum to one.  Requires
    cap * n >= 1 for feasibility.
    """
    w = np.asarray(w, dtype=float).ravel()
    n = w.size
    if cap <= 0.0:
        raise ValueError("cap must be positive")
    if cap * n < 1.0 - 1e-12:
        raise ValueError(f"infeasible set: cap*n = {cap * n:.6g} < 1")

    def mass(theta: float) -> float:
        return float(np.clip(w - theta, 0.0, cap).sum())

    lo = float(w.min()) - cap - 1.0
    hi = float(w.max())
    # mass(lo) >= n*min(cap, ...) >= 1, mass(hi) = 0 <= 1
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mass(mid) >= 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-15 * max(1.0, abs(hi)):
            break
    theta = 0.5 * (lo + hi)
    out = np.clip(w - theta, 0.0, cap)
    total = out.sum()
    if total > 0:
        # distribute the residual over non-saturated coordinates
        free = (out > 0) & (out < cap)
        if free.any():
            out[free] += (1.0 - total) / free.sum()
            out = np.clip(out, 0.0, cap)
        else:
            out *= 1.0 / total
    return out


def erfc(x):
    """Complementary error function, elementwise on arrays."""
    return scipy.special.erfc(x)
