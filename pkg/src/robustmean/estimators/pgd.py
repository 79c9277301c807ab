"""Projected gradient descent over outlier weights.

Minimizes the spectral norm of the weighted sample covariance over the
capped simplex of weight vectors, then reports the weighted mean.
"""

from __future__ import annotations

import numpy as np

from ..linalg import (
    PowerIterationError,
    project_capped_simplex,
    top_eigenpair,
    top_eigenvalue_dense,
)
from ..validation import check_data_matrix, check_fraction
from .base import EstimateReport, LocationEstimator

__all__ = ["pgd_objective", "pgd_gradient", "pgd", "PGD"]


def pgd_objective(w, z) -> float:
    """Directional variance surrogate F(w, u) = w.(z*z) - (w.z)^2 for
    z = X u, treated as an unconstrained function of w."""
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    return float(w @ (z * z) - (w @ z) ** 2)


def pgd_gradient(w, z) -> np.ndarray:
    """Gradient of :func:`pgd_objective` in w, holding the direction fixed:
    z*z - 2*(w.z)*z."""
    w = np.asarray(w, dtype=float)
    z = np.asarray(z, dtype=float)
    return z * z - 2.0 * (w @ z) * z


def _weighted_top_eigen(X, w, rng):
    mu = w @ X
    centered = X - mu
    cov = (centered * w[:, None]).T @ centered
    cov = (cov + cov.T) / 2.0
    try:
        lam, u = top_eigenpair(cov, tol=1e-7, max_iter=5000, rng=rng)
    except PowerIterationError:
        lam, u = top_eigenvalue_dense(cov)
    return mu, lam, u


def pgd(X, tau: float = 0.1, n_iter: int = 15, rng=None):
    """Weighted mean after ``n_iter`` projected gradient steps.

    Weights start uniform and stay in the capped simplex {sum w = 1,
    w_i <= 1/((1-2*tau)*n)}.  The step size starts at 1/n, doubles after
    an accepted step (objective decreased) and halves after a rejected
    one, which keeps the spectral objective monotone.

    Returns ``(location, weights, iterations)``.
    """
    X = check_data_matrix(X, min_rows=2)
    tau = check_fraction(tau, "tau", high=0.5)
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    n = X.shape[0]
    cap = 1.0 / ((1.0 - 2.0 * tau) * n)
    w = np.full(n, 1.0 / n)
    if cap * n <= 1.0 + 1e-12:
        # tau = 0 makes the uniform vector the only feasible point
        return X.mean(axis=0), w, 0

    step = 1.0 / n
    mu, lam, u = _weighted_top_eigen(X, w, rng)
    for _ in range(n_iter):
        z = X @ u
        w_try = project_capped_simplex(w - step * pgd_gradient(w, z), cap)
        mu_try, lam_try, u_try = _weighted_top_eigen(X, w_try, rng)
        if lam_try <= lam:
            w, mu, lam, u = w_try, mu_try, lam_try, u_try
            step *= 2.0
        else:
            step /= 2.0
    return w @ X, w, n_iter


class PGD(LocationEstimator):
    """Spectral-norm-minimizing weighted mean via projected gradient descent.

    Parameters
    ----------
    tau : float, default=0.1
        Expected corruption fraction; bounds each weight by
        1/((1-2*tau)*n).
    n_iter : int, default=15
        Number of projected gradient steps.
    random_state : int, Generator or None
        Seeds the eigenvector iteration starts.
    """

    _min_rows = 2

    def __init__(self, tau=0.1, n_iter=15, random_state=None):
        self.tau = tau
        self.n_iter = n_iter
        self.random_state = random_state

    def _estimate(self, X, rng):
        location, weights, iterations = pgd(X, tau=self.tau,
                                            n_iter=self.n_iter, rng=rng)
        self.weights_ = weights
        return EstimateReport(location=location, iterations=iterations)
