"""Iterative spectral filtering estimators.

Both estimators loop: compute the survivor covariance, compare its top
eigenvalue against a corruption-detection threshold, and prune suspected
outliers until the spectrum looks clean.  They differ in how points are
scored: projection onto the top eigenvector versus a quantum-entropy
score sensitive to every direction at once.
"""

from __future__ import annotations

import math
import warnings

import numpy as np

from ..linalg import (
    PowerIterationError,
    center_and_covariance,
    erfc,
    full_sym_eigendecomposition,
    top_eigenpair,
    top_eigenvalue_dense,
)
from ..thresholds import DEFAULT_CONFIDENCE, legacy_threshold, low_n_threshold
from ..validation import as_rng, check_data_matrix, check_fraction
from .base import EstimateReport, LocationEstimator

__all__ = [
    "gaussian_tail_prune",
    "randomized_prune",
    "fixed_prune",
    "que_scores",
    "trace_scaled",
    "estimate_trace_scale",
    "EVFiltering",
    "QUE",
]


def _detection_threshold(mode: str, n: int, d: int, t: float, tau: float) -> float:
    if mode == "low_n":
        return low_n_threshold(n, d, t)
    if mode == "legacy":
        return legacy_threshold(tau)
    raise ValueError(f"unknown threshold mode {mode!r}")


def _top_eigen(S, rng=None):
    """Top eigenpair with a dense fallback when power iteration stalls
    (near-degenerate leading eigenvalues)."""
    try:
        return top_eigenpair(S, tol=1e-7, max_iter=5000, rng=rng)
    except PowerIterationError:
        return top_eigenvalue_dense(S)


def gaussian_tail_prune(projections, tau: float, slack_gamma: float,
                        d: int) -> np.ndarray:
    """Indices surviving the Gaussian-tail pruning rule.

    Points are ranked by two-sided distance from the median of the
    projections.  Walking the ranking outward, the rule fires at the first
    rank whose observed tail fraction exceeds ``slack_gamma`` times the
    unit-variance Gaussian tail expectation (plus a dimension slack term);
    that point and everything further out is pruned.  If no rank fires,
    everything survives.  The closest-to-median point is never pruned, so
    repeated filtering collapses onto a surviving core rather than
    emptying the sample.
    """
    p = np.asarray(projections, dtype=float).ravel()
    n = p.size
    if n < 2:
        raise ValueError("need at least two projections")
    tau = check_fraction(tau, "tau", high=0.5)
    if slack_gamma <= 0:
        raise ValueError("slack_gamma must be positive")

    if d * tau > 0.1:
        slack = tau / (d * math.log(d * tau / 0.1))
    else:
        warnings.warn("d*tau <= 0.1: tail slack term clamped to zero",
                      RuntimeWarning, stacklevel=2)
        slack = 0.0

    dist = np.abs(p - np.median(p))
    order = np.argsort(dist, kind="stable")
    shifted = dist[order] - 2.0 * tau
    observed_tail = (n - np.arange(n)) / n
    expected_tail = slack_gamma * (erfc(shifted / math.sqrt(2.0)) / 2.0 + slack)
    violations = observed_tail > expected_tail
    if not violations.any():
        return np.sort(order)
    first = max(int(np.argmax(violations)), 1)
    return np.sort(order[:first])


def randomized_prune(projections, rng) -> np.ndarray:
    """Indices surviving a randomized cut at Z times the largest deviation,
    Z drawn from the density 2z on [0, 1]."""
    p = np.asarray(projections, dtype=float).ravel()
    dist = np.abs(p - np.median(p))
    top = dist.max()
    if top == 0.0:
        return np.arange(p.size)
    z = math.sqrt(as_rng(rng).uniform())
    return np.flatnonzero(dist < top * z)


def fixed_prune(projections, tau: float) -> np.ndarray:
    """Indices surviving removal of the ceil(tau/2 * n) largest deviations."""
    p = np.asarray(projections, dtype=float).ravel()
    n = p.size
    n_prune = int(math.ceil(0.5 * tau * n))
    if n_prune <= 0:
        return np.arange(n)
    dist = np.abs(p - np.median(p))
    order = np.argsort(-dist, kind="stable")
    return np.sort(order[n_prune:])


def _entropy_scores(centered, evals, evecs, alpha: float) -> np.ndarray:
    # U = exp(alpha*Sigma)/tr(exp(alpha*Sigma)); the eigenvalue shift by
    # lambda_max cancels in the normalization and avoids overflow.
    weights = np.exp(alpha * (evals - evals[0]))
    weights /= weights.sum()
    coords = centered @ evecs
    return (coords * coords) @ weights


def que_scores(X, alpha: float = 4.0) -> np.ndarray:
    """Quantum-entropy outlier score of each row.

    Scores are ``(x - mu)^T U (x - mu)`` with ``U`` the trace-normalized
    matrix exponential of alpha times the 1/n sample covariance.
    """
    X = check_data_matrix(X, min_rows=2)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    result = center_and_covariance(X, "over_n")
    evals, evecs = full_sym_eigendecomposition(result.covariance)
    return _entropy_scores(X - result.mean, evals, evecs, alpha)


def estimate_trace_scale(X) -> float:
    """sqrt(tr(cov)/d) with the unbiased 1/(n-1) trace estimate."""
    X = check_data_matrix(X, min_rows=2)
    n, d = X.shape
    centered = X - X.mean(axis=0)
    trace = float((centered * centered).sum()) / (n - 1)
    return math.sqrt(trace / d)


def trace_scaled(inner, X):
    """Run ``inner`` on data rescaled to roughly unit per-coordinate
    variance, then undo the scaling on the estimate.

    ``inner`` is any callable mapping a data matrix to a location vector.
    All-identical data (zero trace) is returned directly.
    """
    X = check_data_matrix(X, min_rows=2)
    scale = estimate_trace_scale(X)
    if scale == 0.0:
        return X[0].copy()
    return scale * np.asarray(inner(X / scale), dtype=float)


class _SpectralFilterBase(LocationEstimator):
    """Common loop driver for the spectral filtering estimators."""

    _min_rows = 2

    def _threshold_for(self, n_current: int, n_original: int, d: int) -> float:
        n_eff = n_current if self.threshold_on_current_n else n_original
        return _detection_threshold(self.threshold, max(n_eff, 2), d,
                                    self.t, self.tau)

    def _filter_loop(self, X, rng, prune_step):
        """Iterate prune_step until the survivor spectrum passes the
        threshold.  prune_step(X_surv, mean, lam, aux, rng) returns the
        surviving relative indices; aux is whatever _spectrum produced."""
        n0, d = X.shape
        survivors = np.arange(n0)
        halt_count = 2.0 * self.tau * n0
        history: list[int] = []
        iterations = 0
        lam = None
        while True:
            iterations += 1
            if survivors.size < 2:
                # pruning drove the sample to a single point
                return EstimateReport(
                    location=X[survivors].mean(axis=0),
                    pruned_count=n0 - survivors.size,
                    iterations=iterations, top_eigenvalue=lam,
                    pruned_per_iteration=history)
            cov = center_and_covariance(X[survivors], "over_n")
            lam, aux = self._spectrum(cov.covariance, rng)
            threshold = self._threshold_for(survivors.size, n0, d)
            pruned = n0 - survivors.size
            if lam <= threshold:
                return EstimateReport(
                    location=cov.mean, pruned_count=pruned,
                    iterations=iterations, top_eigenvalue=lam,
                    pruned_per_iteration=history)
            if self.early_halting and pruned > halt_count:
                return EstimateReport(
                    location=cov.mean, pruned_count=pruned,
                    iterations=iterations, halted_early=True,
                    top_eigenvalue=lam, pruned_per_iteration=history)
            keep = prune_step(X[survivors], cov.mean, lam, aux, rng)
            if keep.size == survivors.size:
                # rule declined to prune anything: no progress is possible
                return EstimateReport(
                    location=cov.mean, pruned_count=pruned,
                    iterations=iterations, top_eigenvalue=lam,
                    pruned_per_iteration=history)
            if keep.size == 0:
                # everything ruled an outlier: fall back to the plain mean
                return EstimateReport(
                    location=X.mean(axis=0), pruned_count=n0,
                    iterations=iterations, top_eigenvalue=lam,
                    pruned_per_iteration=history, degenerate_fallback=True)
            survivors = survivors[keep]
            history.append(n0 - survivors.size)

    def _estimate(self, X, rng):
        check_fraction(self.tau, "tau", high=0.5)
        if self.trace_scaling:
            scale = estimate_trace_scale(X)
            if scale == 0.0:
                return EstimateReport(location=X[0].copy(),
                                      degenerate_fallback=True)
            report = self._filter_loop(X / scale, rng, self._prune_step)
            report.location = report.location * scale
            return report
        return self._filter_loop(X, rng, self._prune_step)


class EVFiltering(_SpectralFilterBase):
    """Filter along the top eigenvector until the spectrum looks clean.

    Parameters
    ----------
    tau : float, default=0.1
        Expected corruption fraction.
    threshold : {"low_n", "legacy"}, default="low_n"
        Corruption-detection bound on the top eigenvalue.  "low_n" holds
        for any d/n ratio; "legacy" assumes n >> d and fails badly
        otherwise.
    t : float, default=10.0
        Confidence parameter of the "low_n" bound.
    prune_slack : float, default=5.0
        Multiplier on the expected Gaussian tail in the pruning rule;
        larger values prune less aggressively.
    pruning : {"gaussian_tail", "randomized", "fixed"}, default="gaussian_tail"
        How points along the top eigenvector are selected for removal.
    early_halting : bool, default=False
        Stop once more than a 2*tau fraction of points has been pruned.
    trace_scaling : bool, default=False
        Rescale data to roughly unit per-coordinate variance first
        (unknown-covariance heuristic).
    threshold_on_current_n : bool, default=True
        Recompute the detection bound with the shrinking survivor count
        rather than the original n.
    random_state : int, Generator or None
        Only consumed by the randomized pruning rule.
    """

    def __init__(self, tau=0.1, threshold="low_n", t=DEFAULT_CONFIDENCE,
                 prune_slack=5.0, pruning="gaussian_tail",
                 early_halting=False, trace_scaling=False,
                 threshold_on_current_n=True, random_state=None):
        self.tau = tau
        self.threshold = threshold
        self.t = t
        self.prune_slack = prune_slack
        self.pruning = pruning
        self.early_halting = early_halting
        self.trace_scaling = trace_scaling
        self.threshold_on_current_n = threshold_on_current_n
        self.random_state = random_state

    def _spectrum(self, cov, rng):
        lam, vec = _top_eigen(cov)
        return lam, vec

    def _prune_step(self, X_surv, mean, lam, top_vec, rng):
        projections = X_surv @ top_vec
        if self.pruning == "gaussian_tail":
            return gaussian_tail_prune(projections, self.tau,
                                       self.prune_slack, X_surv.shape[1])
        if self.pruning == "randomized":
            return randomized_prune(projections, rng)
        if self.pruning == "fixed":
            return fixed_prune(projections, self.tau)
        raise ValueError(f"unknown pruning rule {self.pruning!r}")


class QUE(_SpectralFilterBase):
    """Prune by quantum-entropy score until the spectrum looks clean.

    Parameters
    ----------
    tau : float, default=0.1
        Expected corruption fraction; each pass prunes ceil(tau/2 * n_surv)
        points.
    alpha : float, default=4.0
        Entropy scale in exp(alpha * Sigma).
    threshold : {"low_n", "legacy"}, default="low_n"
    t : float, default=10.0
    early_halting : bool, default=False
        Stop once more than a 2*tau fraction has been pruned; essential on
        data far from Gaussian.
    trace_scaling : bool, default=False
    threshold_on_current_n : bool, default=True
    """

    def __init__(self, tau=0.1, alpha=4.0, threshold="low_n",
                 t=DEFAULT_CONFIDENCE, early_halting=False,
                 trace_scaling=False, threshold_on_current_n=True):
        self.tau = tau
        self.alpha = alpha
        self.threshold = threshold
        self.t = t
        self.early_halting = early_halting
        self.trace_scaling = trace_scaling
        self.threshold_on_current_n = threshold_on_current_n

    def _estimate(self, X, rng):
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        return super()._estimate(X, rng)

    def _spectrum(self, cov, rng):
        evals, evecs = full_sym_eigendecomposition(cov)
        return float(evals[0]), (evals, evecs)

    def _prune_step(self, X_surv, mean, lam, eig, rng):
        evals, evecs = eig
        n = X_surv.shape[0]
        n_prune = int(math.ceil(0.5 * self.tau * n))
        if n_prune <= 0:
            return np.arange(n)
        if n_prune >= n:
            return np.arange(0)
        scores = _entropy_scores(X_surv - mean, evals, evecs, self.alpha)
        order = np.argsort(-scores, kind="stable")
        return np.sort(order[n_prune:])
