"""Dimension-halving robust mean estimator with soft outlier downweighting."""

from __future__ import annotations

import math

import numpy as np

from ..linalg import full_sym_eigendecomposition
from ..validation import check_data_matrix, check_fraction
from .base import EstimateReport, LocationEstimator
from .classic import coord_median

__all__ = ["lrv", "LRV"]

WEIGHT_EXPONENT_FLOOR = -50.0


class DegenerateWeightsError(RuntimeError):
    """Every point's weight underflowed to the clamp floor."""


def _weights(X, tau: float, c_scale: float, weighting: str) -> np.ndarray:
    anchor = coord_median(X)
    sq_dist = ((X - anchor) ** 2).sum(axis=1)
    if weighting == "gaussian":
        s2 = float(np.median(sq_dist))  # robust stand-in for tr(cov)
        if s2 == 0.0:
            exponent = np.where(sq_dist == 0.0, 0.0, WEIGHT_EXPONENT_FLOOR)
        else:
            exponent = np.maximum(-sq_dist / (c_scale * s2),
                                  WEIGHT_EXPONENT_FLOOR)
        if np.all(exponent <= WEIGHT_EXPONENT_FLOOR):
            raise DegenerateWeightsError(
                "all weights clamped to the exponent floor")
        return np.exp(exponent)
    if weighting == "general":
        # keep the smallest ball around the anchor holding ceil((1-tau)*n)
        # points, drop the rest
        n = X.shape[0]
        n_keep = min(n, int(math.ceil((1.0 - tau) * n)))
        order = np.argsort(sq_dist, kind="stable")
        w = np.zeros(n)
        w[order[:n_keep]] = 1.0
        return w
    raise ValueError(f"unknown weighting rule {weighting!r}")


def lrv(X, tau: float = 0.1, c_scale: float = 1.0,
        weighting: str = "gaussian") -> np.ndarray:
    """Recursively halve the dimension, estimating the weighted mean on the
    low-variance half-space and recursing on the high-variance half.

    Coordinate-wise median at d <= 2.  Weighted means and covariances are
    normalized by the total weight.
    """
    X = check_data_matrix(X, min_rows=2)
    tau = check_fraction(tau, "tau", high=0.5)
    if c_scale <= 0:
        raise ValueError("c_scale must be positive")
    d = X.shape[1]
    if d <= 2:
        return coord_median(X)

    w = _weights(X, tau, c_scale, weighting)
    total = w.sum()
    if total == 0.0:
        raise DegenerateWeightsError("weighting rule kept no points")
    mu_w = (w[:, None] * X).sum(axis=0) / total
    centered = X - mu_w
    cov_w = (centered * w[:, None]).T @ centered / total
    cov_w = (cov_w + cov_w.T) / 2.0

    _, vecs = full_sym_eigendecomposition(cov_w)
    top = d // 2
    V = vecs[:, :top]            # high-variance subspace, recurse
    V_perp = vecs[:, top:]       # low-variance subspace, weighted mean

    mu_top = lrv(X @ V, tau=tau, c_scale=c_scale, weighting=weighting)
    mu_perp = (w[:, None] * (X @ V_perp)).sum(axis=0) / total
    return V @ mu_top + V_perp @ mu_perp


class LRV(LocationEstimator):
    """Dimension-halving estimator with Gaussian outlier downweighting.

    Parameters
    ----------
    tau : float, default=0.1
        Expected corruption fraction (used by the "general" weighting rule).
    c_scale : float, default=1.0
        Scale constant in the weight exponent.
    weighting : {"gaussian", "general"}, default="gaussian"
        "gaussian" downweights by a Gaussian kernel around the coordinate
        median; "general" keeps the tightest (1-tau) fraction of points.
    """

    _min_rows = 2

    def __init__(self, tau=0.1, c_scale=1.0, weighting="gaussian"):
        self.tau = tau
        self.c_scale = c_scale
        self.weighting = weighting

    def _estimate(self, X, rng):
        location = lrv(X, tau=self.tau, c_scale=self.c_scale,
                       weighting=self.weighting)
        return EstimateReport(location=location)
