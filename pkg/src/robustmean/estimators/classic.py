"""Classical location estimators: means, medians, trims, and chunked medians."""

from __future__ import annotations

import math

import numpy as np

from ..validation import as_rng, check_data_matrix, check_fraction
from .base import EstimateReport, LocationEstimator

__all__ = [
    "sample_mean",
    "coord_median",
    "coord_trimmed_mean",
    "median_of_means",
    "geometric_median",
    "lee_valiant",
    "SampleMean",
    "CoordinateMedian",
    "CoordinateTrimmedMean",
    "MedianOfMeans",
    "GeometricMedian",
    "LeeValiant",
    "LeeValiantSimple",
]

WEISZFELD_TOL = 1e-8
WEISZFELD_MAX_ITER = 1000
WEISZFELD_FLOOR = 1e-10


def sample_mean(X) -> np.ndarray:
    """Arithmetic mean of the rows."""
    X = check_data_matrix(X)
    return X.mean(axis=0)


def coord_median(X) -> np.ndarray:
    """Per-coordinate median; even counts use the midpoint convention."""
    X = check_data_matrix(X)
    return np.median(X, axis=0)


def coord_trimmed_mean(X, tau: float) -> np.ndarray:
    """Per-coordinate mean after dropping the floor(tau*n) smallest and
    largest values of each coordinate independently."""
    X = check_data_matrix(X)
    tau = check_fraction(tau, "tau", high=1.0)
    n = X.shape[0]
    g = int(math.floor(tau * n))
    if 2 * g >= n:
        raise ValueError(f"trimming {g} from each side exhausts n={n} points")
    if g == 0:
        return X.mean(axis=0)
    Xs = np.sort(X, axis=0)
    return Xs[g:n - g].mean(axis=0)


def median_of_means(X, k: int = 10, rng=None) -> np.ndarray:
    """Shuffle rows, split into k near-equal chunks, return the
    per-coordinate median of the chunk means.  If n < k, k is set to n."""
    X = check_data_matrix(X)
    rng = as_rng(rng)
    n = X.shape[0]
    if k < 1:
        raise ValueError("k must be >= 1")
    k = min(k, n)
    order = rng.permutation(n)
    chunk_means = np.stack(
        [X[idx].mean(axis=0) for idx in np.array_split(order, k)])
    return np.median(chunk_means, axis=0)


def _distance_sum(X, y) -> float:
    return float(np.linalg.norm(X - y, axis=1).sum())


def geometric_median(X, tol: float = WEISZFELD_TOL,
                     max_iter: int = WEISZFELD_MAX_ITER):
    """Weiszfeld iteration for the point minimizing the sum of distances.

    Returns ``(y, iterations)``.  The objective is non-increasing across
    iterations; a step that would increase it (possible only through the
    denominator floor near a data point) is rejected and ends the loop.
    """
    X = check_data_matrix(X)
    y = X.mean(axis=0)
    obj = _distance_sum(X, y)
    iterations = 0
    for iterations in range(1, max_iter + 1):
        dist = np.linalg.norm(X - y, axis=1)
        w = 1.0 / np.maximum(dist, WEISZFELD_FLOOR)
        y_next = (w[:, None] * X).sum(axis=0) / w.sum()
        obj_next = _distance_sum(X, y_next)
        if obj_next > obj:
            break
        step = float(np.linalg.norm(y_next - y))
        y, obj = y_next, obj_next
        if step <= tol:
            break
    return y, iterations


def lee_valiant(X, tau: float, subset_frac: float = 0.5, initial=None,
                rng=None, simple: bool = False) -> EstimateReport:
    """Center-prune-average estimator.

    A rough location ``mu0`` is computed by ``initial`` on a random
    ``subset_frac`` fraction of rows.  The ceil(tau*n) rows of largest
    centered norm are marked as outliers.  The default variant returns
    ``mu0 + mean-over-all-n of the remaining centered rows`` (pruned rows
    and the initial subset contribute zero); ``simple=True`` instead
    returns the plain average of the surviving original rows.
    """
    X = check_data_matrix(X, min_rows=4)
    tau = check_fraction(tau, "tau", high=0.5)
    if not 0.0 < subset_frac < 1.0:
        raise ValueError("subset_frac must lie in (0, 1)")
    rng = as_rng(rng)
    n = X.shape[0]

    n_subset = int(math.ceil(subset_frac * n))
    subset = rng.permutation(n)[:n_subset]
    if initial is None:
        mu0 = median_of_means(X[subset], k=10, rng=rng)
    else:
        mu0 = np.asarray(initial(X[subset], rng), dtype=float)

    centered = X - mu0
    norms = np.linalg.norm(centered, axis=1)
    t = int(math.ceil(tau * n))
    # stable sort: ties resolved toward the lowest original index
    pruned = np.argsort(-norms, kind="stable")[:t]

    keep = np.ones(n, dtype=bool)
    keep[subset] = False
    keep[pruned] = False
    if not keep.any():
        return EstimateReport(location=mu0, pruned_count=t,
                              degenerate_fallback=True)
    if simple:
        location = X[keep].mean(axis=0)
    else:
        location = mu0 + centered[keep].sum(axis=0) / n
    return EstimateReport(location=location, pruned_count=t)


class SampleMean(LocationEstimator):
    """Arithmetic mean of the samples."""

    def _estimate(self, X, rng):
        return EstimateReport(location=X.mean(axis=0))


class CoordinateMedian(LocationEstimator):
    """Median of each coordinate independently."""

    def _estimate(self, X, rng):
        return EstimateReport(location=coord_median(X))


class CoordinateTrimmedMean(LocationEstimator):
    """Per-coordinate mean after symmetric trimming.

    Parameters
    ----------
    tau : float, default=0.1
        Fraction trimmed from each end of every coordinate.
    """

    def __init__(self, tau=0.1):
        self.tau = tau

    def _estimate(self, X, rng):
        return EstimateReport(location=coord_trimmed_mean(X, self.tau))


class MedianOfMeans(LocationEstimator):
    """Coordinate-wise median of k chunk means.

    Parameters
    ----------
    k : int, default=10
        Number of chunks; clipped to n when the sample is smaller.
    random_state : int, Generator or None
        Controls the row shuffle.
    """

    def __init__(self, k=10, random_state=None):
        self.k = k
        self.random_state = random_state

    def _estimate(self, X, rng):
        return EstimateReport(location=median_of_means(X, k=self.k, rng=rng))


class GeometricMedian(LocationEstimator):
    """Weiszfeld approximation of the geometric median.

    Parameters
    ----------
    tol : float, default=1e-8
        Stop once the iterate moves less than this.
    max_iter : int, default=1000
    """

    def __init__(self, tol=WEISZFELD_TOL, max_iter=WEISZFELD_MAX_ITER):
        self.tol = tol
        self.max_iter = max_iter

    def _estimate(self, X, rng):
        y, iterations = geometric_median(X, tol=self.tol, max_iter=self.max_iter)
        return EstimateReport(location=y, iterations=iterations)


class _LeeValiantBase(LocationEstimator):
    _simple = False
    _min_rows = 4

    def __init__(self, tau=0.1, subset_frac=0.5, initial_estimator=None,
                 random_state=None):
        self.tau = tau
        self.subset_frac = subset_frac
        self.initial_estimator = initial_estimator
        self.random_state = random_state

    def _initial_callable(self):
        est = self.initial_estimator
        if est is None:
            return None
        if isinstance(est, LocationEstimator):
            def run(X_sub, rng):
                inner = est.__class__(**est.get_params(deep=False))
                if "random_state" in inner.get_params(deep=False):
                    inner.set_params(random_state=as_rng(rng))
                return inner.fit(X_sub).location_
            return run
        if callable(est):
            return lambda X_sub, rng: est(X_sub)
        raise TypeError("initial_estimator must be an estimator or callable")

    def _estimate(self, X, rng):
        return lee_valiant(X, tau=self.tau, subset_frac=self.subset_frac,
                           initial=self._initial_callable(), rng=rng,
                           simple=self._simple)


class LeeValiant(_LeeValiantBase):
    """Center-and-downweight estimator around a rough initial location.

    Parameters
    ----------
    tau : float, default=0.1
        Expected corruption fraction; ceil(tau*n) far points are zeroed out.
    subset_frac : float, default=0.5
        Fraction of rows used for the initial estimate.
    initial_estimator : LocationEstimator, callable or None
        Defaults to MedianOfMeans(k=10).
    random_state : int, Generator or None
    """


class LeeValiantSimple(_LeeValiantBase):
    """Variant returning the plain average of the surviving points."""

    _simple = True
