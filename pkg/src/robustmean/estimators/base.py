"""Shared estimator machinery: the fit interface and the estimate report."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator

from ..validation import as_rng, check_data_matrix


@dataclass
class EstimateReport:
    """Diagnostics attached to a location estimate.

    ``pruned_count`` counts points discarded by the estimator (0 for
    non-pruning estimators); ``pruned_per_iteration`` holds the cumulative
    count after each pruning pass.  ``top_eigenvalue`` is the survivor
    covariance's top eigenvalue at exit for the spectral estimators, None
    otherwise.
    """

    location: np.ndarray = None
    pruned_count: int = 0
    iterations: int = 1
    halted_early: bool = False
    top_eigenvalue: float | None = None
    pruned_per_iteration: list = field(default_factory=list)
    degenerate_fallback: bool = False


class LocationEstimator(BaseEstimator):
    """Base class for robust location estimators.

    Subclasses implement ``_estimate(X, rng) -> EstimateReport``.  After
    ``fit``, the estimate is available as ``location_`` and the full
    diagnostics as ``report_``.  Estimators are pure functions of
    ``(X, params, random_state)``: fitting twice with the same seed gives
    bit-identical results.
    """

    _min_rows = 1

    def fit(self, X, y=None):
        X = check_data_matrix(X, min_rows=self._min_rows)
        rng = as_rng(getattr(self, "random_state", None))
        report = self._estimate(X, rng)
        if not np.all(np.isfinite(report.location)):
            raise FloatingPointError(
                f"{type(self).__name__} produced a non-finite estimate")
        if report.pruned_count > X.shape[0]:
            raise AssertionError("pruned more points than exist")
        self.location_ = np.asarray(report.location, dtype=float)
        self.report_ = report
        self.n_features_in_ = X.shape[1]
        return self

    def fit_predict(self, X, y=None):
        """Fit and return the location estimate."""
        return self.fit(X).location_

    def _estimate(self, X, rng) -> EstimateReport:
        raise NotImplementedError
