"""Robust location estimators with a scikit-learn style fit API.

Every estimator implements ``fit(X)`` and exposes the estimate as
``location_`` plus diagnostics as ``report_``.  :func:`make_estimator`
builds instances from string names, which is how the CLI and benchmark
configs refer to them.
"""

from __future__ import annotations

from .base import EstimateReport, LocationEstimator
from .classic import (
    CoordinateMedian,
    CoordinateTrimmedMean,
    GeometricMedian,
    LeeValiant,
    LeeValiantSimple,
    MedianOfMeans,
    SampleMean,
    coord_median,
    coord_trimmed_mean,
    geometric_median,
    lee_valiant,
    median_of_means,
    sample_mean,
)
from .filtering import (
    EVFiltering,
    QUE,
    estimate_trace_scale,
    fixed_prune,
    gaussian_tail_prune,
    que_scores,
    randomized_prune,
    trace_scaled,
)
from .lrv import LRV, lrv
from .pgd import PGD, pgd, pgd_gradient, pgd_objective

__all__ = [
    "EstimateReport",
    "LocationEstimator",
    "SampleMean",
    "CoordinateMedian",
    "CoordinateTrimmedMean",
    "MedianOfMeans",
    "GeometricMedian",
    "LeeValiant",
    "LeeValiantSimple",
    "LRV",
    "EVFiltering",
    "QUE",
    "PGD",
    "sample_mean",
    "coord_median",
    "coord_trimmed_mean",
    "median_of_means",
    "geometric_median",
    "lee_valiant",
    "lrv",
    "gaussian_tail_prune",
    "randomized_prune",
    "fixed_prune",
    "que_scores",
    "trace_scaled",
    "estimate_trace_scale",
    "pgd",
    "pgd_objective",
    "pgd_gradient",
    "make_estimator",
    "available_estimators",
]

# name -> (class, frozen keyword overrides).  The *_low_n / *_legacy
# aliases pin the detection threshold explicitly; the bare spectral names
# default to the low-sample-safe threshold.
_REGISTRY: dict[str, tuple[type, dict]] = {
    "sample_mean": (SampleMean, {}),
    "coord_median": (CoordinateMedian, {}),
    "coord_trimmed_mean": (CoordinateTrimmedMean, {}),
    "median_of_means": (MedianOfMeans, {}),
    "geometric_median": (GeometricMedian, {}),
    "lee_valiant": (LeeValiant, {}),
    "lee_valiant_simple": (LeeValiantSimple, {}),
    "lrv": (LRV, {}),
    "ev_filtering": (EVFiltering, {}),
    "ev_filtering_low_n": (EVFiltering, {"threshold": "low_n"}),
    "ev_filtering_legacy": (EVFiltering, {"threshold": "legacy"}),
    "que": (QUE, {}),
    "que_low_n": (QUE, {"threshold": "low_n"}),
    "que_legacy": (QUE, {"threshold": "legacy"}),
    "pgd": (PGD, {}),
}


def available_estimators() -> list[str]:
    """Names accepted by :func:`make_estimator`, sorted."""
    return sorted(_REGISTRY)


def make_estimator(name: str, **params) -> LocationEstimator:
    """Build a location estimator from its registry name.

    Keyword arguments override the estimator's defaults; unknown names or
    parameters raise ``ValueError`` listing the valid choices.
    """
    try:
        cls, frozen = _REGISTRY[name]
    except KeyError:
        valid = ", ".join(available_estimators())
        raise ValueError(f"unknown estimator {name!r}; valid names: {valid}")
    merged = {**frozen, **params}
    allowed = cls().get_params(deep=False)
    bad = set(merged) - set(allowed)
    if bad:
        raise ValueError(
            f"estimator {name!r} does not accept parameters {sorted(bad)}; "
            f"valid parameters: {sorted(allowed)}")
    return cls(**merged)
