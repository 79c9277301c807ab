"""Outlier-robust mean estimation for high dimensions and low sample sizes.

The package bundles classical and spectral robust location estimators
(with detection thresholds that stay valid when d >= n), a synthetic
corruption laboratory, and a benchmark harness with CSV/JSON export.
"""

from .datagen import (
    InlierSpec,
    NoiseSpec,
    TrialDataset,
    apply_subtractive,
    assemble_trial,
    generate_inliers,
    generate_outliers,
    good_sample_mean,
)
from .estimators import (
    EVFiltering,
    EstimateReport,
    CoordinateMedian,
    CoordinateTrimmedMean,
    GeometricMedian,
    LRV,
    LeeValiant,
    LeeValiantSimple,
    LocationEstimator,
    MedianOfMeans,
    PGD,
    QUE,
    SampleMean,
    available_estimators,
    make_estimator,
)
from .harness import (
    SweepConfig,
    SweepRecord,
    SweepResult,
    emit_csv,
    emit_json,
    l2_error,
    loocv_error,
    run_sweep,
    run_trial,
)
from .linalg import (
    CovarianceResult,
    center_and_covariance,
    erfc,
    full_sym_eigendecomposition,
    project_capped_simplex,
    random_orthogonal,
    top_eigenpair,
)
from .thresholds import legacy_threshold, low_n_threshold, four_term_threshold

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # estimators
    "LocationEstimator", "EstimateReport", "SampleMean", "CoordinateMedian",
    "CoordinateTrimmedMean", "MedianOfMeans", "GeometricMedian", "LeeValiant",
    "LeeValiantSimple", "LRV", "EVFiltering", "QUE", "PGD",
    "make_estimator", "available_estimators",
    # thresholds
    "low_n_threshold", "four_term_threshold", "legacy_threshold",
    # numerics
    "CovarianceResult", "center_and_covariance", "top_eigenpair",
    "full_sym_eigendecomposition", "random_orthogonal",
    "project_capped_simplex", "erfc",
    # data generation
    "InlierSpec", "NoiseSpec", "TrialDataset", "generate_inliers",
    "generate_outliers", "apply_subtractive", "assemble_trial",
    "good_sample_mean",
    # harness
    "SweepConfig", "SweepRecord", "SweepResult", "l2_error", "loocv_error",
    "run_trial", "run_sweep", "emit_csv", "emit_json",
]
