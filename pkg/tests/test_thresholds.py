import numpy as np
import pytest
import scipy.sparse.linalg

from robustmean.thresholds import legacy_threshold, low_n_threshold, four_term_threshold


class TestLowNThreshold:
    def test_frozen_values(self):
        # frozen from 30-digit evaluation of (1 + sqrt(d/n) + t/sqrt(n))^2
        assert np.isclose(low_n_threshold(500, 500, 10), 5.988854381999832,
                          rtol=1e-12)
        assert np.isclose(low_n_threshold(200, 500, 10), 10.812559200041264,
                          rtol=1e-12)

    def test_limit_approaches_one(self):
        assert np.isclose(low_n_threshold(10**9, 1, 0.0), 1.0, atol=1e-3)

    def test_decreasing_in_n(self):
        values = [low_n_threshold(n, 400, 10) for n in (50, 100, 400, 1600)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_at_least_one(self):
        rng = np.random.default_rng(0)
        for _ in range(100):
            n = int(rng.integers(2, 10_000))
            d = int(rng.integers(1, 10_000))
            t = float(rng.uniform(0, 50))
            assert low_n_threshold(n, d, t) >= 1.0

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            low_n_threshold(1, 10)
        with pytest.raises(ValueError):
            low_n_threshold(10, 0)


class TestFourTermThreshold:
    def test_collapses_at_t_zero_d_equals_n(self):
        for n in (16, 100, 500):
            assert np.isclose(four_term_threshold(n, n, 0.0),
                              (2.0 + np.sqrt(n) / n) ** 2, rtol=1e-12)

    def test_frozen_value(self):
        assert np.isclose(four_term_threshold(500, 500, 10), 6.288820617297723,
                          rtol=1e-12)

    def test_monotone_in_t(self):
        values = [four_term_threshold(300, 500, t) for t in (0, 1, 5, 10, 20)]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_dominates_low_n_at_matched_t(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(16, 2000))
            d = int(rng.integers(1, 2000))
            t = float(rng.uniform(5, 20))
            assert four_term_threshold(n, d, t) >= low_n_threshold(n, d, t)


class TestLegacyThreshold:
    def test_frozen_values(self):
        assert np.isclose(legacy_threshold(1.0 / np.e), 2.103638323514327,
                          rtol=1e-12)
        assert np.isclose(legacy_threshold(0.1), 1.6907755278982137,
                          rtol=1e-12)

    def test_limit_at_tau_one(self):
        assert np.isclose(legacy_threshold(1 - 1e-12), 1.0, atol=1e-9)

    def test_rejects_out_of_range(self):
        for tau in (0.0, 1.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                legacy_threshold(tau)


def _top_eigenvalue_over_n(X):
    # lambda_max of the 1/n covariance via the top singular value of the
    # centered matrix (independent of the package's eigen path)
    Xc = X - X.mean(axis=0)
    s = scipy.sparse.linalg.svds(Xc, k=1, return_singular_vectors=False)
    return float(s[0] ** 2) / X.shape[0]


class TestCoverageSmoke:
    """Light Monte Carlo versions of the coverage properties; the full
    1000-draw validation lives in the acceptance suite."""

    def test_low_n_bound_holds_on_clean_draws(self):
        rng = np.random.default_rng(7)
        bound = low_n_threshold(500, 500, 10)
        for _ in range(20):
            X = rng.normal(size=(500, 500)) + 5.0
            assert _top_eigenvalue_over_n(X) <= bound

    def test_legacy_bound_fails_on_clean_draws_when_d_equals_n(self):
        rng = np.random.default_rng(8)
        bound = legacy_threshold(0.1)
        violations = sum(
            _top_eigenvalue_over_n(rng.normal(size=(500, 500))) > bound
            for _ in range(20))
        assert violations == 20
