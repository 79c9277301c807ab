"""Synthetic inlier distributions, corruption schemes, and trial assembly.

Trials follow the contamination model X ~ (1-eta) P + eta Q: an
eta-fraction of rows is replaced by draws from an adversarial scheme Q
placed relative to the inlier mean.  The subtractive scheme instead
removes the most extreme eta-fraction of genuine rows.  Every generator
is a pure function of (spec, seed), so trials can be produced in
parallel from independent seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .linalg import random_orthogonal
from .validation import as_rng, check_data_matrix, check_fraction

__all__ = [
    "InlierSpec",
    "NoiseSpec",
    "TrialDataset",
    "generate_inliers",
    "generate_outliers",
    "apply_subtractive",
    "assemble_trial",
    "good_sample_mean",
]

INLIER_KINDS = (
    "gaussian_identity",
    "gaussian_spherical",
    "gaussian_diag",
    "multivariate_t",
    "laplace",
    "poisson",
    "gaussian_mixture_3",
)

NOISE_KINDS = (
    "variance_shell",
    "two_clusters",
    "dkk",
    "uniform_in_dist",
    "large_outliers",
    "mix",
    "subtractive",
)


@dataclass(frozen=True)
class InlierSpec:
    """Declarative description of the uncorrupted distribution.

    ``mean`` defaults to the all-fives vector.  ``sigma`` is the spherical
    standard deviation; ``top_var``/``floor_var`` bound the linearly
    decreasing diagonal covariance; ``nu`` is the t degrees of freedom;
    ``scale`` the Laplace scale; ``rate`` the Poisson mean.
    """

    kind: str = "gaussian_identity"
    mean: np.ndarray | float | None = None
    sigma: float = 1.0
    top_var: float = 25.0
    floor_var: float = 0.1
    nu: float = 3.0
    scale: float = 1.0
    rate: float = 5.0

    def __post_init__(self):
        if self.kind not in INLIER_KINDS:
            raise ValueError(
                f"unknown inlier kind {self.kind!r}; choices: {INLIER_KINDS}")
        if self.sigma <= 0 or self.scale <= 0 or self.rate <= 0:
            raise ValueError("sigma, scale and rate must be positive")
        if self.nu <= 2:
            raise ValueError("nu must exceed 2 so the covariance exists")
        if self.top_var <= 0 or self.floor_var <= 0:
            raise ValueError("variances must be positive")

    def location(self, d: int) -> np.ndarray:
        """Nominal center parameter (all-fives unless overridden)."""
        if self.mean is None:
            return np.full(d, 5.0)
        return np.broadcast_to(np.asarray(self.mean, dtype=float), (d,)).copy()

    def true_mean(self, d: int) -> np.ndarray:
        """Ground-truth mean used for scoring."""
        if self.kind == "poisson":
            return np.full(d, float(self.rate))
        if self.kind == "gaussian_mixture_3":
            return np.zeros(d)  # components at +1, 0, -1 average to zero
        return self.location(d)

    def diag_variances(self, d: int) -> np.ndarray:
        return np.linspace(self.top_var, self.floor_var, d)


@dataclass(frozen=True)
class NoiseSpec:
    """Declarative description of the corruption scheme.

    ``eta`` is the true corruption fraction.  ``sigma`` rescales offsets
    for spherical-covariance inliers; ``diag`` carries per-coordinate
    variances for diagonal-covariance adaptations; ``center`` pins the
    cluster center explicitly (mixture-of-Gaussians counterpart).
    """

    kind: str = "variance_shell"
    eta: float = 0.1
    sigma: float = 1.0
    angle_deg: float = 75.0
    subtle: str = "variance_shell"
    diag: np.ndarray | None = None
    center: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in NOISE_KINDS:
            raise ValueError(
                f"unknown noise kind {self.kind!r}; choices: {NOISE_KINDS}")
        check_fraction(self.eta, "eta", high=0.5)
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if self.kind == "mix" and self.subtle not in ("variance_shell", "dkk"):
            raise ValueError("mix subtle scheme must be variance_shell or dkk")

    def adapted_to(self, inlier: InlierSpec, d: int) -> "NoiseSpec":
        """Resolve scale/center fields from the inlier distribution."""
        out = self
        if inlier.kind == "gaussian_spherical":
            out = replace(out, sigma=inlier.sigma)
        elif inlier.kind == "gaussian_diag":
            out = replace(out, diag=inlier.diag_variances(d))
        elif inlier.kind == "gaussian_mixture_3" and out.kind == "variance_shell":
            out = replace(out, center=np.full(d, 2.0))
        return out


@dataclass(frozen=True)
class TrialDataset:
    """A corrupted dataset plus everything needed to score an estimate."""

    data: np.ndarray
    inlier_mask: np.ndarray
    true_mean: np.ndarray
    rng_seed: int
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


def generate_inliers(spec: InlierSpec, n: int, d: int, rng) -> np.ndarray:
    """Draw n i.i.d. rows from the inlier distribution."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    rng = as_rng(rng)
    loc = spec.location(d)
    if spec.kind == "gaussian_identity":
        return loc + rng.standard_normal((n, d))
    if spec.kind == "gaussian_spherical":
        return loc + spec.sigma * rng.standard_normal((n, d))
    if spec.kind == "gaussian_diag":
        stds = np.sqrt(spec.diag_variances(d))
        return loc + stds * rng.standard_normal((n, d))
    if spec.kind == "multivariate_t":
        z = rng.standard_normal((n, d))
        w = rng.chisquare(spec.nu, size=n)
        return loc + z * np.sqrt(spec.nu / w)[:, None]
    if spec.kind == "laplace":
        return rng.laplace(loc=loc, scale=spec.scale, size=(n, d))
    if spec.kind == "poisson":
        return rng.poisson(lam=spec.rate, size=(n, d)).astype(float)
    if spec.kind == "gaussian_mixture_3":
        centers = np.array([1.0, 0.0, -1.0])
        component = rng.integers(0, 3, size=n)
        return centers[component][:, None] + rng.standard_normal((n, d))
    raise ValueError(f"unknown inlier kind {spec.kind!r}")


def _random_direction(d: int, rng) -> np.ndarray:
    # random rotation of e1: first column of a Haar-like orthogonal matrix
    return random_orthogonal(d, rng)[:, 0]


def _two_directions(d: int, angle_deg: float, rng):
    u = _random_direction(d, rng)
    if d == 1:
        raise ValueError("angled cluster schemes need d >= 2")
    v = rng.standard_normal(d)
    v -= (v @ u) * u
    norm = np.linalg.norm(v)
    if norm == 0.0:  # astronomically unlikely; retry deterministically
        v = np.roll(u, 1)
        v -= (v @ u) * u
        norm = np.linalg.norm(v)
    v /= norm
    theta = math.radians(angle_deg)
    return u, math.cos(theta) * u + math.sin(theta) * v


def _cluster(center: np.ndarray, m: int, rng) -> np.ndarray:
    d = center.size
    return center + math.sqrt(0.1) * rng.standard_normal((m, d))


def _shell_offset(spec: NoiseSpec, d: int, rng) -> np.ndarray:
    if spec.diag is not None:
        # diagonal-covariance adaptation: one covariance-diagonal step per
        # coordinate
        return np.asarray(spec.diag, dtype=float)
    return spec.sigma * math.sqrt(d) * _random_direction(d, rng)


def generate_outliers(spec: NoiseSpec, mu: np.ndarray, m: int,
                      rng) -> np.ndarray:
    """Draw m corrupted rows placed relative to the inlier mean ``mu``."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = as_rng(rng)
    mu = np.asarray(mu, dtype=float)
    d = mu.size

    if spec.kind == "variance_shell":
        center = (np.asarray(spec.center, dtype=float) if spec.center is not None
                  else mu + _shell_offset(spec, d, rng))
        return _cluster(center, m, rng)

    if spec.kind == "two_clusters":
        u, v = _two_directions(d, spec.angle_deg, rng)
        radius = spec.sigma * math.sqrt(d)
        m0 = int(math.ceil(0.7 * m))
        parts = []
        if m0:
            parts.append(_cluster(mu + radius * u, m0, rng))
        if m - m0:
            parts.append(_cluster(mu + radius * v, m - m0, rng))
        return np.vstack(parts)

    if spec.kind == "dkk":
        if d < 2:
            raise ValueError("dkk noise needs d >= 2")
        s = spec.sigma
        m_cube = int(math.ceil(m / 2))
        rows = []
        if m_cube:
            offsets = rng.choice([-s, 0.0], size=(m_cube, d))
            rows.append(mu + offsets)
        m_spike = m - m_cube
        if m_spike:
            offsets = np.full((m_spike, d), -s)
            offsets[:, 0] = rng.choice([11.0 * s, -s], size=m_spike)
            offsets[:, 1] = rng.choice([-3.0 * s, -s], size=m_spike)
            rows.append(mu + offsets)
        return np.vstack(rows)

    if spec.kind == "uniform_in_dist":
        if spec.diag is not None:
            width = np.asarray(spec.diag, dtype=float)
        else:
            width = 2.0 * spec.sigma
        return mu + rng.uniform(0.0, 1.0, size=(m, d)) * width

    if spec.kind == "large_outliers":
        u, v = _two_directions(d, spec.angle_deg, rng)
        if spec.diag is not None:
            unit = math.sqrt(float(np.mean(spec.diag)))
        else:
            unit = spec.sigma
        base = unit * math.sqrt(d)
        m0 = int(math.ceil(0.7 * m))
        parts = []
        if m0:
            parts.append(_cluster(mu + 10.0 * base * u, m0, rng))
        if m - m0:
            parts.append(_cluster(mu + 20.0 * base * v, m - m0, rng))
        return np.vstack(parts)

    if spec.kind == "mix":
        m_subtle = int(math.ceil(m / 2))
        subtle_spec = replace(spec, kind=spec.subtle)
        large_spec = replace(spec, kind="large_outliers")
        parts = []
        if m_subtle:
            parts.append(generate_outliers(subtle_spec, mu, m_subtle, rng))
        if m - m_subtle:
            parts.append(generate_outliers(large_spec, mu, m - m_subtle, rng))
        return np.vstack(parts)

    if spec.kind == "subtractive":
        raise ValueError(
            "subtractive corruption removes rows; use apply_subtractive")
    raise ValueError(f"unknown noise kind {spec.kind!r}")


def apply_subtractive(X, eta: float, rng):
    """Remove the ceil(eta*n) rows most extreme along a random direction.

    Returns ``(surviving rows, removed indices)``.
    """
    X = check_data_matrix(X)
    eta = check_fraction(eta, "eta", high=0.5)
    rng = as_rng(rng)
    n, d = X.shape
    m = int(math.ceil(eta * n))
    if m == 0:
        return X, np.array([], dtype=int)
    if m >= n:
        raise ValueError("subtractive corruption would remove every row")
    direction = _random_direction(d, rng)
    projections = X @ direction
    removed = np.argsort(-projections, kind="stable")[:m]
    keep = np.ones(n, dtype=bool)
    keep[removed] = False
    return X[keep], np.sort(removed)


def assemble_trial(inlier: InlierSpec, noise: NoiseSpec | None, n: int, d: int,
                   seed: int, rotate: bool = False) -> TrialDataset:
    """Build one corrupted trial with ground truth for scoring.

    Additive schemes draw ceil(eta*n) outliers and n - ceil(eta*n)
    inliers, then shuffle; the subtractive scheme draws n inliers and
    removes the extreme fraction.  ``rotate`` applies one random
    orthogonal map to the data and the true mean.
    """
    if n < 1 or d < 1:
        raise ValueError("n and d must be >= 1")
    seed = int(seed)
    ss = np.random.SeedSequence(seed)
    rng_in, rng_out, rng_arrange = (as_rng(s) for s in ss.spawn(3))

    true_mean = inlier.true_mean(d)
    eta = 0.0 if noise is None else noise.eta

    if noise is not None and noise.kind == "subtractive" and eta > 0:
        X_full = generate_inliers(inlier, n, d, rng_in)
        X, _removed = apply_subtractive(X_full, eta, rng_out)
        mask = np.ones(X.shape[0], dtype=bool)
    else:
        m = int(math.ceil(eta * n))
        n_in = n - m
        if n_in < 1:
            raise ValueError("corruption fraction leaves no inliers")
        X_in = generate_inliers(inlier, n_in, d, rng_in)
        if m > 0:
            resolved = noise.adapted_to(inlier, d)
            X_out = generate_outliers(resolved, true_mean, m, rng_out)
            X = np.vstack([X_in, X_out])
            mask = np.zeros(n, dtype=bool)
            mask[:n_in] = True
            order = rng_arrange.permutation(n)
            X, mask = X[order], mask[order]
        else:
            X, mask = X_in, np.ones(n_in, dtype=bool)

    if rotate:
        Q = random_orthogonal(d, rng_arrange)
        X = X @ Q.T
        true_mean = Q @ true_mean

    return TrialDataset(data=X, inlier_mask=mask, true_mean=true_mean,
                        rng_seed=seed,
                        meta={"eta": eta, "rotate": rotate,
                              "inlier_kind": inlier.kind,
                              "noise_kind": None if noise is None else noise.kind})


def good_sample_mean(dataset: TrialDataset) -> np.ndarray:
    """Mean of the uncorrupted rows: the practical error floor."""
    if not dataset.inlier_mask.any():
        raise ValueError("trial has no inlier rows")
    return dataset.data[dataset.inlier_mask].mean(axis=0)
