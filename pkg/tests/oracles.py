"""Independent reference implementations used to derive expected test values.

Nothing here may import from the package's computational paths: each
oracle recomputes its quantity from first principles (loops, series,
rotations, enumeration) so tests compare two genuinely different routes.
"""

from __future__ import annotations

import numpy as np
from mpmath import mp


def covariance_triple_loop(X, divisor_n: bool = True):
    """O(n*d^2) covariance straight from the defining sums."""
    X = np.asarray(X, dtype=float)
    n, d = X.shape
    mean = np.zeros(d)
    for i in range(n):
        for j in range(d):
            mean[j] += X[i, j]
    mean /= n
    cov = np.zeros((d, d))
    for a in range(d):
        for b in range(d):
            acc = 0.0
            for i in range(n):
                acc += (X[i, a] - mean[a]) * (X[i, b] - mean[b])
            cov[a, b] = acc / (n if divisor_n else n - 1)
    return mean, cov


def jacobi_eigh(S, sweeps: int = 100, tol: float = 1e-13):
    """Classical Jacobi rotation eigensolver for symmetric matrices.

    Returns (eigenvalues descending, eigenvectors as columns).
    """
    A = np.array(S, dtype=float, copy=True)
    d = A.shape[0]
    V = np.eye(d)
    for _ in range(sweeps):
        off = np.sqrt((A**2).sum() - (np.diag(A)**2).sum())
        if off < tol:
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                if abs(A[p, q]) < 1e-300:
                    continue
                theta = 0.5 * np.arctan2(2.0 * A[p, q], A[q, q] - A[p, p])
                c, s = np.cos(theta), np.sin(theta)
                J = np.eye(d)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
                V = V @ J
    evals = np.diag(A).copy()
    order = np.argsort(evals)[::-1]
    return evals[order], V[:, order]


def erfc_series(x: float, dps: int = 50) -> float:
    """erfc from the Maclaurin series of erf in 50-digit arithmetic."""
    mp.dps = dps
    xm = mp.mpf(x)
    total = mp.mpf(0)
    term_k = xm
    k = 0
    while True:
        term = term_k / (2 * k + 1)
        total += term
        if abs(term) < mp.mpf(10) ** (-dps):
            break
        k += 1
        term_k = term_k * (-(xm ** 2)) / k
        if k > 10_000:
            raise RuntimeError("series did not converge")
    erf = 2 / mp.sqrt(mp.pi) * total
    return float(1 - erf)


def matrix_exp_taylor(A, tol: float = 1e-14, max_terms: int = 500):
    """Matrix exponential by the plain Taylor series, truncated once the
    term's Frobenius norm falls below tol relative to the accumulated sum."""
    A = np.asarray(A, dtype=float)
    d = A.shape[0]
    total = np.eye(d)
    term = np.eye(d)
    for k in range(1, max_terms):
        term = term @ A / k
        total = total + term
        if np.linalg.norm(term) <= tol * np.linalg.norm(total):
            return total
    raise RuntimeError("Taylor series did not converge")


def que_scores_taylor(X, alpha: float):
    """Quantum-entropy scores through the Taylor-series matrix exponential."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    mu = X.mean(axis=0)
    centered = X - mu
    cov = centered.T @ centered / n
    U = matrix_exp_taylor(alpha * cov)
    U = U / np.trace(U)
    return np.einsum("ij,jk,ik->i", centered, U, centered)


def best_feasible_candidate(w, cap: float, n_samples: int, rng):
    """Smallest distance from w among random points of the capped simplex.

    Candidates are random feasible vectors built by projecting Dirichlet
    draws into the box constraint with mass redistribution.
    """
    w = np.asarray(w, dtype=float)
    n = w.size
    best = np.inf
    for _ in range(n_samples):
        v = rng.dirichlet(np.ones(n))
        for _ in range(50):  # push mass off capped coordinates
            over = v > cap
            if not over.any():
                break
            excess = (v[over] - cap).sum()
            v[over] = cap
            under = ~over
            room = cap - v[under]
            if room.sum() <= 0:
                break
            v[under] += excess * room / room.sum()
        if v.max() <= cap + 1e-12 and abs(v.sum() - 1) < 1e-9:
            best = min(best, float(np.linalg.norm(v - w)))
    return best


def finite_difference_gradient(f, w, h: float = 1e-5):
    """Central finite differences of a scalar function of a vector."""
    w = np.asarray(w, dtype=float)
    grad = np.zeros_like(w)
    for j in range(w.size):
        e = np.zeros_like(w)
        e[j] = h
        grad[j] = (f(w + e) - f(w - e)) / (2 * h)
    return grad
