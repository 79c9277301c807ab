"""Input validation helpers shared by estimators, data generators and the harness."""

from __future__ import annotations

import numbers

import numpy as np


def check_data_matrix(X, min_rows: int = 1, name: str = "X") -> np.ndarray:
    """Coerce ``X`` to a 2-D float array of shape (n, d) and validate it.

    Rows are samples, columns are coordinates.  Raises ``ValueError`` on
    wrong dimensionality, too few rows, or non-finite entries.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    if X.ndim != 2:
        raise ValueError(f"{name} must be a 2-D matrix, got ndim={X.ndim}")
    n, d = X.shape
    if n < min_rows:
        raise ValueError(f"{name} needs at least {min_rows} rows, got {n}")
    if d < 1:
        raise ValueError(f"{name} needs at least one column")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite entries")
    return X


def check_symmetric(S, tol: float = 1e-8, name: str = "S") -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"{name} must be square, got shape {S.shape}")
    scale = max(1.0, float(np.abs(S).max()))
    if np.abs(S - S.T).max() > tol * scale:
        raise ValueError(f"{name} is not symmetric within tolerance {tol}")
    return S


def check_fraction(value: float, name: str, high: float = 0.5,
                   inclusive_low: bool = True) -> float:
    """Validate a corruption-style fraction in [0, high) (or (0, high))."""
    value = float(value)
    low_ok = value >= 0.0 if inclusive_low else value > 0.0
    if not (low_ok and value < high):
        bracket = "[" if inclusive_low else "("
        raise ValueError(f"{name} must lie in {bracket}0, {high}), got {value}")
    return value


def as_rng(random_state) -> np.random.Generator:
    """Normalize ``random_state`` (None, int seed, Generator) to a Generator."""
    if random_state is None:
        return np.random.default_rng()
    if isinstance(random_state, np.random.Generator):
        return random_state
    if isinstance(random_state, (numbers.Integral, np.random.SeedSequence)):
        return np.random.default_rng(random_state)
    raise TypeError(f"cannot build a Generator from {random_state!r}")
