"""Spectral-norm thresholds for deciding whether a sample looks corrupted.

All bounds refer to the top eigenvalue of the 1/n sample covariance of an
identity-covariance Gaussian sample.  ``log`` is the natural logarithm
throughout.
"""

from __future__ import annotations

import math

__all__ = ["low_n_threshold", "four_term_threshold", "legacy_threshold"]

DEFAULT_CONFIDENCE = 10.0


def low_n_threshold(n: int, d: int, t: float = DEFAULT_CONFIDENCE) -> float:
    """High-probability top-eigenvalue bound valid even when d >= n.

    Returns ``(1 + sqrt(d/n) + t/sqrt(n))**2``.  Strictly decreasing in n
    for fixed d and t, and always at least 1.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if d < 1:
        raise ValueError("d must be >= 1")
    if t < 0:
        raise ValueError("t must be >= 0")
    return (1.0 + math.sqrt(d / n) + t / math.sqrt(n)) ** 2


def four_term_threshold(n: int, d: int, t: float = DEFAULT_CONFIDENCE) -> float:
    """Four-term top-eigenvalue bound before the lower-order term is dropped.

    Returns ``(1 + sqrt(d/n) + t/sqrt(n) + sqrt(d + sqrt(2d)*t + t^2)/n)**2``.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    if d < 1:
        raise ValueError("d must be >= 1")
    if t < 0:
        raise ValueError("t must be >= 0")
    extra = math.sqrt(d + math.sqrt(2.0 * d) * t + t * t) / n
    return (1.0 + math.sqrt(d / n) + t / math.sqrt(n) + extra) ** 2


def legacy_threshold(tau: float) -> float:
    """Classic large-n corruption-detection threshold ``1 + 3*tau*ln(1/tau)``.

    Only meaningful for n much larger than d; for d >= n even clean data
    exceeds it almost surely.
    """
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    return 1.0 + 3.0 * tau * math.log(1.0 / tau)
