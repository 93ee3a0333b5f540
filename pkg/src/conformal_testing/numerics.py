"""Shared numerical primitives: Gaussian CDF, log-binomials, log-sum-exp.

All routines are scalar, pure, and deterministic.
"""

from __future__ import annotations

import math
from collections.abc import Iterable

# Evidence values are clamped to [0, EVIDENCE_CAP] everywhere a path entry
# is produced; 20-step products of bounded betting factors never get close,
# but the library is generic.
EVIDENCE_CAP = 1e300


def normal_cdf(x: float) -> float:
    """Standard Gaussian CDF via the complementary error function.

    Phi(x) = erfc(-x / sqrt(2)) / 2.  math.erfc is correctly rounded to
    within a few ulp, so the absolute error is below 1e-14 over the whole
    real line.
    """
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def log_binom(n: int, k: int) -> float:
    """log C(n, k) via lgamma; exact-enough for n in the thousands."""
    if k < 0 or k > n:
        raise ValueError(f"binomial coefficient C({n},{k}) out of range")
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def log_sum_exp(terms: Iterable[float]) -> float:
    """Stable log(sum(exp(t))) over a finite non-empty iterable."""
    ts = list(terms)
    if not ts:
        raise ValueError("log_sum_exp of no terms")
    m = max(ts)
    if m == -math.inf:
        return -math.inf
    return m + math.log(sum(math.exp(t - m) for t in ts))


def clamp_evidence(value: float) -> float:
    """Floor at 0, cap at EVIDENCE_CAP; rejects NaN."""
    if math.isnan(value):
        raise ValueError("evidence value is NaN")
    if value < 0.0:
        return 0.0
    return min(value, EVIDENCE_CAP)
