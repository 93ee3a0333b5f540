"""Likelihood-ratio benchmarks for the changepoint alternative and the
finite-horizon naturalization of reduced-filtration evidence by backward
conditional averaging.

All benchmark formulas depend on the data only through the pre/post-change
counts (k0, k1); powers and binomials are accumulated in log space because
the odds ratio r = (1-pi0)*pi1 / (pi0*(1-pi1)) spans r**(+-N1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from collections.abc import Mapping

from .bk import ChangepointAlternative
from .core import BinarySequence, ThetaGrid
from .numerics import log_binom, log_sum_exp

MAX_EXHAUSTIVE_HORIZON = 22


@dataclass(frozen=True)
class BenchmarkTriple:
    """Final values of the three dataset-deterministic benchmarks."""

    lower: float
    upper: float
    batch: float

    def __post_init__(self):
        if self.lower < 0 or self.upper < 0 or self.batch < 0:
            raise ValueError("benchmark values must be nonnegative")
        if self.lower > self.upper * (1 + 1e-12):
            raise ValueError("lower benchmark exceeds upper benchmark")


@dataclass(frozen=True)
class FinalValueFunction:
    """Terminal evidence assigned to every length-N binary sequence."""

    horizon: int
    table: Mapping[tuple[int, ...], float]

    def __post_init__(self):
        N = self.horizon
        if N < 0:
            raise ValueError("horizon must be nonnegative")
        if N > MAX_EXHAUSTIVE_HORIZON:
            raise ValueError("exhaustive horizon exceeded")
        tbl = dict(self.table)
        if len(tbl) != 2**N:
            raise ValueError(
                f"table has {len(tbl)} entries, expected all {2**N} sequences"
            )
        for key, val in tbl.items():
            if len(key) != N or any(z not in (0, 1) for z in key):
                raise ValueError(f"bad table key {key!r}")
            if not (val >= 0 and math.isfinite(val)):
                raise ValueError(f"final value {val!r} must be finite and >= 0")
        object.__setattr__(self, "table", tbl)


def _split_counts(data: BinarySequence, alt: ChangepointAlternative) -> tuple[int, int, int]:
    """(n, k0, k1) for a possibly-partial data prefix."""
    n = len(data)
    if n > alt.horizon:
        raise ValueError(f"data length {n} exceeds horizon {alt.horizon}")
    n_pre = min(n, alt.n0)
    k0 = sum(data.values[:n_pre])
    k1 = sum(data.values[n_pre:])
    return n, k0, k1


def _log_alt_prob(n: int, k0: int, k1: int, alt: ChangepointAlternative) -> float:
    n_pre = min(n, alt.n0)
    n_post = n - n_pre
    return (
        k0 * math.log(alt.pi0)
        + (n_pre - k0) * math.log(1.0 - alt.pi0)
        + k1 * math.log(alt.pi1)
        + (n_post - k1) * math.log(1.0 - alt.pi1)
    )


def lower_benchmark(data: BinarySequence, alt: ChangepointAlternative) -> float:
    """Alternative probability over the best-fitting Bernoulli null.

    LB_n = Q(z_1..z_n) / max_theta theta**K (1-theta)**(n-K), the maximum
    sitting at the empirical frequency K/n (0**0 := 1 at the boundary).
    Dominated by the likelihood ratio against every theta, so it is a valid
    evidence measure for the whole null family.
    """
    n, k0, k1 = _split_counts(data, alt)
    if n == 0:
        return 1.0
    K = k0 + k1
    log_mle = 0.0
    if 0 < K:
        log_mle += K * math.log(K / n)
    if K < n:
        log_mle += (n - K) * math.log((n - K) / n)
    return math.exp(_log_alt_prob(n, k0, k1, alt) - log_mle)


def upper_benchmark(data: BinarySequence, alt: ChangepointAlternative) -> float:
    """Alternative probability against the midpoint null: Q(z_1..z_n) * 2**n.

    Valid only under the fair-coin element of the null family.
    """
    n, k0, k1 = _split_counts(data, alt)
    if n == 0:
        return 1.0
    return math.exp(_log_alt_prob(n, k0, k1, alt) + n * math.log(2.0))


def benchmark_triple(data: BinarySequence, alt: ChangepointAlternative) -> BenchmarkTriple:
    """LB, UB, and batch benchmark for a full-horizon dataset."""
    n, k0, k1 = _split_counts(data, alt)
    if n != alt.horizon:
        raise ValueError("batch benchmark requires a full-horizon dataset")
    return BenchmarkTriple(
        lower=lower_benchmark(data, alt),
        upper=upper_benchmark(data, alt),
        batch=batch_benchmark(k0 + k1, k1, alt),
    )


def batch_benchmark(K: int, k1: int, alt: ChangepointAlternative) -> float:
    """Conditional-probability ratio given the count summary.

    With N = N0 + N1 and r = (1-pi0)*pi1 / (pi0*(1-pi1)),

        batch = C(N, K) / sum_{k=(K-N0)+}^{K and N1} C(N0, K-k) C(N1, k) r**(k-k1),

    the ratio of the alternative's to the null's conditional probability of
    the data given K ones in total.  An exact e-variable for the whole null
    family: its expectation is 1 under every Bernoulli(theta) power law.
    """
    N0, N1 = alt.n0, alt.n1
    if not (0 <= k1 <= min(K, N1)):
        raise ValueError(f"need 0 <= k1 <= min(K, N1), got K={K}, k1={k1}")
    if K - k1 > N0:
        raise ValueError(f"pre-change count K-k1={K - k1} exceeds N0={N0}")
    log_r = math.log((1.0 - alt.pi0) * alt.pi1) - math.log(alt.pi0 * (1.0 - alt.pi1))
    lo = max(K - N0, 0)
    hi = min(K, N1)
    log_terms = [
        log_binom(N0, K - k) + log_binom(N1, k) + (k - k1) * log_r
        for k in range(lo, hi + 1)
    ]
    return math.exp(log_binom(N0 + N1, K) - log_sum_exp(log_terms))


def naturalize_finite_horizon(
    finals: FinalValueFunction, theta: float, N: int
) -> dict[tuple[int, ...], float]:
    """Backward conditional averaging of a terminal evidence function.

    Returns the value at every prefix (empty tuple = time 0) of the natural
    process defined by the recursion

        value(prefix) = (1-theta) * value(prefix + (0,))
                      + theta     * value(prefix + (1,)),

    anchored at the given finals on full-length sequences.  The result is a
    test martingale in the raw-observation filtration under
    Bernoulli(theta) whenever the finals have expectation 1 there, and its
    terminal values coincide with the input finals by construction.
    """
    if N != finals.horizon:
        raise ValueError(f"horizon {N} != finals horizon {finals.horizon}")
    if N > MAX_EXHAUSTIVE_HORIZON:
        raise ValueError("exhaustive horizon exceeded")
    if not (0.0 <= theta <= 1.0):
        raise ValueError(f"theta must lie in [0, 1], got {theta!r}")
    tree: dict[tuple[int, ...], float] = {
        tuple(k): float(v) for k, v in finals.table.items()
    }
    for n in range(N - 1, -1, -1):
        for prefix in product((0, 1), repeat=n):
            tree[prefix] = (1.0 - theta) * tree[prefix + (0,)] + theta * tree[
                prefix + (1,)
            ]
    return tree


def elementwise_natural_final(
    finals: FinalValueFunction,
    grid: ThetaGrid,
    N: int,
    data: BinarySequence,
) -> float:
    """Terminal value of the grid-infimum of naturalized processes.

    Backward averaging leaves terminal values untouched for every theta, so
    the infimum at the horizon equals finals(data) exactly; the function
    asserts this and returns it.
    """
    if len(data) != N:
        raise ValueError(f"data length {len(data)} != horizon {N}")
    key = data.values
    expected = finals.table[key]
    worst = math.inf
    for theta in grid:
        tree = naturalize_finite_horizon(finals, theta, N)
        val = tree[key]
        if abs(val - expected) > 1e-9 * max(1.0, abs(expected)):
            raise AssertionError(
                f"terminal value changed under naturalization at theta={theta}"
            )
        worst = min(worst, val)
    return worst
