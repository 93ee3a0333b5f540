"""Bayes-Kelly conformal test martingale for a Bernoulli changepoint
alternative.

Construction
------------
The alternative Q generates z_1..z_N independently with P(z_n = 1) = q_n,
where q_n = pi0 for n <= N0 and q_n = pi1 afterwards.  The martingale
observes only the conformal p-values p_1, p_2, ... of the binary
exchangeability model (identity conformity measure) and, at each step, bets
the conditional density of the next p-value under Q.  The resulting capital

    S_n = prod_{m<=n} f_m(p_m)

is the likelihood ratio of the observed p-sequence under Q versus i.i.d.
uniform, hence a test martingale for every exchangeable null.

The conditional density is computed by an exact Bayes filter over the count
k of 1s so far, which is sufficient: under Q the observations are
independent given the time index, and the p-value mechanics depend on the
past only through k.  Given count k before step n and the next observation:

    z_n = 1: p_n = (n-k-1)/n + tau * (k+1)/n, uniform on [(n-k-1)/n, 1]
             with density n/(k+1), prior weight q_n;
    z_n = 0: p_n = tau * (n-k)/n, uniform on [0, (n-k)/n) with density
             n/(n-k), prior weight 1-q_n.

So the predictive density of p_n, piecewise constant on the grid
{0, 1/n, ..., 1}, is

    f_n(p) = sum_k w(k) * [ q_n * (n/(k+1))   * 1{p >= (n-k-1)/n}
                          + (1-q_n) * (n/(n-k)) * 1{p <  (n-k)/n } ],

and observing p_n updates the weights by the same branch likelihoods
(Bayes), with k -> k+1 on the z=1 branch.  Branch intervals are half-open
[lo, hi) except that an interval ending at 1 is closed there, so boundary
p-values (a probability-zero event under continuous tau) resolve
deterministically.

While the data law agrees with exchangeability (every n <= N0 under Q), the
p-values carry no information: the filter posterior stays Binomial(n, pi0)
and f_n is identically 1, so all evidence is collected after the
changepoint.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

from .core import BinarySequence, EvidencePath, RandomizationStream
from .compression import EMPTY_EXCH_SUMMARY, exch_forward, exch_p_value
from .numerics import clamp_evidence

_WEIGHT_TOL = 1e-9


@dataclass(frozen=True)
class ChangepointAlternative:
    """Fixed-changepoint Bernoulli alternative: N0 draws at pi0, N1 at pi1."""

    n0: int
    n1: int
    pi0: float
    pi1: float

    def __post_init__(self):
        if self.n0 < 0 or self.n1 < 0 or self.n0 + self.n1 < 1:
            raise ValueError("need n0 >= 0, n1 >= 0, n0 + n1 >= 1")
        if not (0.0 < self.pi0 < 1.0 and 0.0 < self.pi1 < 1.0):
            raise ValueError("pi0 and pi1 must lie strictly inside (0, 1)")

    @property
    def horizon(self) -> int:
        return self.n0 + self.n1

    def success_prob(self, n: int) -> float:
        """P(z_n = 1) under the alternative, 1-based step index."""
        if not (1 <= n <= self.horizon):
            raise ValueError(f"step {n} outside 1..{self.horizon}")
        return self.pi0 if n <= self.n0 else self.pi1


DEFAULT_ALTERNATIVE = ChangepointAlternative(n0=10, n1=10, pi0=0.1, pi1=0.9)


@dataclass(frozen=True)
class CountPosterior:
    """Probability weights over the count of 1s observed so far."""

    weights: dict[int, float]

    def __post_init__(self):
        w = {int(k): float(v) for k, v in self.weights.items()}
        if not w:
            raise ValueError("posterior must have at least one atom")
        if any(k < 0 for k in w):
            raise ValueError("counts must be nonnegative")
        if any(v < 0 for v in w.values()):
            raise ValueError("weights must be nonnegative")
        total = sum(w.values())
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"weights sum to {total!r}, not 1")
        object.__setattr__(self, "weights", w)

    @classmethod
    def initial(cls) -> "CountPosterior":
        return cls({0: 1.0})


@dataclass(frozen=True)
class BettingDensity:
    """Piecewise-constant probability density on [0, 1].

    ``levels[j]`` is the density on [breakpoints[j], breakpoints[j+1]), with
    the final interval closed at 1.
    """

    breakpoints: tuple[float, ...]
    levels: tuple[float, ...]

    def __post_init__(self):
        bp = tuple(float(b) for b in self.breakpoints)
        lv = tuple(float(l) for l in self.levels)
        if len(bp) != len(lv) + 1:
            raise ValueError("need one more breakpoint than level")
        if bp[0] != 0.0 or bp[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if any(b <= a for a, b in zip(bp, bp[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(l < 0 for l in lv):
            raise ValueError("density levels must be nonnegative")
        total = sum(l * (b - a) for l, a, b in zip(lv, bp, bp[1:]))
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"density integrates to {total!r}, not 1")
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "levels", lv)

    def at(self, p: float) -> float:
        """Density value at p, final interval closed at 1."""
        if not (0.0 <= p <= 1.0):
            raise ValueError(f"p must lie in [0, 1], got {p!r}")
        j = bisect_right(self.breakpoints, p) - 1
        return self.levels[min(j, len(self.levels) - 1)]

    def integral(self) -> float:
        return sum(
            l * (b - a)
            for l, a, b in zip(self.levels, self.breakpoints, self.breakpoints[1:])
        )


def _branch_terms(post: CountPosterior, n: int, alt: ChangepointAlternative):
    """Yield (k, z1_weight, z1_lo, z0_weight, z0_hi) per posterior atom.

    z1_weight is the density contribution of the z=1 branch on [z1_lo, 1];
    z0_weight that of the z=0 branch on [0, z0_hi).
    """
    q = alt.success_prob(n)
    for k, wk in sorted(post.weights.items()):
        if k > n - 1:
            raise ValueError(
                f"posterior atom at count {k} impossible before step {n}"
            )
        yield (
            k,
            wk * q * (n / (k + 1)),
            (n - k - 1) / n,
            wk * (1.0 - q) * (n / (n - k)),
            (n - k) / n,
        )


def predictive_density(
    post: CountPosterior, n: int, alt: ChangepointAlternative
) -> BettingDensity:
    """Conditional density of the n-th conformal p-value under the alternative.

    ``post`` is the filter posterior over the count after n-1 observations.
    The result is piecewise constant on {0, 1/n, ..., 1}.
    """
    if not (1 <= n <= alt.horizon):
        raise ValueError(f"step {n} outside 1..{alt.horizon}")
    levels = [0.0] * n
    for k, w1, _lo1, w0, _hi0 in _branch_terms(post, n, alt):
        for j in range(n - k - 1, n):
            levels[j] += w1
        for j in range(0, n - k):
            levels[j] += w0
    breakpoints = tuple(j / n for j in range(n + 1))
    return BettingDensity(breakpoints, tuple(levels))


def bk_update(
    post: CountPosterior, p_n: float, n: int, alt: ChangepointAlternative
) -> tuple[CountPosterior, float]:
    """One Bayes filter step: observe p_n, return (new posterior, bet).

    The bet equals predictive_density(post, n, alt).at(p_n); the posterior
    reweights each (count, branch) pair by its likelihood density at p_n and
    advances the count on the z=1 branch.
    """
    if not (0.0 <= p_n <= 1.0):
        raise ValueError(f"p-value must lie in [0, 1], got {p_n!r}")
    if not (1 <= n <= alt.horizon):
        raise ValueError(f"step {n} outside 1..{alt.horizon}")
    new: dict[int, float] = {}
    bet = 0.0
    integral = 0.0
    for k, w1, lo1, w0, hi0 in _branch_terms(post, n, alt):
        integral += w1 * (1.0 - lo1) + w0 * hi0
        if p_n >= lo1:
            new[k + 1] = new.get(k + 1, 0.0) + w1
            bet += w1
        if p_n < hi0 or (hi0 == 1.0 and p_n == 1.0):
            new[k] = new.get(k, 0.0) + w0
            bet += w0
    if abs(integral - 1.0) > _WEIGHT_TOL:
        raise AssertionError(f"betting density integrates to {integral!r}, not 1")
    # Both branch families jointly cover [0, 1] for every atom, so the bet
    # is strictly positive whenever q is interior.
    return CountPosterior({k: v / bet for k, v in new.items()}), bet


def bk_run(
    data: BinarySequence, taus: RandomizationStream, alt: ChangepointAlternative
) -> EvidencePath:
    """Full Bayes-Kelly trajectory on one dataset with one tau stream."""
    if len(data) != alt.horizon:
        raise ValueError(
            f"dataset length {len(data)} != alternative horizon {alt.horizon}"
        )
    post = CountPosterior.initial()
    summary = EMPTY_EXCH_SUMMARY
    capital = 1.0
    path = [1.0]
    for i, z in enumerate(data.values):
        n = i + 1
        p = exch_p_value(summary, z, taus.uniform())
        summary = exch_forward(summary, z)
        post, bet = bk_update(post, p, n, alt)
        capital = clamp_evidence(capital * bet)
        path.append(capital)
    return EvidencePath(tuple(path))


def bk_final_batch(
    data: BinarySequence, tau_matrix: np.ndarray, alt: ChangepointAlternative
) -> np.ndarray:
    """Final BK values for R independent tau vectors on the same dataset.

    ``tau_matrix`` has shape (R, N).  Vectorized equivalent of R calls to
    bk_run; used by mean_bk_final and the experiment harness.  Each step
    asserts the predictive densities integrate to 1 (row sums of the
    normalized posterior).
    """
    N = alt.horizon
    if len(data) != N:
        raise ValueError(
            f"dataset length {len(data)} != alternative horizon {N}"
        )
    taus = np.asarray(tau_matrix, dtype=float)
    if taus.ndim != 2 or taus.shape[1] != N:
        raise ValueError(f"tau matrix must have shape (R, {N})")
    R = taus.shape[0]
    capital = np.ones(R)
    W = np.zeros((R, N + 1))
    W[:, 0] = 1.0
    k_true = 0
    for i, z in enumerate(data.values):
        n = i + 1
        q = alt.success_prob(n)
        k_new = k_true + z
        if z == 1:
            p = (n - k_new) / n + taus[:, i] * (k_new / n)
        else:
            p = taus[:, i] * ((n - k_new) / n)
        k_true = k_new
        ks = np.arange(n)
        lo1 = (n - ks - 1.0) / n
        hi0 = (n - ks) / n
        d1 = q * n / (ks + 1.0)
        d0 = (1.0 - q) * n / (n - ks)
        P = p[:, None]
        in1 = P >= lo1[None, :]
        in0 = (P < hi0[None, :]) | ((hi0[None, :] == 1.0) & (P == 1.0))
        c1 = W[:, :n] * d1 * in1
        c0 = W[:, :n] * d0 * in0
        bet = c1.sum(axis=1) + c0.sum(axis=1)
        if not np.all(np.abs(W[:, : n + 1].sum(axis=1) - 1.0) <= _WEIGHT_TOL):
            raise AssertionError("filter weights drifted off 1")
        W2 = np.zeros_like(W)
        W2[:, 1 : n + 1] += c1
        W2[:, :n] += c0
        W = W2 / bet[:, None]
        capital = np.minimum(capital * bet, 1e300)
    return capital


def mean_bk_final(
    data: BinarySequence,
    alt: ChangepointAlternative,
    inner: int,
    taus: RandomizationStream,
) -> float:
    """Arithmetic mean of ``inner`` independent BK finals on the same data.

    Inner run j draws its taus from taus.substream(j), so runs are
    independent and the result is reproducible from (seed, stream_id).
    """
    if inner < 1:
        raise ValueError("inner run count must be at least 1")
    N = alt.horizon
    tau_matrix = np.empty((inner, N))
    for j in range(inner):
        tau_matrix[j] = taus.substream(j).uniforms(N)
    return float(bk_final_batch(data, tau_matrix, alt).mean())
