"""Online compression models and conformal p-values.

Two concrete models are implemented, both with the identity conformity
measure A(summary, z) = z:

* binary exchangeability: the summary of n observations in {0, 1} is the
  count k of 1s; conditionally on the summary, the last observation is 1
  with probability k/n.
* Gaussian with variance 1: the summary is the running sum s of real
  observations; conditionally on the summary, the last observation is
  Normal(s/n, (n-1)/n), so ties have probability zero and the p-values are
  deterministic for n >= 2.

Each step's p-value is

    p_n = P(candidate strictly less conformal than z_n | summary)
        + tau_n * P(candidate ties z_n | summary)

with tau_n a fresh uniform draw.  Under any data law that agrees with the
model, the p-values are i.i.d. uniform on [0, 1].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Union

from .core import BinarySequence, RandomizationStream, RealSequence
from .numerics import normal_cdf

ModelName = Literal["binary-exchangeability", "gaussian-var1"]

MODEL_NAMES: tuple[str, ...] = ("binary-exchangeability", "gaussian-var1")


@dataclass(frozen=True)
class ExchangeabilitySummary:
    """Count summary of a binary sequence: n observations, k of them 1."""

    n: int
    k: int

    def __post_init__(self):
        if not (0 <= self.k <= self.n):
            raise ValueError(f"summary ({self.n}, {self.k}) violates 0 <= k <= n")


@dataclass(frozen=True)
class GaussianVar1Summary:
    """Running-sum summary of a real sequence."""

    n: int
    s: float

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("observation count must be nonnegative")
        if not math.isfinite(self.s):
            raise ValueError("running sum must be finite")


EMPTY_EXCH_SUMMARY = ExchangeabilitySummary(0, 0)
EMPTY_GAUSS_SUMMARY = GaussianVar1Summary(0, 0.0)


def _check_tau(tau: float) -> float:
    tau = float(tau)
    if not (0.0 <= tau <= 1.0):
        raise ValueError(f"tau must lie in [0, 1], got {tau!r}")
    return tau


def _check_bit(z: int) -> int:
    if z not in (0, 1):
        raise ValueError(f"observation {z!r} is not 0 or 1")
    return int(z)


def exch_forward(summary: ExchangeabilitySummary, z: int) -> ExchangeabilitySummary:
    """Absorb one observation into the count summary: (n, k) -> (n+1, k+z)."""
    z = _check_bit(z)
    return ExchangeabilitySummary(summary.n + 1, summary.k + z)


def exch_p_value(prev: ExchangeabilitySummary, z_n: int, tau: float) -> float:
    """Conformal p-value for the n-th binary observation.

    ``prev`` summarizes the first n-1 observations.  With k the count of 1s
    after absorbing z_n, the backward-kernel marginal puts mass k/n on a 1
    and (n-k)/n on a 0, so

        z_n = 1:  p = (n-k)/n + tau * k/n
        z_n = 0:  p = tau * (n-k)/n
    """
    z_n = _check_bit(z_n)
    tau = _check_tau(tau)
    n = prev.n + 1
    k = prev.k + z_n
    if z_n == 1:
        return (n - k) / n + tau * (k / n)
    return tau * ((n - k) / n)


def gauss_var1_p_value(prefix: RealSequence, z_n: float, tau: float) -> float:
    """Conformal p-value for the n-th real observation, variance-1 model.

    For n = 1 the conditional law given the summary is a point mass, so the
    p-value is pure tau.  For n >= 2, with s the sum of all n observations,
    the last coordinate given the sum is Normal(s/n, (n-1)/n) and

        p_n = Phi((z_n - s/n) / sqrt((n-1)/n)),

    deterministic because ties have probability zero.
    """
    tau = _check_tau(tau)
    z_n = float(z_n)
    if not math.isfinite(z_n):
        raise ValueError("observation must be finite")
    n = len(prefix) + 1
    if n == 1:
        return tau
    s = sum(prefix.values) + z_n
    return normal_cdf((z_n - s / n) / math.sqrt((n - 1) / n))


def conformal_p_sequence(
    data: Union[BinarySequence, RealSequence],
    taus: RandomizationStream,
    model: ModelName,
) -> list[float]:
    """Sequential conformal p-values for a whole data sequence.

    One tau is drawn per step regardless of whether the step uses it, so the
    stream consumption is a fixed function of the data length.
    """
    if model == "binary-exchangeability":
        if not isinstance(data, BinarySequence):
            raise ValueError("binary-exchangeability model requires a BinarySequence")
        ps = []
        summary = EMPTY_EXCH_SUMMARY
        for z in data.values:
            p = exch_p_value(summary, z, taus.uniform())
            summary = exch_forward(summary, z)
            ps.append(p)
        return ps
    if model == "gaussian-var1":
        if not isinstance(data, RealSequence):
            raise ValueError("gaussian-var1 model requires a RealSequence")
        ps = []
        for i in range(len(data)):
            prefix = RealSequence(data.values[:i])
            ps.append(gauss_var1_p_value(prefix, data.values[i], taus.uniform()))
        return ps
    raise ValueError(f"unknown model {model!r}; expected one of {MODEL_NAMES}")
