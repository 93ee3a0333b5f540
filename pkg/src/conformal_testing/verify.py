"""Monte Carlo and exhaustive calibration suites.

Each suite returns (name, passed, detail); run_all prints one line per
suite.  These back the `verify` CLI subcommand; the sizes default to a
quick configuration and scale with --reps.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Callable

import numpy as np
from scipy.stats import chi2

from .bk import ChangepointAlternative, DEFAULT_ALTERNATIVE, bk_run
from .benchmarks import (
    FinalValueFunction,
    batch_benchmark,
    lower_benchmark,
    naturalize_finite_horizon,
    upper_benchmark,
)
from .core import BinarySequence, RandomizationStream, RealSequence
from .harness import _null_dataset
from .numerics import log_binom
from .pivotal import pivotal_example_path

CHI2_LEVEL = 0.999
UNIFORMITY_BINS = 20
PAIR_BINS = 5


def pooled_null_pvalues(
    theta: float, n_sequences: int, length: int, seed: int, base_stream_id: int = 0
) -> np.ndarray:
    """Conformal p-values pooled over i.i.d. Bernoulli(theta) sequences.

    Sequence i draws its data from stream (seed, base_stream_id + i) and its
    taus from that stream's substream(0); the per-step formula is evaluated
    vectorized over the whole matrix (same arithmetic as exch_p_value).
    """
    data = np.empty((n_sequences, length), dtype=int)
    taus = np.empty((n_sequences, length))
    for i in range(n_sequences):
        stream = RandomizationStream(seed, base_stream_id + i)
        data[i] = stream.uniforms(length) < theta
        taus[i] = stream.substream(0).uniforms(length)
    ns = np.arange(1, length + 1, dtype=float)
    ks = np.cumsum(data, axis=1)
    return np.where(
        data == 1,
        (ns - ks) / ns + taus * ks / ns,
        taus * (ns - ks) / ns,
    )


def chi2_uniformity_stat(values: np.ndarray, bins: int) -> tuple[float, float]:
    """(statistic, critical value at CHI2_LEVEL) for equiprobable bins."""
    counts, _ = np.histogram(values, bins=bins, range=(0.0, 1.0))
    expected = values.size / bins
    stat = float(((counts - expected) ** 2 / expected).sum())
    return stat, float(chi2.ppf(CHI2_LEVEL, bins - 1))


def chi2_lag1_stat(pmat: np.ndarray, bins: int = PAIR_BINS) -> tuple[float, float]:
    """Joint-uniformity chi-square for disjoint lag-1 pairs.

    Within each sequence the pairs (p_1,p_2), (p_3,p_4), ... are disjoint,
    so under the null they are i.i.d. uniform on the unit square.
    """
    n_seq, length = pmat.shape
    x = pmat[:, 0 : length - 1 : 2].ravel()
    y = pmat[:, 1:length:2].ravel()
    ix = np.minimum((x * bins).astype(int), bins - 1)
    iy = np.minimum((y * bins).astype(int), bins - 1)
    counts = np.bincount(ix * bins + iy, minlength=bins * bins)
    expected = x.size / (bins * bins)
    stat = float(((counts - expected) ** 2 / expected).sum())
    return stat, float(chi2.ppf(CHI2_LEVEL, bins * bins - 1))


def suite_pvalue_uniformity(n_sequences: int = 2000, seed: int = 42):
    worst = ""
    ok = True
    for theta in (0.1, 0.5, 0.9):
        pmat = pooled_null_pvalues(theta, n_sequences, 20, seed)
        stat_u, crit_u = chi2_uniformity_stat(pmat.ravel(), UNIFORMITY_BINS)
        stat_p, crit_p = chi2_lag1_stat(pmat)
        if stat_u > crit_u or stat_p > crit_p:
            ok = False
        worst += f" theta={theta}: unif {stat_u:.1f}/{crit_u:.1f} pairs {stat_p:.1f}/{crit_p:.1f};"
    return "pvalue-uniformity", ok, worst.strip()


def suite_bk_null_calibration(
    reps: int = 2000,
    seed: int = 42,
    thetas: tuple[float, ...] = (0.1, 0.5, 0.9),
    alt: ChangepointAlternative = DEFAULT_ALTERNATIVE,
):
    detail = ""
    ok = True
    for theta in thetas:
        finals = np.empty(reps)
        for i in range(reps):
            stream = RandomizationStream(seed, i)
            data = _null_dataset(alt.horizon, theta, stream)
            finals[i] = bk_run(data, stream.substream(0), alt).final
        mean = finals.mean()
        se = finals.std(ddof=1) / math.sqrt(reps)
        if abs(mean - 1.0) > 3.0 * se:
            ok = False
        detail += f" theta={theta}: mean={mean:.4f} se={se:.4f};"
    return "bk-null-calibration", ok, detail.strip()


def suite_batch_exactness(alt: ChangepointAlternative = DEFAULT_ALTERNATIVE):
    """Exhaustive null expectation of the batch benchmark on a 21-point grid."""
    N0, N1 = alt.n0, alt.n1
    worst = 0.0
    for t in range(21):
        theta = t / 20
        total = 0.0
        for k0, k1 in product(range(N0 + 1), range(N1 + 1)):
            K = k0 + k1
            logp = log_binom(N0, k0) + log_binom(N1, k1)
            if K:
                if theta == 0.0:
                    continue
                logp += K * math.log(theta)
            if K < N0 + N1:
                if theta == 1.0:
                    continue
                logp += (N0 + N1 - K) * math.log(1.0 - theta)
            total += math.exp(logp) * batch_benchmark(K, k1, alt)
        worst = max(worst, abs(total - 1.0))
    return "batch-exactness", worst <= 1e-9, f"max |E-1| = {worst:.2e}"


def suite_benchmark_order(
    n_datasets: int = 10000, seed: int = 42, alt: ChangepointAlternative = DEFAULT_ALTERNATIVE
):
    stream = RandomizationStream(seed, 0)
    N = alt.horizon
    bad = 0
    for _ in range(n_datasets):
        data = BinarySequence(tuple(int(u < 0.5) for u in stream.uniforms(N)))
        if lower_benchmark(data, alt) > upper_benchmark(data, alt) * (1 + 1e-12):
            bad += 1
    for boundary in (
        BinarySequence((0,) * N),
        BinarySequence((1,) * N),
        BinarySequence((0,) * alt.n0 + (1,) * alt.n1),
    ):
        if lower_benchmark(boundary, alt) > upper_benchmark(boundary, alt) * (1 + 1e-12):
            bad += 1
    return "benchmark-order", bad == 0, f"{bad} violations of LB <= UB"


def suite_pivotal_evariable(reps: int = 10000, seed: int = 42, mu: float = 1.3):
    stream = RandomizationStream(seed, 0)
    draws = stream.uniforms(2 * reps)
    # Box-Muller from the stream's uniforms keeps the suite self-contained.
    u1 = np.clip(draws[:reps], 1e-300, 1.0)
    u2 = draws[reps:]
    z1 = np.sqrt(-2 * np.log(u1)) * np.cos(2 * np.pi * u2) + mu
    z2 = np.sqrt(-2 * np.log(u1)) * np.sin(2 * np.pi * u2) + mu
    finals = np.array(
        [pivotal_example_path(RealSequence((a, b))).final for a, b in zip(z1, z2)]
    )
    mean = finals.mean()
    se = finals.std(ddof=1) / math.sqrt(reps)
    ok = abs(mean - 1.0) <= 3.0 * se
    return "pivotal-evariable", ok, f"mean={mean:.4f} se={se:.4f}"


def suite_naturalization(seed: int = 42, N: int = 8):
    stream = RandomizationStream(seed, 0)
    vals = stream.uniforms(2**N) * 3.0
    table = {
        key: float(v) for key, v in zip(product((0, 1), repeat=N), vals)
    }
    finals = FinalValueFunction(N, table)
    worst = 0.0
    for theta in (0.0, 0.3, 1.0):
        tree = naturalize_finite_horizon(finals, theta, N)
        for n in range(N):
            for prefix in product((0, 1), repeat=n):
                lhs = tree[prefix]
                rhs = (1 - theta) * tree[prefix + (0,)] + theta * tree[prefix + (1,)]
                worst = max(worst, abs(lhs - rhs))
        for key, v in table.items():
            worst = max(worst, abs(tree[key] - v))
    return "naturalization", worst <= 1e-12, f"max identity error = {worst:.2e}"


ALL_SUITES: tuple[Callable, ...] = (
    suite_pvalue_uniformity,
    suite_bk_null_calibration,
    suite_batch_exactness,
    suite_benchmark_order,
    suite_pivotal_evariable,
    suite_naturalization,
)


def run_all(reps: int | None = None, seed: int = 42, out=print) -> bool:
    """Run every suite, print one PASS/FAIL line each, return overall result."""
    all_ok = True
    for fn in ALL_SUITES:
        kwargs = {}
        if fn is suite_pvalue_uniformity:
            kwargs = {"n_sequences": reps or 2000, "seed": seed}
        elif fn is suite_bk_null_calibration:
            kwargs = {"reps": reps or 2000, "seed": seed}
        elif fn is suite_benchmark_order:
            kwargs = {"n_datasets": reps or 10000, "seed": seed}
        elif fn is suite_pivotal_evariable:
            kwargs = {"reps": reps or 10000, "seed": seed}
        elif fn is suite_naturalization:
            kwargs = {"seed": seed}
        name, ok, detail = fn(**kwargs)
        all_ok = all_ok and ok
        out(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
