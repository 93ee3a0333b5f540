"""Experiment orchestration: dataset generation, five-process evaluation,
replication management, summary statistics, and CSV emission.

Stream layout (fixed, documented): replication i owns the stream
(seed, stream_id=i).  Its first draws generate the dataset; substream(0)
supplies the single BK run's taus; substream(1) is handed to mean_bk_final,
which fans out one substream per inner run.  Fixed-dataset mode draws the
shared dataset from stream_id 0 before any replication runs.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .bk import ChangepointAlternative, DEFAULT_ALTERNATIVE, bk_run, mean_bk_final
from .benchmarks import batch_benchmark, lower_benchmark, upper_benchmark
from .core import BinarySequence, RandomizationStream

Mode = Literal["fixed-dataset", "random-datasets", "null-calibration"]

MODES: tuple[str, ...] = ("fixed-dataset", "random-datasets", "null-calibration")

CSV_HEADER = "rep,dataset,K,k0,k1,bk,mean_bk,batch,lb,ub"

QUANTILE_LEVELS = {"q05": 0.05, "q25": 0.25, "median": 0.5, "q75": 0.75, "q95": 0.95}

PROCESS_COLUMNS = ("bk", "mean_bk", "batch", "lb", "ub")


@dataclass(frozen=True)
class ExperimentConfig:
    alt: ChangepointAlternative = DEFAULT_ALTERNATIVE
    replications: int = 1000
    inner_bk: int = 1000
    seed: int = 42
    mode: Mode = "random-datasets"
    null_theta: float = 0.5

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError("replications must be at least 1")
        if self.inner_bk < 1:
            raise ValueError("inner_bk must be at least 1")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        if not (0.0 <= self.null_theta <= 1.0):
            raise ValueError("null_theta must lie in [0, 1]")


@dataclass(frozen=True)
class ReplicationRecord:
    replication_id: int
    dataset: str
    K: int
    k0: int
    k1: int
    bk_final: float
    mean_bk_final: float
    batch: float
    lower: float
    upper: float

    def __post_init__(self):
        if self.K != self.k0 + self.k1:
            raise ValueError("K must equal k0 + k1")
        if min(self.bk_final, self.mean_bk_final, self.batch, self.lower, self.upper) < 0:
            raise ValueError("process finals must be nonnegative")
        if self.lower > self.upper * (1 + 1e-12):
            raise ValueError("lower benchmark exceeds upper benchmark")


@dataclass(frozen=True)
class ProcessStats:
    median: float
    mean: float
    q25: float
    q75: float
    q05: float
    q95: float

    def __post_init__(self):
        if not (self.q05 <= self.q25 <= self.median <= self.q75 <= self.q95):
            raise ValueError("quantiles out of order")


@dataclass(frozen=True)
class SummaryStats:
    n: int
    processes: dict[str, ProcessStats]


def generate_dataset(
    alt: ChangepointAlternative, stream: RandomizationStream
) -> BinarySequence:
    """N0 Bernoulli(pi0) draws then N1 Bernoulli(pi1), inverse-transform."""
    draws = stream.uniforms(alt.horizon)
    probs = np.concatenate(
        [np.full(alt.n0, alt.pi0), np.full(alt.n1, alt.pi1)]
    )
    return BinarySequence(tuple(int(d < p) for d, p in zip(draws, probs)))


def _null_dataset(
    n: int, theta: float, stream: RandomizationStream
) -> BinarySequence:
    draws = stream.uniforms(n)
    return BinarySequence(tuple(int(d < theta) for d in draws))


def _record_for(
    rep: int,
    data: BinarySequence,
    cfg: ExperimentConfig,
    rep_stream: RandomizationStream,
) -> ReplicationRecord:
    alt = cfg.alt
    n_pre = min(len(data), alt.n0)
    k0 = sum(data.values[:n_pre])
    k1 = data.ones - k0
    bk_final = bk_run(data, rep_stream.substream(0), alt).final
    mean_bk = mean_bk_final(data, alt, cfg.inner_bk, rep_stream.substream(1))
    return ReplicationRecord(
        replication_id=rep,
        dataset=data.to_string(),
        K=data.ones,
        k0=k0,
        k1=k1,
        bk_final=bk_final,
        mean_bk_final=mean_bk,
        batch=batch_benchmark(data.ones, k1, alt),
        lower=lower_benchmark(data, alt),
        upper=upper_benchmark(data, alt),
    )


def run_experiment(cfg: ExperimentConfig) -> list[ReplicationRecord]:
    """Run the configured experiment, one record per replication.

    random-datasets: a fresh alternative-law dataset per replication.
    fixed-dataset: one shared dataset (stream_id 0), independent BK and
    mean-BK randomization per replication; the dataset-deterministic columns
    repeat.  null-calibration: datasets from Bernoulli(null_theta).
    """
    records = []
    if cfg.mode == "fixed-dataset":
        shared = generate_dataset(cfg.alt, RandomizationStream(cfg.seed, 0))
    for rep in range(cfg.replications):
        rep_stream = RandomizationStream(cfg.seed, rep)
        if cfg.mode == "random-datasets":
            data = generate_dataset(cfg.alt, rep_stream)
        elif cfg.mode == "fixed-dataset":
            data = shared
        elif cfg.mode == "null-calibration":
            data = _null_dataset(cfg.alt.horizon, cfg.null_theta, rep_stream)
        else:
            raise ValueError(f"unknown mode {cfg.mode!r}")
        records.append(_record_for(rep, data, cfg, rep_stream))
    return records


def summarize(records: Sequence[ReplicationRecord]) -> SummaryStats:
    """Per-process quantiles (linear interpolation) and arithmetic means."""
    if not records:
        raise ValueError("no records to summarize")
    columns = {
        "bk": [r.bk_final for r in records],
        "mean_bk": [r.mean_bk_final for r in records],
        "batch": [r.batch for r in records],
        "lb": [r.lower for r in records],
        "ub": [r.upper for r in records],
    }
    processes = {}
    for name, vals in columns.items():
        arr = np.asarray(vals, dtype=float)
        qs = {
            label: float(np.quantile(arr, q, method="linear"))
            for label, q in QUANTILE_LEVELS.items()
        }
        processes[name] = ProcessStats(mean=float(arr.mean()), **qs)
    return SummaryStats(n=len(records), processes=processes)


def summary_to_json(stats: SummaryStats) -> str:
    doc = {"n": stats.n}
    for name, ps in stats.processes.items():
        doc[name] = {
            "median": ps.median,
            "mean": ps.mean,
            "q25": ps.q25,
            "q75": ps.q75,
            "q05": ps.q05,
            "q95": ps.q95,
        }
    return json.dumps(doc, indent=2, sort_keys=True)


def _fmt(x: float) -> str:
    # Shortest round-trip decimal; repr of a Python float.
    return repr(float(x))


def records_to_csv(records: Sequence[ReplicationRecord]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in records:
        buf.write(
            f"{r.replication_id},{r.dataset},{r.K},{r.k0},{r.k1},"
            f"{_fmt(r.bk_final)},{_fmt(r.mean_bk_final)},{_fmt(r.batch)},"
            f"{_fmt(r.lower)},{_fmt(r.upper)}\n"
        )
    return buf.getvalue()


def records_from_csv(text: str) -> list[ReplicationRecord]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"CSV header must be exactly {CSV_HEADER!r}")
    records = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 10:
            raise ValueError(f"malformed CSV row: {ln!r}")
        records.append(
            ReplicationRecord(
                replication_id=int(parts[0]),
                dataset=parts[1],
                K=int(parts[2]),
                k0=int(parts[3]),
                k1=int(parts[4]),
                bk_final=float(parts[5]),
                mean_bk_final=float(parts[6]),
                batch=float(parts[7]),
                lower=float(parts[8]),
                upper=float(parts[9]),
            )
        )
    return records
