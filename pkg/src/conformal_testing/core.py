"""Foundational types: observation sequences, evidence paths, randomization
streams, parameter grids, and the element-wise (inf over a parameter family)
combination of evidence processes.
"""

from __future__ import annotations

import math
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .numerics import clamp_evidence


@dataclass(frozen=True)
class BinarySequence:
    """An ordered sequence of observations in {0, 1}."""

    values: tuple[int, ...]

    def __post_init__(self):
        for v in self.values:
            if v not in (0, 1):
                raise ValueError(f"binary sequence entry {v!r} is not 0 or 1")
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def ones(self) -> int:
        """Count of 1s (the exchangeability summary of the whole sequence)."""
        return sum(self.values)

    @classmethod
    def from_string(cls, s: str) -> "BinarySequence":
        if any(c not in "01" for c in s):
            raise ValueError(f"dataset string {s!r} must contain only 0 and 1")
        return cls(tuple(int(c) for c in s))

    def to_string(self) -> str:
        return "".join(str(v) for v in self.values)


@dataclass(frozen=True)
class RealSequence:
    """An ordered sequence of finite real observations."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        for v in vals:
            if not math.isfinite(v):
                raise ValueError(f"real sequence entry {v!r} is not finite")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]


@dataclass(frozen=True)
class EvidencePath:
    """Evidence process values S_0, S_1, ..., S_N with S_0 = 1.

    Entries are nonnegative and finite; anything above the documented cap of
    1e300 is clamped on construction (see numerics.EVIDENCE_CAP).
    """

    values: tuple[float, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("evidence path must contain at least S_0")
        vals = tuple(clamp_evidence(float(v)) for v in self.values)
        if vals[0] != 1.0:
            raise ValueError(f"evidence path must start at 1, got {vals[0]!r}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i):
        return self.values[i]

    @property
    def final(self) -> float:
        return self.values[-1]


@dataclass(frozen=True)
class ThetaGrid:
    """Finite, strictly increasing grid of parameter values."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ValueError("parameter grid must be non-empty")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("parameter grid must be strictly increasing")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @classmethod
    def bernoulli_default(cls) -> "ThetaGrid":
        """101 equally spaced points {0, 0.01, ..., 1}."""
        return cls(tuple(i / 100 for i in range(101)))


class RandomizationStream:
    """Deterministic stream of uniform draws on [0, 1).

    Backed by the counter-based Philox generator with the 128-bit key
    (seed, stream_id): equal (seed, stream_id) reproduces the identical draw
    sequence on any platform, and distinct pairs give statistically
    independent streams.

    ``substream(i)`` returns an independent child whose counter region sits
    (i+1) * 2**128 draws past this stream's initial position - a pure
    function of (seed, stream_id, i), regardless of how much the parent has
    already drawn.  A stream and its children never overlap as long as each
    draws fewer than 2**128 values and spawn indices stay distinct.  Nested
    spawning is fine provided the combined offsets cannot collide; the
    library's only layout is documented on harness.run_experiment.

    Single-owner: drawing advances internal state, so share streams across
    units of work by spawning, never by passing one object around.
    """

    def __init__(self, seed: int, stream_id: int = 0, _offset: int = 0):
        if not (0 <= int(seed) < 2**64):
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not (0 <= int(stream_id) < 2**64):
            raise ValueError("stream_id must be an unsigned 64-bit integer")
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        self._offset = int(_offset)
        bitgen = np.random.Philox(
            key=np.array([self.seed, self.stream_id], dtype=np.uint64)
        )
        if self._offset:
            bitgen = bitgen.jumped(self._offset)
        self._gen = np.random.Generator(bitgen)

    def uniform(self) -> float:
        """One draw in [0, 1)."""
        return float(self._gen.random())

    def uniforms(self, n: int) -> np.ndarray:
        """n draws in [0, 1) as a float64 array."""
        return self._gen.random(int(n))

    def substream(self, index: int) -> "RandomizationStream":
        """Independent child stream (see class docstring for the layout rule)."""
        if index < 0:
            raise ValueError("substream index must be nonnegative")
        return RandomizationStream(
            self.seed, self.stream_id, _offset=self._offset + index + 1
        )


@dataclass(frozen=True)
class CalibrationReport:
    """Sample mean and standard error of terminal evidence values."""

    mean: float
    std_error: float
    n: int

    @property
    def within_3se_of_1(self) -> bool:
        return abs(self.mean - 1.0) <= 3.0 * self.std_error


def elementwise_combine(paths: Mapping[float, EvidencePath], horizon: int) -> EvidencePath:
    """Pointwise infimum over a family of evidence paths, up to ``horizon``.

    The result at each time m <= horizon is min over the family of the
    member values at m; evidence against a composite family is the evidence
    against its hardest member.
    """
    if not paths:
        raise ValueError("no parameter values")
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    for theta, path in paths.items():
        if len(path) < horizon + 1:
            raise ValueError(
                f"path for parameter {theta!r} has length {len(path)}, "
                f"need at least {horizon + 1}"
            )
    combined = tuple(
        min(path[m] for path in paths.values()) for m in range(horizon + 1)
    )
    return EvidencePath(combined)


def verify_evariable(final_values: Sequence[float]) -> CalibrationReport:
    """Monte Carlo calibration summary for terminal values drawn under a null.

    A valid evidence process has null expectation 1 at its terminal time;
    callers assert |mean - 1| <= 3 * std_error.  The standard error uses the
    unbiased (ddof=1) sample variance, 0 for a single observation.
    """
    vals = np.asarray(final_values, dtype=float)
    if vals.size == 0:
        raise ValueError("no final values to calibrate against")
    if np.any(vals < 0):
        raise ValueError("final values must be nonnegative")
    mean = float(vals.mean())
    if vals.size > 1:
        se = float(vals.std(ddof=1) / math.sqrt(vals.size))
    else:
        se = 0.0
    return CalibrationReport(mean=mean, std_error=se, n=int(vals.size))
