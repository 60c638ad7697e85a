"""Demand models, sample paths, and deterministic random streams.

Every random quantity in the library is drawn from a stream derived from a
single master seed plus an integer key path (instance index, period index,
path index, ...).  Streams are split with ``numpy.random.SeedSequence`` spawn
keys, so the same (seed, key) pair always yields the same draws regardless of
how many other streams were consumed before it.  Parallel and serial runs
therefore produce identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .errors import InvalidInputError

# Stream tags used as the first key component below an instance index.
STREAM_MEANS = 0
STREAM_DEMAND = 1
STREAM_POLICY = 2

DEFAULT_TRUNCATION_QUANTILE = 1.0 - 1e-9


def seed_sequence(seed: int, *key: int) -> np.random.SeedSequence:
    """Seed sequence for the stream identified by (seed, key)."""
    if seed < 0:
        raise InvalidInputError("master seed must be a non-negative integer")
    if any(k < 0 for k in key):
        raise InvalidInputError("stream key components must be non-negative")
    return np.random.SeedSequence(entropy=seed, spawn_key=tuple(key))


def stream(seed: int, *key: int) -> np.random.Generator:
    """Deterministic generator for the stream identified by (seed, key)."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, *key)))


@dataclass(frozen=True)
class SamplePath:
    """One demand realization: a non-negative integer demand per period."""

    demands: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.demands) == 0:
            raise InvalidInputError("a sample path needs at least one period")
        for d in self.demands:
            if not isinstance(d, (int, np.integer)) or isinstance(d, bool):
                raise InvalidInputError("demands must be integers")
            if d < 0:
                raise InvalidInputError("demands must be non-negative")
        object.__setattr__(self, "demands", tuple(int(d) for d in self.demands))

    def __len__(self) -> int:
        return len(self.demands)


@lru_cache(maxsize=None)
def truncated_poisson_pmf(mean: float, quantile: float = DEFAULT_TRUNCATION_QUANTILE) -> np.ndarray:
    """Poisson(mean) pmf truncated at the given quantile and renormalized.

    The support is cut at the smallest n whose cumulative mass reaches the
    quantile; the exact dynamic programs downstream need a finite support.
    Returned array is read-only; index k holds P[demand = k].
    """
    if not mean > 0:
        raise InvalidInputError("Poisson mean must be positive")
    if not 0 < quantile <= 1:
        raise InvalidInputError("truncation quantile must lie in (0, 1]")
    terms = [math.exp(-mean)]
    total = terms[0]
    k = 0
    while total < quantile:
        k += 1
        terms.append(terms[-1] * mean / k)
        total += terms[-1]
        if k > 100_000:  # unreachable for sane means; guards a runaway loop
            raise InvalidInputError("Poisson mean too large for truncation")
    pmf = np.array(terms, dtype=np.float64)
    pmf /= pmf.sum()
    pmf.flags.writeable = False
    return pmf


@lru_cache(maxsize=None)
def _truncated_poisson_cdf(mean: float, quantile: float) -> np.ndarray:
    cdf = np.cumsum(truncated_poisson_pmf(mean, quantile))
    cdf[-1] = 1.0
    cdf.flags.writeable = False
    return cdf


@runtime_checkable
class DemandModelLike(Protocol):
    """Anything that can draw demand paths over a known horizon."""

    @property
    def horizon(self) -> int: ...

    def draw(self, periods: int, rng: np.random.Generator) -> SamplePath: ...


@dataclass(frozen=True)
class DemandModel:
    """Independent per-period Poisson demand with a mean per period."""

    means: tuple[float, ...]
    truncation_quantile: float = DEFAULT_TRUNCATION_QUANTILE

    def __post_init__(self) -> None:
        if len(self.means) == 0:
            raise InvalidInputError("demand model needs at least one period")
        if any(not m > 0 for m in self.means):
            raise InvalidInputError("per-period demand means must be positive")
        if not 0 < self.truncation_quantile <= 1:
            raise InvalidInputError("truncation quantile must lie in (0, 1]")
        object.__setattr__(self, "means", tuple(float(m) for m in self.means))

    @property
    def horizon(self) -> int:
        return len(self.means)

    def pmf(self, period_index: int) -> np.ndarray:
        """Truncated, renormalized demand pmf for the given period (0-based)."""
        return truncated_poisson_pmf(self.means[period_index], self.truncation_quantile)

    def draw(self, periods: int, rng: np.random.Generator) -> SamplePath:
        """Inverse-cdf sample of the first ``periods`` periods."""
        if not 1 <= periods <= self.horizon:
            raise InvalidInputError("periods must lie in [1, horizon]")
        uniforms = rng.random(periods)
        demands = []
        for t in range(periods):
            cdf = _truncated_poisson_cdf(self.means[t], self.truncation_quantile)
            demands.append(int(np.searchsorted(cdf, uniforms[t], side="left")))
        return SamplePath(tuple(demands))

    def draw_matrix(self, periods: int, count: int, seed: int, *key: int) -> np.ndarray:
        """(count, periods) demand matrix; row i equals sample_path on stream key+(i,).

        Rows are drawn from per-path split streams, so the matrix is
        independent of evaluation order and identical to per-path draws.
        """
        if not 1 <= periods <= self.horizon:
            raise InvalidInputError("periods must lie in [1, horizon]")
        if count < 1:
            raise InvalidInputError("count must be at least 1")
        uniforms = np.empty((count, periods), dtype=np.float64)
        for i in range(count):
            uniforms[i] = stream(seed, *key, i).random(periods)
        out = np.empty((count, periods), dtype=np.int64)
        for t in range(periods):
            cdf = _truncated_poisson_cdf(self.means[t], self.truncation_quantile)
            out[:, t] = np.searchsorted(cdf, uniforms[:, t], side="left")
        return out

    def tail(self, start: int) -> "DemandModel":
        """Model over the remaining periods from ``start`` (0-based)."""
        if not 0 <= start < self.horizon:
            raise InvalidInputError("tail start must lie in [0, horizon)")
        return DemandModel(self.means[start:], self.truncation_quantile)


@dataclass(frozen=True)
class DeterministicDemandModel:
    """Degenerate model that always reproduces one fixed demand path."""

    demands: tuple[int, ...]

    def __post_init__(self) -> None:
        path = SamplePath(tuple(self.demands))  # validates
        object.__setattr__(self, "demands", path.demands)

    @property
    def horizon(self) -> int:
        return len(self.demands)

    def draw(self, periods: int, rng: np.random.Generator) -> SamplePath:
        if not 1 <= periods <= self.horizon:
            raise InvalidInputError("periods must lie in [1, horizon]")
        return SamplePath(self.demands[:periods])

    def draw_matrix(self, periods: int, count: int, seed: int, *key: int) -> np.ndarray:
        if not 1 <= periods <= self.horizon:
            raise InvalidInputError("periods must lie in [1, horizon]")
        if count < 1:
            raise InvalidInputError("count must be at least 1")
        row = np.array(self.demands[:periods], dtype=np.int64)
        return np.tile(row, (count, 1))

    def tail(self, start: int) -> "DeterministicDemandModel":
        if not 0 <= start < self.horizon:
            raise InvalidInputError("tail start must lie in [0, horizon)")
        return DeterministicDemandModel(self.demands[start:])


def sample_path(model: DemandModelLike, periods: int, stream_seed: int | np.random.SeedSequence) -> SamplePath:
    """Draw one path from the model on a dedicated stream.

    ``stream_seed`` may be an integer master seed or a pre-split
    ``SeedSequence``; the same value always yields the same path.
    """
    if isinstance(stream_seed, np.random.SeedSequence):
        rng = np.random.Generator(np.random.PCG64(stream_seed))
    else:
        rng = stream(int(stream_seed))
    return model.draw(periods, rng)


def demand_matrix(model: DemandModelLike, periods: int, count: int, seed: int, *key: int) -> np.ndarray:
    """(count, periods) matrix of demand paths on per-path split streams."""
    draw_matrix = getattr(model, "draw_matrix", None)
    if draw_matrix is not None:
        return draw_matrix(periods, count, seed, *key)
    rows = [model.draw(periods, stream(seed, *key, i)).demands for i in range(count)]
    return np.array(rows, dtype=np.int64)


def paths_from_matrix(matrix: np.ndarray) -> list[SamplePath]:
    """Convert a demand matrix back to SamplePath objects (row per path)."""
    return [SamplePath(tuple(int(d) for d in row)) for row in matrix]


def path_digest(path: Sequence[int]) -> str:
    """Stable hex digest of a demand realization, for run logs."""
    import hashlib

    data = ",".join(str(int(d)) for d in path).encode("ascii")
    return hashlib.sha256(data).hexdigest()
