"""Moving-block bootstrap significance for a candidate split."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ballstat import Segment, SegmentBest, _check_scan_args, _segment_block, scan_local
from .exceptions import InvalidInputError
from .metric import DistanceMatrix, pairwise_distance_matrix


@dataclass(frozen=True)
class BootstrapConfig:
    replicates: int = 199
    p_threshold: float = 0.05
    seed: int = 0
    block_size: Optional[int] = None
    stride: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.replicates < 1:
            raise InvalidInputError("replicates must be >= 1")
        if not 0 < self.p_threshold < 1:
            raise InvalidInputError("p_threshold must lie in (0, 1)")
        if self.block_size is not None and self.block_size < 1:
            raise InvalidInputError("block_size must be >= 1")
        if self.stride < 1:
            raise InvalidInputError("stride must be >= 1")
        if self.threads < 1:
            raise InvalidInputError("threads must be >= 1")


def lag1_autocorrelation(x) -> float:
    """Sample lag-1 autocorrelation; 0 for a constant sequence."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size < 3:
        raise InvalidInputError("need at least 3 values for an autocorrelation")
    c = x - x.mean()
    denom = float(np.dot(c, c))
    if denom == 0.0:
        return 0.0
    rho = float(np.dot(c[1:], c[:-1])) / denom
    return min(1.0, max(-1.0, rho))


def scalar_proxy(data, metric: str = "euclidean") -> np.ndarray:
    """Distance of every observation to the medoid.

    ``data`` is a DistanceMatrix, or a series that is first turned into one
    with ``metric``. The medoid minimizes the total distance to all points;
    ties go to the smallest index.
    """
    if isinstance(data, DistanceMatrix):
        D = data.values
    else:
        D = pairwise_distance_matrix(data, metric).values
    medoid = int(np.argmin(D.sum(axis=1)))
    return D[:, medoid].copy()


def _q(T: int, rho: float) -> int:
    cap = math.floor(8.0 * (T / 100.0) ** (1.0 / 3.0))
    r = abs(rho)
    if r >= 1.0:
        return cap
    first = math.floor((1.5 * T) ** (1.0 / 3.0) * (2.0 * r / (1.0 - r * r)) ** (2.0 / 3.0))
    return min(first, cap)


def block_size_rule(T: int, rho: float, rho_sq: float) -> int:
    """``max(q(rho), q(rho_sq))`` clamped to ``[1, T // 4]``."""
    if T < 3:
        raise InvalidInputError("need T >= 3 for the block-size rule")
    b = max(_q(T, rho), _q(T, rho_sq))
    return int(min(max(b, 1), max(1, T // 4)))


def block_size(x) -> int:
    """Data-driven block length from the lag-1 autocorrelations of a scalar
    sequence and of its square."""
    x = np.asarray(x, dtype=np.float64).ravel()
    if x.size < 3:
        raise InvalidInputError("need at least 3 values for the block-size rule")
    return block_size_rule(x.size, lag1_autocorrelation(x), lag1_autocorrelation(x * x))


def segment_block_size(D, segment: Segment, override: Optional[int] = None) -> int:
    n = segment.length
    if override is not None:
        return int(min(override, n))
    if n < 3:
        return 1
    sub = _segment_block(D, segment)
    return block_size(scalar_proxy(DistanceMatrix(sub)))


def mbb_resample(length: int, b: int, rng: np.random.Generator) -> np.ndarray:
    """Indices of one moving-block bootstrap resample of ``range(length)``.

    Draws ``ceil(length / b)`` overlapping blocks of ``b`` consecutive
    indices (starts uniform on ``0 .. length - b``), concatenates them and
    keeps the first ``length``.
    """
    if not 1 <= b <= length:
        raise InvalidInputError("block size %d invalid for length %d" % (b, length))
    n_blocks = -(-length // b)
    starts = rng.integers(0, length - b + 1, size=n_blocks)
    idx = (starts[:, None] + np.arange(b)[None, :]).ravel()
    return idx[:length]


def replicate_rng(seed: int, stream: int, replicate: int) -> np.random.Generator:
    """Independent generator for one replicate of one test, reproducible from
    ``(seed, stream, replicate)`` alone."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, replicate)))


def bootstrap_maxima(D, segment: Segment, min_seg: int, config: BootstrapConfig,
                     b: Optional[int] = None, stream: int = 0) -> np.ndarray:
    """Maximum scan statistic of each of the ``config.replicates`` resamples."""
    _check_scan_args(segment, min_seg, config.stride)
    sub = _segment_block(D, segment)
    n = segment.length
    if b is None:
        b = segment_block_size(D, segment, config.block_size)

    def one(r):
        idx = mbb_resample(n, b, replicate_rng(config.seed, stream, r))
        star = np.ascontiguousarray(sub[np.ix_(idx, idx)])
        return scan_local(star, min_seg, config.stride)[2]

    reps = range(config.replicates)
    if config.threads == 1:
        out = [one(r) for r in reps]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            out = list(pool.map(one, reps))
    return np.asarray(out, dtype=np.float64)


def p_value(maxima, observed: float) -> float:
    maxima = np.asarray(maxima)
    return int(np.count_nonzero(maxima >= observed)) / (maxima.size + 1)


def significance(D, segment: Segment, observed: SegmentBest, config: BootstrapConfig,
                 min_seg: int, stream: int = 0, b: Optional[int] = None) -> float:
    """Bootstrap p-value ``#{V* >= V_obs} / (R + 1)`` for the observed best split.

    Each replicate resamples the segment in blocks, reindexes the segment's
    distance block (no metric recomputation) and rescans it with the same
    ``min_seg`` and stride. ``stream`` separates the random streams of
    different tests within one run.
    """
    if observed.value <= 0.0:
        # every replicate maximum is >= 0
        return config.replicates / (config.replicates + 1)
    maxima = bootstrap_maxima(D, segment, min_seg, config, b=b, stream=stream)
    return p_value(maxima, observed.value)
