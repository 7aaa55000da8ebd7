"""Sample ball detection statistics and the split scan.

Indices follow the change-point convention used throughout the package:
a :class:`Segment` ``(start, end)`` covers observations ``start+1 .. end``
(1-based), i.e. rows ``start:end`` of the distance matrix, and a split
``M`` puts observations ``start+1 .. M`` on the left. ``M`` is therefore
also the reported change-point index.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import InvalidInputError, SegmentTooShortError
from .metric import as_array


@dataclass(frozen=True)
class Segment:
    start: int
    end: int

    def __post_init__(self):
        if not (0 <= self.start < self.end):
            raise InvalidInputError("invalid segment (%d, %d]" % (self.start, self.end))

    @property
    def length(self) -> int:
        return self.end - self.start

    def check_within(self, T: int):
        if self.end > T:
            raise InvalidInputError("segment (%d, %d] exceeds series length %d" % (self.start, self.end, T))


@dataclass(frozen=True)
class SegmentBest:
    M_hat: int
    L_hat: int
    value: float


@dataclass(frozen=True)
class RankTable:
    """Stable per-center orderings of within-segment distances.

    ``order[i, p]`` is the local index at position ``p`` when the segment is
    sorted by distance from local center ``i`` (ties by index); ``pos`` is
    its inverse. ``group_start``/``group_end`` give the tie-group bounds of
    every position.
    """

    segment: Segment
    order: np.ndarray
    pos: np.ndarray
    group_start: np.ndarray
    group_end: np.ndarray

    def ball_count(self, i: int, j: int) -> int:
        """Points of the segment inside the closed ball centered at local
        ``i`` with radius ``D[i, j]``."""
        return int(self.group_end[i, self.pos[i, j]]) + 1


def _segment_block(D, segment: Segment) -> np.ndarray:
    arr = as_array(D)
    segment.check_within(arr.shape[0])
    return np.ascontiguousarray(arr[segment.start:segment.end, segment.start:segment.end])


def ball_indicator(D, i: int, j: int, u: int) -> int:
    """1 if point ``u`` lies in the closed ball around ``i`` of radius
    ``D[i, j]`` (0-based matrix indices), else 0."""
    arr = as_array(D)
    n = arr.shape[0]
    for k in (i, j, u):
        if not 0 <= k < n:
            raise IndexError("index %d out of range for %d points" % (k, n))
    return int(arr[i, u] <= arr[i, j])


def _check_split(segment: Segment, M: int):
    if not segment.start < M < segment.end:
        raise InvalidInputError(
            "split %d leaves an empty side in segment (%d, %d]" % (M, segment.start, segment.end))


def _numerator_to_value(total: int, n: int, m: int) -> float:
    return total / (n ** 3 * m * (n - m))


def detection_stat_naive(D, segment: Segment, M: int) -> float:
    """Direct evaluation of V for one split by explicit ball membership.

    Builds the full indicator tensor ``c[i, j, u] = D[i, u] <= D[i, j]``
    over the segment and averages it over each side. The squared
    differences are accumulated as integers, so the value is the correctly
    rounded rational result. Cubic memory; intended as a reference for
    small segments.
    """
    _check_split(segment, M)
    sub = _segment_block(D, segment)
    n = segment.length
    m = M - segment.start
    N = n - m
    ind = (sub[:, None, :] <= sub[:, :, None]).astype(np.int64)
    left = ind[:, :, :m].sum(axis=2)
    right = ind[:, :, m:].sum(axis=2)
    # C1 - C2 = (left*N - right*m) / (m*N)
    diff = left * N - right * m
    total = sum(int(v) for v in (diff * diff).sum(axis=1))
    return _numerator_to_value(total, n, m)


def detection_stat(D, segment: Segment, M: int) -> float:
    """V for a single split, via sorted distance rows (O(n^2 log n)).

    Equal to :func:`detection_stat_naive` but usable for long segments.
    """
    _check_split(segment, M)
    sub = _segment_block(D, segment)
    n = segment.length
    m = M - segment.start
    N = n - m
    left_sorted = np.sort(sub[:, :m], axis=1)
    all_sorted = np.sort(sub, axis=1)
    total = 0
    for i in range(n):
        a = np.searchsorted(left_sorted[i], sub[i], side="right").astype(np.int64)
        b = np.searchsorted(all_sorted[i], sub[i], side="right").astype(np.int64)
        diff = a * N - (b - a) * m
        total += int((diff * diff).sum())
    return _numerator_to_value(total, n, m)


def build_rank_table(D, segment: Segment) -> RankTable:
    sub = _segment_block(D, segment)
    order, pos, gstart, gend = _kernels.rank_tables(sub)
    return RankTable(segment, order, pos, gstart, gend)


def _check_scan_args(segment: Segment, min_seg: int, stride: int):
    if min_seg < 1:
        raise InvalidInputError("min_seg must be >= 1")
    if stride < 1:
        raise InvalidInputError("stride must be >= 1")
    if segment.length < 2 * min_seg:
        raise SegmentTooShortError(
            "segment (%d, %d] shorter than 2*min_seg=%d" % (segment.start, segment.end, 2 * min_seg))


def _local_surface(sub: np.ndarray, min_seg: int) -> np.ndarray:
    return _kernels.scan_segment(sub, min_seg)


def _coarse_mask(n: int, min_seg: int, stride: int) -> np.ndarray:
    mask = np.zeros((n + 1, n + 1), dtype=bool)
    ms = np.arange(min_seg, n + 1, stride)
    ls = np.arange(2 * min_seg, n + 1, stride)
    mask[np.ix_(ms, ls)] = True
    return mask


def _first_argmax(values: np.ndarray, mask: np.ndarray):
    # column-major walk: smallest l first, then smallest m
    vals = np.where(mask & ~np.isnan(values), values, -np.inf).T
    flat = int(np.argmax(vals))
    l, m = divmod(flat, vals.shape[1])
    return m, l


def best_from_surface(surf: np.ndarray, min_seg: int, stride: int = 1):
    """Argmax (m, l, value) of a local surface, with stride coarsening and
    a +/- stride exhaustive refinement around the coarse optimum."""
    n = surf.shape[0] - 1
    admissible = ~np.isnan(surf)
    if stride == 1:
        m, l = _first_argmax(surf, admissible)
        return m, l, float(surf[m, l])
    coarse = _coarse_mask(n, min_seg, stride) & admissible
    m0, l0 = _first_argmax(surf, coarse)
    local = np.zeros_like(admissible)
    local[max(0, m0 - stride):m0 + stride + 1, max(0, l0 - stride):l0 + stride + 1] = True
    m, l = _first_argmax(surf, local & admissible)
    return m, l, float(surf[m, l])


def scan_local(sub: np.ndarray, min_seg: int, stride: int = 1):
    """Scan a segment-local distance block; returns ``(m, l, value)``."""
    return best_from_surface(_local_surface(sub, min_seg), min_seg, stride)


def segment_scan(D, segment: Segment, min_seg: int, stride: int = 1) -> SegmentBest:
    """Maximize V(M, L) over ``start+min_seg <= M <= L-min_seg``, ``L <= end``.

    The statistic for ``(M, L)`` uses observations ``start+1 .. L`` with the
    split at ``M``. Ties go to the smallest ``L`` and then the smallest
    ``M``. With ``stride > 1`` the grid ``M = start+min_seg+k*stride``,
    ``L = start+2*min_seg+k*stride`` is searched first and the best point
    is refined over its +/- stride neighbourhood.

    Raises
    ------
    SegmentTooShortError
        If the segment cannot hold two sides of ``min_seg`` points.
    """
    _check_scan_args(segment, min_seg, stride)
    sub = _segment_block(D, segment)
    m, l, value = scan_local(sub, min_seg, stride)
    return SegmentBest(segment.start + m, segment.start + l, value)


def scan_profile(D, segment: Segment, min_seg: int, stride: int = 1):
    """All (M, L, V) rows on the (coarse) scan grid, ordered by L then M."""
    _check_scan_args(segment, min_seg, stride)
    sub = _segment_block(D, segment)
    surf = _local_surface(sub, min_seg)
    mask = _coarse_mask(segment.length, min_seg, stride) & ~np.isnan(surf)
    rows = []
    for l in range(surf.shape[0]):
        for m in np.nonzero(mask[:, l])[0]:
            rows.append((segment.start + int(m), segment.start + l, float(surf[m, l])))
    return rows


def write_profile_csv(rows, path_or_file):
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["M", "L", "V"])
        for M, L, V in rows:
            w.writerow([M, L, repr(V)])

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)
