"""Segmentation quality metrics for estimated vs. true change points."""

from __future__ import annotations

from math import comb

import numpy as np

from .exceptions import InvalidInputError


def partition_from_changepoints(cps, T: int) -> np.ndarray:
    """Segment label of each time point 1..T: the number of change points
    strictly before it."""
    cps = [int(c) for c in cps]
    if any(b <= a for a, b in zip(cps, cps[1:])):
        raise InvalidInputError("change points must be strictly increasing")
    for c in cps:
        if not 0 < c < T:
            raise InvalidInputError("change point %d outside (0, %d)" % (c, T))
    t = np.arange(1, T + 1)
    return np.searchsorted(np.asarray(cps, dtype=np.int64), t, side="left")


def _contingency(p1, p2):
    p1 = np.asarray(p1)
    p2 = np.asarray(p2)
    if p1.shape != p2.shape or p1.ndim != 1:
        raise InvalidInputError("partitions must be 1-D with equal lengths")
    _, a = np.unique(p1, return_inverse=True)
    _, b = np.unique(p2, return_inverse=True)
    table = np.zeros((a.max() + 1, b.max() + 1), dtype=np.int64)
    np.add.at(table, (a, b), 1)
    return table


def _pairs(x) -> int:
    return sum(comb(int(v), 2) for v in np.ravel(x))


def rand_index(p1, p2) -> float:
    table = _contingency(p1, p2)
    n = int(table.sum())
    if n < 2:
        raise InvalidInputError("need at least 2 points")
    total = comb(n, 2)
    same_both = _pairs(table)
    same_1 = _pairs(table.sum(axis=1))
    same_2 = _pairs(table.sum(axis=0))
    diff_both = total - same_1 - same_2 + same_both
    return (same_both + diff_both) / total


def adjusted_rand_index(p1, p2) -> float:
    """Hubert-Arabie adjusted Rand index.

    When the chance-corrected denominator vanishes (both partitions are a
    single segment, or both are all singletons) the result is 1 for
    identical partitions and 0 otherwise.
    """
    table = _contingency(p1, p2)
    n = int(table.sum())
    if n < 2:
        raise InvalidInputError("need at least 2 points")
    index = _pairs(table)
    sa = _pairs(table.sum(axis=1))
    sb = _pairs(table.sum(axis=0))
    expected = sa * sb / comb(n, 2)
    denom = 0.5 * (sa + sb) - expected
    if denom == 0:
        identical = (table > 0).sum(axis=0).max() == 1 and (table > 0).sum(axis=1).max() == 1
        return 1.0 if identical else 0.0
    return (index - expected) / denom


def _with_sentinels(cps, T: int):
    s = sorted(int(c) for c in cps)
    if not s or s[0] != 0 or s[-1] != T:
        raise InvalidInputError("change-point sets must include the sentinels 0 and %d" % T)
    return s


def _directed(frm, to) -> int:
    return max(min(abs(a - b) for a in to) for b in frm)


def segmentation_errors(true_cps, est_cps, T: int):
    """``(over, under)`` segmentation errors.

    ``over = max_{b in true} min_{a in est} |a - b|`` and
    ``under = max_{b in est} min_{a in true} |a - b|``; both sets must
    contain the sentinels 0 and T.
    """
    t = _with_sentinels(true_cps, T)
    e = _with_sentinels(est_cps, T)
    return _directed(t, e), _directed(e, t)


def hausdorff(true_cps, est_cps, T: int) -> int:
    return max(segmentation_errors(true_cps, est_cps, T))


def evaluate(true_cps, est_cps, T: int) -> dict:
    """All metrics for change points given without sentinels."""
    p_true = partition_from_changepoints(true_cps, T)
    p_est = partition_from_changepoints(est_cps, T)
    full_t = [0, *true_cps, T]
    full_e = [0, *est_cps, T]
    over, under = segmentation_errors(full_t, full_e, T)
    return {
        "T": T,
        "rand_index": rand_index(p_true, p_est),
        "adjusted_rand_index": adjusted_rand_index(p_true, p_est),
        "over_segmentation": over,
        "under_segmentation": under,
        "hausdorff": max(over, under),
    }
