import math

import numpy as np
import pytest

from balldetect.ballstat import (
    Segment,
    ball_indicator,
    build_rank_table,
    detection_stat,
    detection_stat_naive,
    scan_profile,
    segment_scan,
)
from balldetect.exceptions import InvalidInputError, SegmentTooShortError
from balldetect.metric import pairwise_distance_matrix


def grid_oracle(D, segment, min_seg):
    """Exhaustive (M, L) search with the naive statistic; ties -> smallest L, then M."""
    best = None
    for L in range(segment.start + 2 * min_seg, segment.end + 1):
        for M in range(segment.start + min_seg, L - min_seg + 1):
            v = detection_stat_naive(D, Segment(segment.start, L), M)
            if best is None or v > best[2]:
                best = (M, L, v)
    return best


def dm(x, metric="euclidean"):
    return pairwise_distance_matrix(np.asarray(x, dtype=float), metric)


def test_ball_indicator_examples():
    D = dm([0, 3, 2])
    assert ball_indicator(D, 0, 0, 0) == 1
    assert ball_indicator(D, 0, 1, 2) == 1
    assert ball_indicator(dm([0, 1, 5]), 0, 1, 2) == 0
    with pytest.raises(IndexError):
        ball_indicator(D, 0, 1, 3)


def test_naive_alternating_pattern_is_zero():
    D = dm([1.0, 7.0, 1.0, 7.0])
    assert detection_stat_naive(D, Segment(0, 4), 2) == 0.0


def test_naive_two_clusters():
    # 8 same-cluster pairs with squared difference 1, 16 pairs in total
    D = dm([0, 0, 10, 10])
    assert detection_stat_naive(D, Segment(0, 4), 2) == pytest.approx(0.5, rel=1e-15)


def test_naive_constant_series():
    D = dm(np.zeros((7, 2)))
    for M in range(1, 7):
        assert detection_stat_naive(D, Segment(0, 7), M) == 0.0


def test_naive_rejects_empty_side():
    D = dm([0, 1, 2])
    with pytest.raises(InvalidInputError):
        detection_stat_naive(D, Segment(0, 3), 3)
    with pytest.raises(InvalidInputError):
        detection_stat(D, Segment(0, 3), 0)


def test_fast_single_split_matches_naive(rng):
    for _ in range(30):
        T = int(rng.integers(3, 25))
        x = rng.integers(0, 5, size=(T, 2)) if rng.uniform() < 0.5 else rng.normal(size=(T, 2))
        D = dm(x)
        start = int(rng.integers(0, T - 2))
        seg = Segment(start, T)
        M = int(rng.integers(start + 1, T))
        assert detection_stat(D, seg, M) == detection_stat_naive(D, seg, M)


def test_rank_table_single_point():
    table = build_rank_table(dm([3.0]), Segment(0, 1))
    assert table.pos[0, 0] == 0
    assert table.ball_count(0, 0) == 1


def test_rank_table_order():
    table = build_rank_table(dm([0, 5, 1]), Segment(0, 3))
    assert list(table.order[0]) == [0, 2, 1]


def test_rank_table_counts_match_direct(rng):
    x = rng.normal(size=(20, 2))
    x[5] = x[3]  # a tie
    D = dm(x).values
    table = build_rank_table(D, Segment(0, 20))
    for i in range(20):
        for j in range(20):
            assert table.ball_count(i, j) == int(np.sum(D[i] <= D[i, j]))


def test_rank_table_respects_segment(rng):
    D = dm(rng.normal(size=(15, 1))).values
    table = build_rank_table(D, Segment(4, 12))
    sub = D[4:12, 4:12]
    for i in range(8):
        for j in range(8):
            assert table.ball_count(i, j) == int(np.sum(sub[i] <= sub[i, j]))


def test_scan_obvious_boundary():
    D = dm([0, 0, 0, 10, 10, 10])
    best = segment_scan(D, Segment(0, 6), min_seg=2)
    assert (best.M_hat, best.L_hat) == (3, 6)
    M, L, v = grid_oracle(D, Segment(0, 6), 2)
    assert (M, L) == (3, 6) and best.value == v


def test_scan_forced_split():
    D = dm([0.3, 1.2, -0.4, 2.2, 0.9, 1.1])
    best = segment_scan(D, Segment(0, 6), min_seg=3)
    assert (best.M_hat, best.L_hat) == (3, 6)
    assert best.value == detection_stat_naive(D, Segment(0, 6), 3)


def test_scan_too_short():
    with pytest.raises(SegmentTooShortError):
        segment_scan(dm([0, 1, 2, 3, 4]), Segment(0, 5), min_seg=3)


def test_scan_degenerate_returns_minimal_split():
    best = segment_scan(dm(np.ones((12, 2))), Segment(0, 12), min_seg=3)
    assert (best.M_hat, best.L_hat, best.value) == (3, 6, 0.0)


def test_scan_matches_oracle_random_25(rng):
    D = dm(rng.normal(size=(25, 2)))
    best = segment_scan(D, Segment(0, 25), min_seg=3)
    assert (best.M_hat, best.L_hat, best.value) == grid_oracle(D, Segment(0, 25), 3)


def test_scan_matches_oracle_interior_segments_with_ties(rng):
    for _ in range(20):
        T = int(rng.integers(8, 22))
        x = rng.integers(0, 3, size=(T, 1))
        D = dm(x)
        start = int(rng.integers(0, T - 6))
        seg = Segment(start, T)
        min_seg = int(rng.integers(1, seg.length // 2 + 1))
        best = segment_scan(D, seg, min_seg)
        assert (best.M_hat, best.L_hat, best.value) == grid_oracle(D, seg, min_seg)


def test_scan_circular_matches_oracle(rng):
    for _ in range(10):
        a = rng.uniform(0, 4 * math.pi, size=int(rng.integers(6, 20)))
        D = dm(a, "circular")
        seg = Segment(0, len(a))
        best = segment_scan(D, seg, 2)
        assert (best.M_hat, best.L_hat, best.value) == grid_oracle(D, seg, 2)


def test_stride_grid_and_refinement(rng):
    x = np.concatenate([rng.normal(size=(20, 2)), rng.normal(5, 1, size=(21, 2))])
    D = dm(x)
    seg = Segment(0, 41)
    rows = scan_profile(D, seg, min_seg=4, stride=2)
    assert all((M - 4) % 2 == 0 and (L - 8) % 2 == 0 for M, L, _ in rows)
    exact = segment_scan(D, seg, 4, stride=1)
    coarse = segment_scan(D, seg, 4, stride=2)
    # the refinement window around a coarse optimum near the truth finds it
    assert abs(coarse.M_hat - 20) <= 1
    assert coarse.value <= exact.value


def test_profile_maximum_equals_scan(rng):
    x = np.concatenate([rng.normal(size=(15, 2)), rng.normal(6, 1, size=(15, 2))])
    D = dm(x)
    seg = Segment(0, 30)
    rows = scan_profile(D, seg, 3)
    top = max(rows, key=lambda r: (r[2], -r[1], -r[0]))
    best = segment_scan(D, seg, 3)
    assert (top[0], top[1], top[2]) == (best.M_hat, best.L_hat, best.value)
    assert best.M_hat == 15


def test_value_nonnegative(rng):
    for _ in range(20):
        D = dm(rng.normal(size=(int(rng.integers(4, 20)), 2)))
        assert segment_scan(D, Segment(0, D.n), 2).value >= 0


def test_scale_invariance(rng):
    D = dm(rng.normal(size=(18, 3)))
    seg = Segment(0, 18)
    c = 3.7
    for M in range(1, 18):
        assert detection_stat(D.scaled(c), seg, M) == detection_stat(D, seg, M)


def test_within_group_permutation_invariance(rng):
    x = rng.normal(size=(16, 2))
    M = 7
    perm = np.concatenate([rng.permutation(M), M + rng.permutation(16 - M)])
    seg = Segment(0, 16)
    assert detection_stat_naive(dm(x[perm]), seg, M) == detection_stat_naive(dm(x), seg, M)


def test_identical_multisets_give_zero(rng):
    half = rng.normal(size=(6, 2))
    x = np.concatenate([half, half[rng.permutation(6)]])
    assert detection_stat_naive(dm(x), Segment(0, 12), 6) == 0.0
