"""Compiled inner loops for the split scan.

Notation (segment-local, 0-based): ``le[l][i, j]`` is the number of points
``u < l`` with ``D[i, u] <= D[i, j]``. For a split with ``m`` points on the
left and ``l`` points in the scanned prefix, the detection statistic is

    V(m, l) = X / (l**3 * m * (l - m)),
    X = l**2 * saa[m, l] - 2*l*m * sab[m, l] + m**2 * saa[l, l],

with ``saa[m, l] = sum_{i,j<l} le[m][i,j]**2`` and
``sab[m, l] = sum_{i,j<l} le[m][i,j] * le[l][i,j]``. Both tables are
integer-valued, so X is exact.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def rank_tables(D):
    """Per-center stable ordering, inverse positions and tie-group bounds."""
    n = D.shape[0]
    order = np.empty((n, n), np.int64)
    pos = np.empty((n, n), np.int64)
    gstart = np.empty((n, n), np.int64)
    gend = np.empty((n, n), np.int64)
    for i in range(n):
        o = np.argsort(D[i], kind="mergesort")
        for p in range(n):
            order[i, p] = o[p]
            pos[i, o[p]] = p
        p = 0
        while p < n:
            q = p
            d = D[i, o[p]]
            while q + 1 < n and D[i, o[q + 1]] == d:
                q += 1
            for r in range(p, q + 1):
                gstart[i, r] = p
                gend[i, r] = q
            p = q + 1
    return order, pos, gstart, gend


@njit(cache=True, nogil=True)
def sweep_tables(order, pos, gstart):
    n = order.shape[0]
    # cur[i, p] holds le[l][i, order[i, p]] (per-center position space)
    cur = np.zeros((n, n), np.int64)
    saa = np.zeros((n + 1, n + 1), np.int64)
    sab = np.zeros((n + 1, n + 1), np.int64)
    suf = np.zeros(n + 1, np.int64)
    inc = np.zeros(n + 1, np.int64)
    delta = np.zeros(n, np.int64)
    # gpos[i, j]: first position of j's tie group around center i
    gpos = np.empty((n, n), np.int64)
    for i in range(n):
        for j in range(n):
            gpos[i, j] = gstart[i, pos[i, j]]

    # step l moves cur from le[l] to le[l + 1] (point l joins the prefix)
    for l in range(n):
        lp = l + 1
        for k in range(n):
            delta[k] = 0
        for m in range(lp):
            inc[m] = 0
        for i in range(lp):
            g = gpos[i, l]
            run = 0
            for p in range(n - 1, -1, -1):
                j = order[i, p]
                c = cur[i, p]
                if p >= g:
                    delta[max(i, j)] += 2 * c + 1
                    c += 1
                    cur[i, p] = c
                if j < lp:
                    run += c
                suf[p] = run
            # sum over j < lp with D[i, j] >= D[i, m] of le[lp][i, j]
            for m in range(lp):
                inc[m] += suf[gpos[i, m]]
        for i in range(lp, n):
            g = gpos[i, l]
            for p in range(g, n):
                c = cur[i, p]
                delta[max(i, order[i, p])] += 2 * c + 1
                cur[i, p] = c + 1
        acc = 0
        for k in range(n):
            acc += delta[k]
            saa[lp, k + 1] = saa[l, k + 1] + acc
        for m in range(lp):
            sab[m + 1, lp] = sab[m, lp] + inc[m]
    return saa, sab


@njit(cache=True, nogil=True)
def surface(saa, sab, min_seg, exact):
    """V(m, l) for every admissible ``min_seg <= m <= l - min_seg``; NaN elsewhere."""
    n = saa.shape[0] - 1
    out = np.full((n + 1, n + 1), np.nan)
    for l in range(2 * min_seg, n + 1):
        sbb = saa[l, l]
        for m in range(min_seg, l - min_seg + 1):
            den = float(l) * l * l * m * (l - m)
            if exact:
                x = l * l * saa[m, l] - 2 * l * m * sab[m, l] + m * m * sbb
                out[m, l] = float(x) / den
            else:
                x = (float(l) * l * saa[m, l] - 2.0 * l * m * sab[m, l]
                     + float(m) * m * sbb)
                out[m, l] = max(x, 0.0) / den
    return out


@njit(cache=True, nogil=True)
def scan_segment(D, min_seg):
    """Full V surface for a segment-local distance matrix."""
    order, pos, gstart, _ = rank_tables(D)
    saa, sab = sweep_tables(order, pos, gstart)
    # l^2 * saa <= n^6 must fit in int64
    exact = D.shape[0] <= 1000
    return surface(saa, sab, min_seg, exact)
