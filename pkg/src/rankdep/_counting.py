"""Compiled counting loops behind the coefficient fast paths and brutes.

The brute-force evaluators translate the defining U-statistic sums
literally, term by term, and exist as oracles for the fast paths, so
they intentionally share no counting logic with them.
"""

import numpy as np
from numba import njit


@njit(cache=True)
def joint_le_counts(ends, ry, m):
    """For each point, count others weakly below it in both coordinates.

    Points must be ordered by the first coordinate.  ``ends[k]`` is the
    end (exclusive) of the run of first-coordinate values equal to the
    k-th, ``ry`` holds dense second-coordinate ranks in ``1..m``.
    Returns ``w`` with ``w[k] = #{j != k: x1_j <= x1_k and x2_j <= x2_k}``.
    """
    n = len(ry)
    tree = np.zeros(m + 1, dtype=np.int64)
    w = np.empty(n, dtype=np.int64)
    i = 0
    while i < n:
        e = ends[i]
        for k in range(i, e):
            t = ry[k]
            while t <= m:
                tree[t] += 1
                t += t & (-t)
        for k in range(i, e):
            t = ry[k]
            s = 0
            while t > 0:
                s += tree[t]
                t -= t & (-t)
            w[k] = s - 1
        i = e
    return w


@njit(cache=True)
def separated_pair_counts(s):
    """Count jointly separated quadruples of a tie-free sample.

    ``s[p]`` is the second-coordinate rank (0-based) of the point with
    first-coordinate rank ``p``.  For every pair of points, counts how
    many earlier points lie strictly below both (``cs`` accumulates
    same-direction splits) or strictly above both (``co`` the opposite
    direction), combining them two at a time.
    """
    n = len(s)
    prefix = np.zeros(n + 1, dtype=np.int64)  # prefix[t] = #{q seen: s_q < t}
    cs = np.int64(0)
    co = np.int64(0)
    for p in range(n):
        sp = s[p]
        for pp in range(p + 1, n):
            spp = s[pp]
            if sp < spp:
                lo, hi = sp, spp
            else:
                lo, hi = spp, sp
            m = prefix[lo]
            mp = p - prefix[hi + 1]
            cs += m * (m - 1) // 2
            co += mp * (mp - 1) // 2
        for t in range(sp + 1, n + 1):
            prefix[t] += 1
    return cs, co


@njit(cache=True)
def d_brute_total(x, y):
    """Literal sum over distinct index 5-tuples for the order-5 statistic."""
    n = len(x)
    total = 0.0
    for i1 in range(n):
        for i2 in range(n):
            if i2 == i1:
                continue
            for i3 in range(n):
                if i3 == i1 or i3 == i2:
                    continue
                for i4 in range(n):
                    if i4 == i1 or i4 == i2 or i4 == i3:
                        continue
                    for i5 in range(n):
                        if i5 == i1 or i5 == i2 or i5 == i3 or i5 == i4:
                            continue
                        a = (
                            (1.0 if x[i1] <= x[i5] else 0.0)
                            - (1.0 if x[i2] <= x[i5] else 0.0)
                        ) * (
                            (1.0 if x[i3] <= x[i5] else 0.0)
                            - (1.0 if x[i4] <= x[i5] else 0.0)
                        )
                        b = (
                            (1.0 if y[i1] <= y[i5] else 0.0)
                            - (1.0 if y[i2] <= y[i5] else 0.0)
                        ) * (
                            (1.0 if y[i3] <= y[i5] else 0.0)
                            - (1.0 if y[i4] <= y[i5] else 0.0)
                        )
                        total += 0.25 * a * b
    return total


@njit(cache=True)
def r_brute_total(x, y):
    """Literal sum over distinct index 6-tuples for the order-6 statistic."""
    n = len(x)
    total = 0.0
    for i1 in range(n):
        for i2 in range(n):
            if i2 == i1:
                continue
            for i3 in range(n):
                if i3 == i1 or i3 == i2:
                    continue
                for i4 in range(n):
                    if i4 == i1 or i4 == i2 or i4 == i3:
                        continue
                    for i5 in range(n):
                        if i5 == i1 or i5 == i2 or i5 == i3 or i5 == i4:
                            continue
                        a = (
                            (1.0 if x[i1] <= x[i5] else 0.0)
                            - (1.0 if x[i2] <= x[i5] else 0.0)
                        ) * (
                            (1.0 if x[i3] <= x[i5] else 0.0)
                            - (1.0 if x[i4] <= x[i5] else 0.0)
                        )
                        if a == 0.0:
                            continue
                        for i6 in range(n):
                            if (
                                i6 == i1
                                or i6 == i2
                                or i6 == i3
                                or i6 == i4
                                or i6 == i5
                            ):
                                continue
                            b = (
                                (1.0 if y[i1] <= y[i6] else 0.0)
                                - (1.0 if y[i2] <= y[i6] else 0.0)
                            ) * (
                                (1.0 if y[i3] <= y[i6] else 0.0)
                                - (1.0 if y[i4] <= y[i6] else 0.0)
                            )
                            total += 0.25 * a * b
    return total


@njit(cache=True)
def _both_below(p, q, r, s):
    # indicator that max(p, q) < min(r, s)
    big = p if p > q else q
    small = r if r < s else s
    return 1.0 if big < small else 0.0


@njit(cache=True)
def taustar_brute_total(x, y):
    """Literal sum over distinct index 4-tuples for the order-4 statistic."""
    n = len(x)
    total = 0.0
    for i1 in range(n):
        for i2 in range(n):
            if i2 == i1:
                continue
            for i3 in range(n):
                if i3 == i1 or i3 == i2:
                    continue
                for i4 in range(n):
                    if i4 == i1 or i4 == i2 or i4 == i3:
                        continue
                    a = (
                        _both_below(x[i1], x[i3], x[i2], x[i4])
                        + _both_below(x[i2], x[i4], x[i1], x[i3])
                        - _both_below(x[i1], x[i4], x[i2], x[i3])
                        - _both_below(x[i2], x[i3], x[i1], x[i4])
                    )
                    if a == 0.0:
                        continue
                    b = (
                        _both_below(y[i1], y[i3], y[i2], y[i4])
                        + _both_below(y[i2], y[i4], y[i1], y[i3])
                        - _both_below(y[i1], y[i4], y[i2], y[i3])
                        - _both_below(y[i2], y[i3], y[i1], y[i4])
                    )
                    total += a * b
    return total
