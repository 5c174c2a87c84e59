"""Compiled inner loops shared by the map, transitivity, LEO and density modules.

Maps are passed to the kernels as ``(family_code, params)`` where ``params`` is
a float64 array laid out per family (see ``MapSpec.packed``).
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

BETA = 0
PLCNV = 1
NLCNV = 2
LORENZ_LIKE = 3
EXPANDING = 4

# Status codes returned by the image / LEO kernels.
COVERED = 1
NOT_COVERED = 0
OVERFLOW = -1


@njit(cache=True, nogil=True)
def cnv_F(fam, p, x):
    if fam == PLCNV:
        m0, m1, a = p[0], p[1], p[2]
        j_min = a * m1 / (m0 + m1)
        j_max = (m0 + a * m1) / (m0 + m1)
        if x <= j_min:
            return -m0 * x
        if x <= j_max:
            return m1 * (x - a)
        return -m0 * (x - 1.0)
    # nlCNV: mu * x * (x - a) * (1 - x)
    return p[0] * x * (x - p[1]) * (1.0 - x)


@njit(cache=True, nogil=True)
def branch_value(fam, p, x, right):
    """Value of the left (``right=False``) or right branch formula at ``x``.

    Each branch is evaluated by its own continuous formula, so the value at the
    discontinuity is the one-sided limit from that side.
    """
    if fam == BETA:
        y = p[0] * x + p[1]
        return y - 1.0 if right else y
    if fam == PLCNV or fam == NLCNV:
        if fam == PLCNV:
            d, alpha, beta = p[3], p[4], p[5]
        else:
            d, alpha, beta = p[2], p[3], p[4]
        y = x + cnv_F(fam, p, x) - alpha
        return y - beta if right else y
    if fam == LORENZ_LIKE:
        if not right:
            if x <= 0.2:
                return 0.4
            return 0.4 + 2.4 * (x - 0.2)
        if x <= 0.6:
            return 4.0 * (x - 0.45)
        return 0.6
    # EXPANDING, p[0] = c
    c = p[0]
    if not right:
        return 0.1 + 0.9 * (math.exp(1.5 * x) - 1.0) / (math.exp(1.5 * c) - 1.0)
    return 0.9 * (1.0 - (math.exp(1.5 * (1.0 - x)) - 1.0) / (math.exp(1.5 * (1.0 - c)) - 1.0))


@njit(cache=True, nogil=True)
def discontinuity(fam, p):
    if fam == BETA:
        return (1.0 - p[1]) / p[0]
    if fam == PLCNV:
        return p[3]
    if fam == NLCNV:
        return p[2]
    if fam == LORENZ_LIKE:
        return 0.45
    return p[0]


@njit(cache=True, nogil=True)
def evaluate(fam, p, x):
    if fam == BETA:
        y = p[0] * x + p[1]
        y = y - math.floor(y)
        if y >= 1.0:
            y = 0.0
        return y
    if fam == PLCNV or fam == NLCNV:
        # Heaviside with H(0) = 1
        if fam == PLCNV:
            d, alpha, beta = p[3], p[4], p[5]
        else:
            d, alpha, beta = p[2], p[3], p[4]
        y = x + cnv_F(fam, p, x) - alpha
        if x >= d:
            y -= beta
        return y
    return branch_value(fam, p, x, x >= discontinuity(fam, p))


@njit(cache=True, nogil=True)
def orbit(fam, p, x0, n):
    out = np.empty(n)
    x = x0
    for i in range(n):
        out[i] = x
        x = evaluate(fam, p, x)
    return out


@njit(cache=True, nogil=True)
def bin_counts(fam, p, x0, n, skip, lo, hi, bins):
    """Histogram of orbit samples ``skip..n-1`` (sample 0 is ``x0``)."""
    counts = np.zeros(bins, np.int64)
    width = (hi - lo) / bins
    x = x0
    for i in range(n):
        if i >= skip and x == x:
            k = int(math.floor((x - lo) / width))
            if k < 0:
                k = 0
            elif k > bins - 1:
                k = bins - 1
            counts[k] += 1
        if i < n - 1:
            x = evaluate(fam, p, x)
    return counts


@njit(cache=True, nogil=True)
def all_bins_hit(fam, p, x0, n, skip, lo, hi, bins):
    counts = bin_counts(fam, p, x0, n, skip, lo, hi, bins)
    for k in range(bins):
        if counts[k] == 0:
            return False
    return True


@njit(cache=True, nogil=True)
def merge_sorted(src, n, dst, tol):
    """Merge ``src[:n]`` (any order) into ``dst``; returns the merged count."""
    order = np.argsort(src[:n, 0], kind="mergesort")
    m = 0
    for t in range(n):
        i = order[t]
        left, right = src[i, 0], src[i, 1]
        if m > 0 and left <= dst[m - 1, 1] + tol:
            if right > dst[m - 1, 1]:
                dst[m - 1, 1] = right
        else:
            dst[m, 0] = left
            dst[m, 1] = right
            m += 1
    return m


@njit(cache=True, nogil=True)
def _covers(cur, n, lo, hi, cover_tol):
    return n == 1 and cur[0, 0] <= lo + cover_tol and cur[0, 1] >= hi - cover_tol


@njit(cache=True, nogil=True)
def image(fam, p, c, x, y, lo, hi, max_iter, merge_tol, cover_tol, cap):
    """Iterated interval image of ``[x, y]``.

    Returns ``(intervals, iterations_used, status)``.
    """
    cur = np.empty((cap + 1, 2))
    new = np.empty((2 * cap + 2, 2))
    cur[0, 0] = x
    cur[0, 1] = y
    n = 1
    used = 0
    status = NOT_COVERED
    for it in range(max_iter):
        k = 0
        for j in range(n):
            x1, x2 = cur[j, 0], cur[j, 1]
            if x1 < c and c < x2:
                new[k, 0] = lo
                new[k, 1] = branch_value(fam, p, x2, True)
                new[k + 1, 0] = branch_value(fam, p, x1, False)
                new[k + 1, 1] = hi
                k += 2
            elif x2 == c:
                new[k, 0] = branch_value(fam, p, x1, False)
                new[k, 1] = hi
                k += 1
            elif x2 < c:
                new[k, 0] = branch_value(fam, p, x1, False)
                new[k, 1] = branch_value(fam, p, x2, False)
                k += 1
            else:
                # x1 >= c: right branch, f(c) is the right limit
                new[k, 0] = branch_value(fam, p, x1, True)
                new[k, 1] = branch_value(fam, p, x2, True)
                k += 1
        for j in range(k):
            new[j, 0] = min(max(new[j, 0], lo), hi)
            new[j, 1] = min(max(new[j, 1], lo), hi)
        n = merge_sorted(new, k, cur, merge_tol)
        used = it + 1
        if n > cap:
            status = OVERFLOW
            break
        if _covers(cur, n, lo, hi, cover_tol):
            status = COVERED
            break
    return cur[:n].copy(), used, status


@njit(cache=True, nogil=True)
def leo(fam, p, c, lo, hi, m, max_iter, merge_tol, cover_tol, cap):
    """Index of the first subinterval that fails to cover, -1 if all cover.

    Second return value is the status of that subinterval (NOT_COVERED or OVERFLOW).
    """
    dm = (hi - lo) / m
    for i in range(m):
        x = lo + i * dm
        y = lo + (i + 1) * dm
        _, _, status = image(fam, p, c, x, y, lo, hi, max_iter, merge_tol, cover_tol, cap)
        if status != COVERED:
            return i, status
    return -1, COVERED
