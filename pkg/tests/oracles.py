"""Independent brute-force oracles used to pin expected values in tests.

These deliberately avoid the package's solver machinery: the weighted
basis-pursuit oracle enumerates candidate supports and solves tiny linear
systems, which is exact up to floating point for problems small enough to
enumerate.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def weighted_bp_oracle(A: np.ndarray, y: np.ndarray, w: np.ndarray, feas_tol: float = 1e-9):
    """Minimum of sum_i w_i |u_i| over {u : Au = y} for small dense A.

    The problem is a linear program (split u into positive and negative
    parts), so if the minimum is finite some basic feasible solution attains
    it, and a basic solution has at most n = rank(A) nonzero entries. We
    therefore enumerate every support S with |S| <= n, solve A_S u_S = y by
    least squares, keep exactly feasible candidates, and take the smallest
    weighted l1 value. Returns (objective, minimizer).
    """
    A = np.asarray(A, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    n, N = A.shape
    scale = 1.0 + float(np.linalg.norm(y))

    best_obj = np.inf
    best_u = None
    if np.linalg.norm(y) <= feas_tol * scale:
        best_obj = 0.0
        best_u = np.zeros(N)

    for size in range(1, n + 1):
        for cols in combinations(range(N), size):
            sub = A[:, cols]
            u_s, *_ = np.linalg.lstsq(sub, y, rcond=None)
            if np.linalg.norm(sub @ u_s - y) > feas_tol * scale:
                continue
            obj = float(np.dot(w[list(cols)], np.abs(u_s)))
            if obj < best_obj:
                best_obj = obj
                best_u = np.zeros(N)
                best_u[list(cols)] = u_s
    if best_u is None:
        raise ValueError("no feasible support found; y not in range(A)?")
    return best_obj, best_u


def energy_count_oracle(x: np.ndarray, p_hat: float) -> int:
    """Smallest number of largest-magnitude entries whose l2 norm reaches
    p_hat times the full l2 norm, by linear scan over squared sums.

    Intended for generic inputs; at exact boundary coincidences (e.g.
    p_hat = 1 with repeated magnitudes) the <=-comparison of two float
    summations is representation-sensitive and hand expectations should be
    used instead.
    """
    mags = np.sort(np.abs(np.asarray(x, dtype=np.float64)))[::-1]
    sq = [float(m) * float(m) for m in mags]
    # np.sum for the grand total: pairwise vs sequential accumulation can
    # differ by an ulp, which flips the count when a prefix lands exactly
    # on the threshold (e.g. repeated magnitudes). The scan below is the
    # independently-checked part.
    total = float(np.sum(np.array(sq)))
    if total == 0.0:
        return 0
    target = (p_hat * p_hat) * total
    running = 0.0
    for count, val in enumerate(sq, start=1):
        running += val
        if running >= target:
            return count
    return mags.size
