"""Recovery-guarantee constants and checkable conditions.

Small pure functions around the weighted-l1 guarantee machinery: the
gamma/eta constants and the RIP condition they require, a null-space-property
constant, a coefficient-decay condition on a concrete signal, an exhaustive
restricted-isometry constant for tiny matrices, and the
intersection-accuracy law for two nested-correctness support estimates
together with a Monte Carlo simulator of its idealized probability model.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .sensing import SensingMatrix
from .sigcore import IndexSet, as_signal

__all__ = [
    "RipEstimate",
    "Prop1Inputs",
    "Prop2Simulation",
    "brute_force_rip",
    "decay_condition_max_d1",
    "eta",
    "gamma",
    "nsp_constant",
    "prop2_accuracy",
    "prop2_simulate",
    "rip_condition_ok",
]

_SUBSET_GUARD = 10**6


@dataclass(frozen=True)
class RipEstimate:
    """Restricted isometry constant of order k, or an upper bound on it.

    delta may reach or exceed 1 for degenerate matrices (e.g. duplicated
    columns); such an estimate simply certifies that the isometry condition
    fails at this order.
    """

    k: int
    delta: float
    is_exact: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if not self.delta >= 0.0:
            raise ValueError("delta must be nonnegative")


@dataclass(frozen=True)
class Prop1Inputs:
    """Bundle of quantities entering the weighted-l1 support guarantee."""

    omega: float
    alpha0: float
    a: float
    rip_ak: RipEstimate
    rip_a1k: RipEstimate
    s0: int
    k: int

    def __post_init__(self):
        if not 0.0 <= self.omega <= 1.0:
            raise ValueError("omega must lie in [0, 1]")
        if self.a <= 1.0:
            raise ValueError("a must exceed 1")
        if self.k < 1:
            raise ValueError("k must be a positive integer")
        if not self.k / 2 < self.s0 <= self.k:
            raise ValueError("need k/2 < s0 <= k")
        if abs(self.alpha0 - self.s0 / self.k) > 1e-12:
            raise ValueError("alpha0 must equal s0/k")

    def gamma(self) -> float:
        return gamma(self.omega, self.alpha0)

    def condition_ok(self) -> bool:
        return rip_condition_ok(self.a, self.gamma(), self.rip_a1k.delta)

    def eta(self) -> float:
        return eta(
            self.omega, self.alpha0, self.a, self.rip_ak.delta, self.rip_a1k.delta
        )


def gamma(omega: float, alpha: float) -> float:
    """gamma = omega + (1 - omega) * sqrt(2 - 2*alpha)."""
    if not 0.0 <= omega <= 1.0:
        raise ValueError("omega must lie in [0, 1]")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    return omega + (1.0 - omega) * math.sqrt(2.0 - 2.0 * alpha)


def rip_condition_ok(a: float, gamma_val: float, delta_a1k: float) -> bool:
    """Whether delta_(a+1)k < (a - gamma^2) / (a + gamma^2).

    False whenever a <= gamma^2 (the bound is then nonpositive and no
    nonnegative constant can satisfy it).
    """
    if delta_a1k < 0:
        raise ValueError("delta_a1k must be nonnegative")
    g2 = gamma_val * gamma_val
    if a <= g2:
        return False
    return delta_a1k < (a - g2) / (a + g2)


def eta(
    omega: float, alpha: float, a: float, delta_ak: float, delta_a1k: float
) -> float:
    """Error-amplification constant of the weighted-l1 guarantee:

        2 (sqrt(1 + d_ak) + sqrt(a) sqrt(1 - d_(a+1)k))
        -----------------------------------------------
        sqrt(a) sqrt(1 - d_(a+1)k) - gamma sqrt(1 + d_ak)

    Finite and positive exactly when rip_condition_ok holds for these
    arguments; raises otherwise.
    """
    if a <= 0:
        raise ValueError("a must be positive")
    if delta_ak < 0 or not 0.0 <= delta_a1k < 1.0:
        raise ValueError("need delta_ak >= 0 and 0 <= delta_a1k < 1")
    g = gamma(omega, alpha)
    upper = math.sqrt(1.0 + delta_ak)
    lower = math.sqrt(a) * math.sqrt(1.0 - delta_a1k)
    denom = lower - g * upper
    if denom <= 0.0:
        raise ValueError(
            "RIP condition violated: sqrt(a(1-delta)) must exceed gamma*sqrt(1+delta)"
        )
    return 2.0 * (upper + lower) / denom


def nsp_constant(a: float, delta_ak: float, delta_a1k: float) -> float:
    """Null-space-property constant 1 + sqrt(1+d_ak) / (sqrt(a) sqrt(1-d_(a+1)k))."""
    if a <= 0:
        raise ValueError("a must be positive")
    if delta_ak < 0 or not 0.0 <= delta_a1k < 1.0:
        raise ValueError("need delta_ak >= 0 and 0 <= delta_a1k < 1")
    return 1.0 + math.sqrt(1.0 + delta_ak) / (math.sqrt(a) * math.sqrt(1.0 - delta_a1k))


def decay_condition_max_d1(
    x, T0: IndexSet, T_tilde: IndexSet, omega: float, eta_val: float, s0: int
) -> int | None:
    """Largest d1 >= 1 such that the (s0+d1)-th largest magnitude of x still
    dominates the weighted tail

        (omega*eta + 1) * ||x off T0||_1 + (1-omega)*eta * ||x off T0 and T_tilde||_1,

    or None when not even d1 = 1 qualifies. Zero entries never qualify, so
    for an exactly sparse x the answer never reaches past the support.
    """
    x = as_signal(x, "x")
    N = x.size
    if T0.N != N or T_tilde.N != N:
        raise ValueError("index sets must match the signal length")
    if not 0.0 <= omega <= 1.0:
        raise ValueError("omega must lie in [0, 1]")
    if eta_val < 0:
        raise ValueError("eta_val must be nonnegative")
    if s0 < 1:
        raise ValueError("s0 must be a positive integer")

    absx = np.abs(x)
    off_t0 = ~T0.to_mask()
    tail1 = float(absx[off_t0].sum())
    tail2 = float(absx[off_t0 & ~T_tilde.to_mask()].sum())
    rhs = (omega * eta_val + 1.0) * tail1 + (1.0 - omega) * eta_val * tail2

    if s0 >= N:
        return None
    mags = np.sort(absx)[::-1]  # mags[j-1] is the j-th largest magnitude
    tail = mags[s0:]
    d1 = int(np.count_nonzero((tail >= rhs) & (tail > 0.0)))
    return d1 if d1 >= 1 else None


def brute_force_rip(A: SensingMatrix, k: int) -> RipEstimate:
    """Exact order-k restricted isometry constant by enumerating all
    k-column submatrices: max over S of max(lmax(A_S^T A_S) - 1,
    1 - lmin(A_S^T A_S)). Refuses instances with more than 10^6 subsets.
    """
    N = A.N
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N={N}")
    n_subsets = math.comb(N, k)
    if n_subsets > _SUBSET_GUARD:
        raise ValueError(
            f"C({N},{k}) = {n_subsets} exceeds the {_SUBSET_GUARD} subset guard"
        )
    mat = A.entries
    delta = 0.0
    for cols in itertools.combinations(range(N), k):
        sub = mat[:, cols]
        eigs = np.linalg.eigvalsh(sub.T @ sub)
        delta = max(delta, float(eigs[-1] - 1.0), float(1.0 - eigs[0]))
    return RipEstimate(k=k, delta=delta, is_exact=True)


def prop2_accuracy(s0: int, k: int, rho: float) -> float:
    """Accuracy of the intersection of two support estimates:
    (1/rho) * (s0/k), given the conditional membership rate rho.

    Requires rho >= s0/k; the result is then a probability and is clamped
    to 1 against roundoff at the boundary.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if not 0 <= s0 <= k:
        raise ValueError("need 0 <= s0 <= k")
    if not 0.0 < rho <= 1.0:
        raise ValueError("rho must lie in (0, 1]")
    base = s0 / k
    if rho < base * (1.0 - 1e-12):
        raise ValueError(f"hypothesis violated: rho={rho} < s0/k={base}")
    return min(1.0, base / rho)


@dataclass(frozen=True)
class Prop2Simulation:
    """Monte Carlo output: the estimated intersection accuracy together with
    the empirical conditional membership rate measured from the same runs."""

    accuracy: float
    rho: float
    trials: int
    discarded: int

    def __float__(self) -> float:
        return self.accuracy


def prop2_simulate(
    N: int, k: int, s0: int, s1: int, trials: int, seed=0
) -> Prop2Simulation:
    """Simulate the idealized two-estimate model and report the accuracy of
    their intersection.

    Model: the true support is T0 = {1..k}. One estimate holds the s0
    largest true coefficients {1..s0} plus k-s0 wrong indices drawn
    uniformly without replacement from {k+1..N}; the other holds {1..s1}
    plus k-s1 wrong indices drawn independently from the same pool. Per
    trial the intersection contains the s0 shared true indices plus the
    overlap of the two wrong draws, whose size follows its exact
    conditional law (hypergeometric over the wrong-index pool); the trial's
    accuracy is s0 / (s0 + overlap). Trials with an empty intersection
    (possible only when s0 = 0) are discarded but counted.
    """
    if not 1 <= k <= N:
        raise ValueError(f"need 1 <= k <= N={N}")
    if not 0 <= s0 <= s1 <= k:
        raise ValueError("need 0 <= s0 <= s1 <= k")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    pool = N - k
    if k - s0 > pool:
        raise ValueError("not enough indices outside T0 to build the estimates")

    rng = np.random.default_rng(seed)
    wrong1 = k - s0
    wrong2 = k - s1
    if wrong1 == 0 or wrong2 == 0:
        overlap = np.zeros(trials, dtype=np.int64)
    else:
        overlap = rng.hypergeometric(wrong1, pool - wrong1, wrong2, size=trials)

    inter = s0 + overlap
    rho = float(np.mean(inter / k))
    kept = inter > 0
    n_kept = int(np.count_nonzero(kept))
    if n_kept == 0:
        raise ValueError("all trials had an empty intersection")
    accuracy = float(np.mean(s0 / inter[kept]))
    return Prop2Simulation(
        accuracy=accuracy, rho=rho, trials=n_kept, discarded=trials - n_kept
    )
