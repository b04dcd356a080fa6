"""Recovery drivers: plain l1, magnitude-reweighted l1, support-driven l1.

All three are outer loops around the weighted BPDN solver. They differ only
in how the weight vector for each inner solve is produced:

* L1     -- unit weights, one solve.
* IRL1   -- w_i = 1 / (|x_i| + a), magnitudes from the previous iterate.
* SDRL1  -- three constant levels {1, omega1, omega2} keyed to two support
            estimates: T1 (top coefficients of the latest iterate) and
            Omega (the part of T1 confirmed by the preceding iterate).
            Indices seen twice in a row are trusted more.

Each driver records a full per-iteration trace so that support evolution and
inner-solver behaviour can be inspected after the fact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .sensing import MeasurementSet, SensingMatrix
from .sigcore import IndexSet, as_signal, energy_support_size, top_support
from .wbpdn import SolverConfig, solve

__all__ = [
    "Method",
    "OuterConfig",
    "OuterIteration",
    "RecoveryResult",
    "compute_k_hat",
    "omega_update",
    "run_irl1",
    "run_l1",
    "run_sdrl1",
    "sdrl1_support_update",
    "sdrl1_weights",
]


class Method(enum.Enum):
    L1 = "l1"
    IRL1 = "irl1"
    SDRL1 = "sdrl1"


@dataclass(frozen=True)
class OuterConfig:
    """Outer-loop settings shared by the reweighted drivers.

    tol is the relative-change stopping threshold on successive iterates.
    irl1 weights use a_t = max(irl1_a_scale * max|x|, irl1_a_floor), which
    keeps the stabilizer proportionate to the iterate's scale while bounding
    it away from zero. omega1 weights the fresh support estimate, omega2 the
    doubly-confirmed part of it. k_hat_override pins the support-size cap
    instead of deriving it from the problem shape.
    """

    tol: float = 1e-4
    max_outer: int = 8
    irl1_a_floor: float = 1e-6
    # 0.1 keeps the stabilizer near the smallest significant coefficients;
    # much smaller values lock in the first iterate's mistakes and measurably
    # collapse recovery near the phase transition
    irl1_a_scale: float = 0.1
    p_hat: float = 0.99
    omega1: float = 0.5
    omega2: float = 0.0
    k_hat_override: int | None = None
    solver: SolverConfig = field(default_factory=SolverConfig)

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.max_outer < 1:
            raise ValueError("max_outer must be >= 1")
        if self.irl1_a_floor <= 0:
            raise ValueError("irl1_a_floor must be positive")
        if not 0.0 < self.p_hat <= 1.0:
            raise ValueError("p_hat must lie in (0, 1]")
        for name in ("omega1", "omega2"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.k_hat_override is not None and self.k_hat_override < 1:
            raise ValueError("k_hat_override must be a positive integer")


@dataclass(frozen=True)
class OuterIteration:
    """One outer iteration: the iterate, the weights that produced it, and
    the support state derived from it."""

    t: int
    solution: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    solution_norm: float
    s_t: int
    T1: IndexSet
    Omega: IndexSet
    rel_change: float
    solver_iterations: int
    solver_converged: bool


@dataclass(frozen=True)
class RecoveryResult:
    solution: np.ndarray = field(repr=False)
    method: Method
    outer_iterations: int
    trace: tuple[OuterIteration, ...]
    converged: bool

    def __post_init__(self):
        if len(self.trace) != self.outer_iterations:
            raise ValueError("trace length must equal outer_iterations")


def compute_k_hat(n: int, N: int) -> int:
    """Support-size cap round(n * ln(N/n) / 2), at least 1."""
    if not 1 <= n < N:
        raise ValueError(f"need 1 <= n < N, got n={n}, N={N}")
    x = 0.5 * n * math.log(N / n)
    return max(1, int(math.floor(x + 0.5)))


def sdrl1_weights(
    T1: IndexSet, Omega: IndexSet, omega1: float, omega2: float, N: int
) -> np.ndarray:
    """Three-level weight vector: 1 off T1, omega1 on T1 \\ Omega, omega2 on
    Omega. Requires Omega to be contained in T1."""
    if T1.N != N or Omega.N != N:
        raise ValueError("index sets must live in {1..N}")
    for name, val in (("omega1", omega1), ("omega2", omega2)):
        if not 0.0 <= val <= 1.0:
            raise ValueError(f"{name} must lie in [0, 1]")
    if not Omega.issubset(T1):
        raise ValueError("invariant violation: Omega must be a subset of T1")
    w = np.ones(N)
    w[T1.positions()] = omega1
    w[Omega.positions()] = omega2
    return w


def sdrl1_support_update(x_t, p_hat: float, k_hat: int) -> tuple[int, IndexSet]:
    """(s_t, T1) from an iterate: s_t = min(l, k_hat) where l is the number
    of largest entries holding the p_hat fraction of the l2 norm, and T1 is
    the top-s_t support. An all-zero iterate yields (0, empty set)."""
    x_t = as_signal(x_t, "x_t")
    if k_hat < 1:
        raise ValueError("k_hat must be a positive integer")
    if not np.any(x_t):
        return 0, IndexSet.empty(x_t.size)
    l = energy_support_size(x_t, p_hat)
    s_t = min(l, k_hat)
    return s_t, top_support(x_t, s_t)


def omega_update(x_prev, s_prev: int, T1: IndexSet) -> IndexSet:
    """Intersection of the previous iterate's top-s_prev support with T1."""
    if s_prev < 0:
        raise ValueError("s_prev must be nonnegative")
    return top_support(x_prev, s_prev).intersection(T1)


def _rel_change(x_t, x_prev) -> float:
    denom = float(np.linalg.norm(x_prev))
    diff = float(np.linalg.norm(x_t - x_prev))
    if denom == 0.0:
        return 0.0 if diff == 0.0 else math.inf
    return diff / denom


def _record(t, x_t, w, s_t, T1, Omega, rel, res) -> OuterIteration:
    return OuterIteration(
        t=t,
        solution=x_t,
        weights=w,
        solution_norm=float(np.linalg.norm(x_t)),
        s_t=s_t,
        T1=T1,
        Omega=Omega,
        rel_change=rel,
        solver_iterations=res.iterations,
        solver_converged=res.converged,
    )


def run_l1(
    A: SensingMatrix, m: MeasurementSet, cfg: OuterConfig = OuterConfig()
) -> RecoveryResult:
    """Plain l1 minimization: one weighted-BPDN solve with unit weights."""
    w = np.ones(A.N)
    res = solve(A, m, w, cfg.solver)
    x = res.solution
    empty = IndexSet.empty(A.N)
    rec = _record(1, x, w, 0, empty, empty, _rel_change(x, np.zeros(A.N)), res)
    return RecoveryResult(
        solution=x,
        method=Method.L1,
        outer_iterations=1,
        trace=(rec,),
        converged=res.converged,
    )


def run_irl1(
    A: SensingMatrix, m: MeasurementSet, cfg: OuterConfig = OuterConfig()
) -> RecoveryResult:
    """Magnitude-driven reweighting: after each solve set
    w_i = 1 / (|x_i| + a_t). Runs at least two solves so the reweighted
    problem is visited even when the first iterate is already good.
    """
    N = A.N
    x_prev = np.zeros(N)
    w = np.ones(N)
    trace: list[OuterIteration] = []
    empty = IndexSet.empty(N)
    converged = False

    for t in range(1, cfg.max_outer + 1):
        res = solve(A, m, w, cfg.solver)
        x_t = res.solution
        rel = _rel_change(x_t, x_prev)
        trace.append(_record(t, x_t, w, 0, empty, empty, rel, res))
        if t >= 2 and rel <= cfg.tol:
            converged = True
            break
        a_t = max(cfg.irl1_a_scale * float(np.max(np.abs(x_t))), cfg.irl1_a_floor)
        w = 1.0 / (np.abs(x_t) + a_t)
        x_prev = x_t

    return RecoveryResult(
        solution=trace[-1].solution,
        method=Method.IRL1,
        outer_iterations=len(trace),
        trace=tuple(trace),
        converged=converged,
    )


def run_sdrl1(
    A: SensingMatrix, m: MeasurementSet, cfg: OuterConfig = OuterConfig()
) -> RecoveryResult:
    """Support-driven reweighting.

    Iteration 1 solves with unit weights (plain l1). After each solve the
    support state advances: T1 becomes the top-s_t support of the new
    iterate, and Omega the part of the new T1 already present in the old
    one, so Omega is always a subset of T1 and holds the indices detected
    in two consecutive iterates. The next solve weights those classes with
    omega2 (Omega), omega1 (rest of T1), and 1 (everything else).
    """
    N = A.N
    k_hat = (
        cfg.k_hat_override
        if cfg.k_hat_override is not None
        else compute_k_hat(A.n, N)
    )
    x_prev = np.zeros(N)
    s_prev = 0
    T1 = IndexSet.empty(N)
    Omega = IndexSet.empty(N)
    trace: list[OuterIteration] = []
    converged = False

    for t in range(1, cfg.max_outer + 1):
        w = sdrl1_weights(T1, Omega, cfg.omega1, cfg.omega2, N)
        res = solve(A, m, w, cfg.solver)
        x_t = res.solution
        rel = _rel_change(x_t, x_prev)
        s_t, T1_new = sdrl1_support_update(x_t, cfg.p_hat, k_hat)
        Omega = omega_update(x_t, s_t, T1)  # new top support vs old estimate
        T1 = T1_new
        trace.append(_record(t, x_t, w, s_t, T1, Omega, rel, res))
        if t >= 2 and rel <= cfg.tol:
            converged = True
            break
        x_prev, s_prev = x_t, s_t

    return RecoveryResult(
        solution=trace[-1].solution,
        method=Method.SDRL1,
        outer_iterations=len(trace),
        trace=tuple(trace),
        converged=converged,
    )
