"""Weighted basis pursuit denoise solver.

Solves

    minimize    sum_i w_i |u_i|
    subject to  ||A u - y||_2 <= eps

by operator splitting (ADMM with over-relaxation and residual-balancing
penalty adaptation). The equality case eps = 0 alternates a weighted soft
threshold with the Euclidean projection onto {u : Au = y}; the eps > 0 case
carries an explicit residual variable projected onto the l2 ball around y.
Both per-iteration linear solves reuse Cholesky factors cached on the
SensingMatrix, so repeated solves against one matrix are cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .sensing import MeasurementSet, SensingMatrix
from .sigcore import as_signal

__all__ = [
    "SolverConfig",
    "SolverResult",
    "InfeasibleError",
    "solve",
    "prox_weighted_l1",
    "project_l2_ball",
    "project_affine",
]


class InfeasibleError(ValueError):
    """Raised when eps = 0 and y does not lie in the range of A."""


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 2000
    abs_tol: float = 1e-7
    rel_tol: float = 1e-5
    penalty: float = 1.0
    adaptive_penalty: bool = True
    relaxation: float = 1.6

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.penalty <= 0:
            raise ValueError("penalty must be positive")
        if not 0.0 < self.relaxation < 2.0:
            raise ValueError("relaxation must lie in (0, 2)")


@dataclass(frozen=True)
class SolverResult:
    solution: np.ndarray = field(repr=False)
    objective: float
    primal_residual: float
    dual_residual: float
    feasibility_gap: float
    iterations: int
    converged: bool


def prox_weighted_l1(v, w, tau: float) -> np.ndarray:
    """Entrywise soft threshold: sign(v_i) * max(|v_i| - tau * w_i, 0)."""
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if v.shape != w.shape:
        raise ValueError(f"shape mismatch: {v.shape} vs {w.shape}")
    return np.sign(v) * np.maximum(np.abs(v) - tau * w, 0.0)


def project_l2_ball(v, center, radius: float) -> np.ndarray:
    """Euclidean projection of v onto the ball ||. - center||_2 <= radius."""
    v = np.asarray(v, dtype=np.float64)
    center = np.asarray(center, dtype=np.float64)
    if v.shape != center.shape:
        raise ValueError(f"shape mismatch: {v.shape} vs {center.shape}")
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    diff = v - center
    norm = np.linalg.norm(diff)
    if norm <= radius:
        return v.copy()
    if radius == 0.0:
        return center.copy()
    return center + diff * (radius / norm)


def project_affine(u, A: SensingMatrix, y) -> np.ndarray:
    """Euclidean projection onto {u : Au = y}: u - A^T (A A^T)^-1 (Au - y)."""
    u = np.asarray(u, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return u - A.entries.T @ A.solve_gram(A.entries @ u - y)


def _validate_weights(w, N: int) -> np.ndarray:
    w = np.ascontiguousarray(w, dtype=np.float64)
    if w.shape != (N,):
        raise ValueError(f"weights shape {w.shape} != ({N},)")
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("weights must be finite and nonnegative")
    return w


def solve(
    A: SensingMatrix,
    m: MeasurementSet,
    w,
    cfg: SolverConfig = SolverConfig(),
) -> SolverResult:
    """Solve weighted BPDN for the measurements `m` with weights `w`.

    With all weights equal to one this is plain basis pursuit denoise.
    Returns converged=False (never a silent wrong answer) when the residual
    criteria are not met within cfg.max_iters. Zero weights are legal; the
    objective is then a seminorm and any optimum may be returned.
    """
    y = m.y
    if y.size != A.n:
        raise ValueError(f"y length {y.size} != matrix rows {A.n}")
    w = _validate_weights(w, A.N)
    # The argmin is invariant to a positive rescaling of w; normalizing keeps
    # the prox threshold O(1) across the weight scales reweighting produces.
    wmax = float(w.max()) if w.size else 0.0
    w_eff = w / wmax if wmax > 0 else w
    if m.epsilon == 0.0:
        u, iters, pri, dua, ok = _admm_equality(A, y, w_eff, cfg)
    else:
        u, iters, pri, dua, ok = _admm_ball(A, y, m.epsilon, w_eff, cfg)
    gap = max(0.0, float(np.linalg.norm(A.entries @ u - y)) - m.epsilon)
    return SolverResult(
        solution=u,
        objective=float(np.dot(w, np.abs(u))),
        primal_residual=pri,
        dual_residual=dua,
        feasibility_gap=gap,
        iterations=iters,
        converged=ok,
    )


def _adapt_penalty(rho, pri, dua, duals, count):
    if pri > 10.0 * dua:
        rho *= 2.0
        for d in duals:
            d *= 0.5
        count += 1
    elif dua > 10.0 * pri:
        rho *= 0.5
        for d in duals:
            d *= 2.0
        count += 1
    return rho, count


def _admm_equality(A, y, w, cfg):
    """min ||v||_{1,w} s.t. Au = y, u = v."""
    mat = A.entries
    n, N = mat.shape
    try:
        A.gram_cholesky()
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            f"A A^T is rank deficient ({n} x {N}); cannot project onto Au = y"
        ) from exc

    u0 = project_affine(np.zeros(N), A, y)
    ynorm = np.linalg.norm(y)
    if np.linalg.norm(mat @ u0 - y) > 1e-8 * (1.0 + ynorm):
        raise InfeasibleError("y is not in the range of A (eps = 0)")

    rho = cfg.penalty
    alpha = cfg.relaxation
    v = np.zeros(N)
    d = np.zeros(N)
    adaptations = 0
    sqrtN = np.sqrt(N)
    pri = dua = np.inf
    u = u0

    for it in range(1, cfg.max_iters + 1):
        u = project_affine(v - d, A, y)
        u_rel = alpha * u + (1.0 - alpha) * v
        v_old = v
        v = prox_weighted_l1(u_rel + d, w, 1.0 / rho)
        d = d + u_rel - v

        pri = float(np.linalg.norm(u - v))
        dua = float(rho * np.linalg.norm(v - v_old))
        eps_pri = sqrtN * cfg.abs_tol + cfg.rel_tol * max(
            np.linalg.norm(u), np.linalg.norm(v)
        )
        eps_dua = sqrtN * cfg.abs_tol + cfg.rel_tol * rho * np.linalg.norm(d)
        if pri <= eps_pri and dua <= eps_dua:
            return u, it, pri, dua, True
        if cfg.adaptive_penalty and adaptations < 100:
            rho, adaptations = _adapt_penalty(rho, pri, dua, (d,), adaptations)

    return u, cfg.max_iters, pri, dua, False


def _admm_ball(A, y, eps, w, cfg):
    """min ||v||_{1,w} s.t. u = v, Au = z, z in Ball(y, eps)."""
    mat = A.entries
    n, N = mat.shape
    A.ridge_cholesky()  # (I + A A^T) is always positive definite

    rho = cfg.penalty
    alpha = cfg.relaxation
    u = np.zeros(N)
    v = np.zeros(N)
    z = project_l2_ball(np.zeros(n), y, eps)
    d1 = np.zeros(N)
    d2 = np.zeros(n)
    adaptations = 0
    sqrt_pri = np.sqrt(N + n)
    sqrtN = np.sqrt(N)
    ynorm = np.linalg.norm(y)
    pri = dua = np.inf

    for it in range(1, cfg.max_iters + 1):
        b = (v - d1) + mat.T @ (z - d2)
        u = b - mat.T @ A.solve_ridge(mat @ b)  # (I + A^T A)^-1 b, Woodbury
        Au = mat @ u

        u_rel = alpha * u + (1.0 - alpha) * v
        Au_rel = alpha * Au + (1.0 - alpha) * z
        v_old = v
        z_old = z
        v = prox_weighted_l1(u_rel + d1, w, 1.0 / rho)
        z = project_l2_ball(Au_rel + d2, y, eps)
        d1 = d1 + u_rel - v
        d2 = d2 + Au_rel - z

        pri = float(np.hypot(np.linalg.norm(u - v), np.linalg.norm(Au - z)))
        dua = float(rho * np.linalg.norm((v - v_old) + mat.T @ (z - z_old)))
        eps_pri = sqrt_pri * cfg.abs_tol + cfg.rel_tol * max(
            np.hypot(np.linalg.norm(u), np.linalg.norm(Au)),
            np.hypot(np.linalg.norm(v), np.linalg.norm(z)),
        )
        eps_dua = sqrtN * cfg.abs_tol + cfg.rel_tol * rho * np.linalg.norm(
            d1 + mat.T @ d2
        )
        feas = np.linalg.norm(Au - y) - eps <= cfg.abs_tol * (1.0 + ynorm)
        if pri <= eps_pri and dua <= eps_dua and feas:
            return u, it, pri, dua, True
        if cfg.adaptive_penalty and adaptations < 100:
            rho, adaptations = _adapt_penalty(
                rho, pri, dua, (d1, d2), adaptations
            )

    return u, cfg.max_iters, pri, dua, False
