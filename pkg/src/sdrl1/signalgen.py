"""Deterministic test-signal generators.

Two families: exactly k-sparse vectors (uniform random support, standard
normal amplitudes) and power-law compressible vectors with magnitudes
c * i^(-p) and random signs. Everything is a pure function of the spec,
including its seed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = ["SignalKind", "SignalSpec", "gen_compressible", "gen_sparse"]


class SignalKind(enum.Enum):
    SPARSE = "sparse"
    COMPRESSIBLE = "compressible"


@dataclass(frozen=True)
class SignalSpec:
    kind: SignalKind
    N: int
    k: int | None = None
    p: float | None = None
    c: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be a positive integer")
        if self.kind is SignalKind.SPARSE:
            if self.k is None or not 1 <= self.k <= self.N:
                raise ValueError("sparse spec needs 1 <= k <= N")
        elif self.kind is SignalKind.COMPRESSIBLE:
            if self.p is None or self.p <= 1.0:
                raise ValueError("compressible spec needs decay exponent p > 1")
        if self.c <= 0:
            raise ValueError("c must be positive")
        if self.seed < 0:
            raise ValueError("seed must be an unsigned integer")


def gen_sparse(spec: SignalSpec) -> np.ndarray:
    """Exactly k-sparse signal: support uniform without replacement,
    amplitudes standard normal (zero draws redrawn, so ||x||_0 = k)."""
    if spec.kind is not SignalKind.SPARSE:
        raise ValueError("spec.kind must be SPARSE")
    rng = np.random.default_rng(spec.seed)
    positions = rng.choice(spec.N, size=spec.k, replace=False)
    amps = rng.standard_normal(spec.k)
    while np.any(amps == 0.0):
        zero = amps == 0.0
        amps[zero] = rng.standard_normal(int(zero.sum()))
    x = np.zeros(spec.N)
    x[positions] = amps
    return x


def gen_compressible(spec: SignalSpec) -> np.ndarray:
    """Power-law signal: |x_i| = c * i^(-p) at index i (1-based, no
    permutation), each entry given an independent random sign."""
    if spec.kind is not SignalKind.COMPRESSIBLE:
        raise ValueError("spec.kind must be COMPRESSIBLE")
    rng = np.random.default_rng(spec.seed)
    i = np.arange(1, spec.N + 1, dtype=np.float64)
    mags = spec.c * i ** (-spec.p)
    signs = np.where(rng.random(spec.N) < 0.5, -1.0, 1.0)
    return mags * signs
