"""Gaussian measurement matrices and (optionally noisy) measurements y = Ax + e.

Randomness goes through numpy's PCG64 generator seeded by SeedSequence, whose
entropy-mixing algorithm is fixed and platform independent; derived streams
for parallel trials therefore never depend on execution order.
"""

from __future__ import annotations

import struct
import threading
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .sigcore import as_signal

__all__ = [
    "SensingMatrix",
    "MeasurementSet",
    "gen_gaussian",
    "measure",
    "save_matrix",
    "load_matrix",
    "save_vector",
    "load_vector",
]

_MAGIC = b"SDRL1BIN"
_HEADER = struct.Struct("<8sII")  # magic, rows, cols; 16 bytes total


class SensingMatrix:
    """Dense n x N measurement matrix with cached Gram-side factorizations.

    The Cholesky factors of A A^T and of (I + A A^T) are computed lazily on
    first use and shared; the cache is lock-guarded so concurrent solves on
    the same matrix see a consistent value.
    """

    def __init__(self, entries):
        entries = np.ascontiguousarray(entries, dtype=np.float64)
        if entries.ndim != 2:
            raise ValueError(f"matrix must be 2-D, got shape {entries.shape}")
        if entries.size == 0:
            raise ValueError("matrix must be nonempty")
        if not np.all(np.isfinite(entries)):
            raise ValueError("matrix contains non-finite entries")
        if entries.shape[0] > entries.shape[1]:
            warnings.warn(
                f"n={entries.shape[0]} > N={entries.shape[1]}: matrix is not "
                "underdetermined",
                RuntimeWarning,
            )
        self.entries = entries
        self._lock = threading.Lock()
        self._gram_cho = None
        self._ridge_cho = None

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @property
    def N(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def gram_cholesky(self):
        """Cholesky factor of A A^T, for projections onto {u : Au = y}.

        Raises numpy/scipy LinAlgError when A A^T is not positive definite
        (rank-deficient rows).
        """
        with self._lock:
            if self._gram_cho is None:
                gram = self.entries @ self.entries.T
                self._gram_cho = cho_factor(gram, lower=True)
            return self._gram_cho

    def ridge_cholesky(self):
        """Cholesky factor of (I + A A^T), for (I + A^T A)^-1 via Woodbury."""
        with self._lock:
            if self._ridge_cho is None:
                gram = self.entries @ self.entries.T
                gram[np.diag_indices_from(gram)] += 1.0
                self._ridge_cho = cho_factor(gram, lower=True)
            return self._ridge_cho

    def solve_gram(self, b: np.ndarray) -> np.ndarray:
        """(A A^T)^-1 b."""
        return cho_solve(self.gram_cholesky(), b)

    def solve_ridge(self, b: np.ndarray) -> np.ndarray:
        """(I + A A^T)^-1 b."""
        return cho_solve(self.ridge_cholesky(), b)

    def save(self, path):
        save_matrix(path, self.entries)

    @classmethod
    def load(cls, path) -> "SensingMatrix":
        return cls(load_matrix(path))


@dataclass(frozen=True)
class MeasurementSet:
    """Measurement vector y together with the noise bound epsilon."""

    y: np.ndarray = field(repr=False)
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "y", as_signal(self.y, "y"))
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")

    @property
    def n(self) -> int:
        return self.y.size


def gen_gaussian(n: int, N: int, seed) -> SensingMatrix:
    """i.i.d. N(0, 1/n) matrix of shape n x N, deterministic per seed.

    The 1/n entry variance gives columns unit expected squared norm.
    """
    n, N = int(n), int(N)
    if n < 1 or N < 1:
        raise ValueError(f"dimensions must be positive, got n={n}, N={N}")
    rng = np.random.default_rng(seed)
    return SensingMatrix(rng.standard_normal((n, N)) / np.sqrt(n))


def measure(A: SensingMatrix, x, noise_norm: float = 0.0, seed=0) -> MeasurementSet:
    """Take measurements y = Ax + e with ||e||_2 = noise_norm exactly.

    The noise direction is uniform on the sphere (a normalized Gaussian
    draw), so the constraint ||e||_2 <= epsilon is tight by construction.
    """
    x = as_signal(x, "x")
    if x.size != A.N:
        raise ValueError(f"signal length {x.size} != matrix columns {A.N}")
    noise_norm = float(noise_norm)
    if noise_norm < 0:
        raise ValueError("noise_norm must be nonnegative")
    y = A.entries @ x
    if noise_norm > 0:
        rng = np.random.default_rng(seed)
        g = rng.standard_normal(A.n)
        norm = np.linalg.norm(g)
        while norm == 0.0:  # probability zero, but keep the contract exact
            g = rng.standard_normal(A.n)
            norm = np.linalg.norm(g)
        y = y + g * (noise_norm / norm)
    return MeasurementSet(y=y, epsilon=noise_norm)


def save_matrix(path, arr) -> None:
    """Write a 2-D array as little-endian float64, row-major, after a
    16-byte header (8-byte magic, uint32 rows, uint32 cols)."""
    arr = np.ascontiguousarray(arr, dtype="<f8")
    if arr.ndim != 2:
        raise ValueError("save_matrix expects a 2-D array")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, arr.shape[0], arr.shape[1]))
        fh.write(arr.tobytes(order="C"))


def load_matrix(path) -> np.ndarray:
    with open(path, "rb") as fh:
        header = fh.read(_HEADER.size)
        if len(header) != _HEADER.size:
            raise ValueError(f"{path}: truncated header")
        magic, rows, cols = _HEADER.unpack(header)
        if magic != _MAGIC:
            raise ValueError(f"{path}: bad magic {magic!r}")
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != rows * cols:
        raise ValueError(
            f"{path}: expected {rows * cols} values, found {data.size}"
        )
    return data.reshape(rows, cols).astype(np.float64)


def save_vector(path, v) -> None:
    """Vectors share the matrix container, stored as a single column."""
    v = as_signal(v, "vector")
    save_matrix(path, v[:, None])


def load_vector(path) -> np.ndarray:
    arr = load_matrix(path)
    if min(arr.shape) != 1:
        raise ValueError(f"{path}: shape {arr.shape} is not a vector")
    return arr.ravel()
