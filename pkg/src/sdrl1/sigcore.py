"""Core index-set type and support-selection primitives.

Signals are plain 1-D float arrays. Index sets are immutable and 1-based
(entry i of a signal of length N is addressed as i in [1, N]); helpers
convert to 0-based masks/positions at the numpy boundary.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

__all__ = [
    "IndexSet",
    "as_signal",
    "top_support",
    "energy_support_size",
    "best_k_term",
    "support_accuracy",
]


def as_signal(v, name: str = "signal") -> np.ndarray:
    """Validate and return `v` as a 1-D float64 array with finite entries."""
    arr = np.ascontiguousarray(v, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be nonempty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


@dataclass(frozen=True)
class IndexSet:
    """Ordered set of 1-based coordinate indices within an ambient dimension N.

    Used for supports and support estimates. Strictly increasing, no
    duplicates, every member in [1, N].
    """

    indices: tuple[int, ...]
    N: int

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("ambient dimension must be nonnegative")
        prev = 0
        for i in self.indices:
            if not isinstance(i, (int, np.integer)):
                raise ValueError(f"index {i!r} is not an integer")
            if i <= prev:
                raise ValueError("indices must be strictly increasing and >= 1")
            prev = int(i)
        if self.indices and self.indices[-1] > self.N:
            raise ValueError(
                f"index {self.indices[-1]} exceeds ambient dimension {self.N}"
            )

    @classmethod
    def from_iterable(cls, it: Iterable[int], N: int) -> "IndexSet":
        return cls(tuple(sorted({int(i) for i in it})), N)

    @classmethod
    def empty(cls, N: int) -> "IndexSet":
        return cls((), N)

    @classmethod
    def from_mask(cls, mask: np.ndarray) -> "IndexSet":
        """Build from a 0-based boolean mask of length N."""
        mask = np.asarray(mask, dtype=bool)
        return cls(tuple(int(i) + 1 for i in np.flatnonzero(mask)), mask.size)

    def to_mask(self) -> np.ndarray:
        """0-based boolean mask of length N."""
        mask = np.zeros(self.N, dtype=bool)
        if self.indices:
            mask[np.asarray(self.indices) - 1] = True
        return mask

    def positions(self) -> np.ndarray:
        """0-based integer positions, ascending."""
        return np.asarray(self.indices, dtype=np.intp) - 1

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return int(i) in set(self.indices)

    def _check_compatible(self, other: "IndexSet"):
        if self.N != other.N:
            raise ValueError(
                f"ambient dimensions differ: {self.N} vs {other.N}"
            )

    def intersection(self, other: "IndexSet") -> "IndexSet":
        self._check_compatible(other)
        return IndexSet.from_iterable(
            set(self.indices) & set(other.indices), self.N
        )

    def union(self, other: "IndexSet") -> "IndexSet":
        self._check_compatible(other)
        return IndexSet.from_iterable(
            set(self.indices) | set(other.indices), self.N
        )

    def issubset(self, other: "IndexSet") -> bool:
        self._check_compatible(other)
        return set(self.indices) <= set(other.indices)

    __and__ = intersection
    __or__ = union


def _magnitude_order(v: np.ndarray) -> np.ndarray:
    # Descending by magnitude, ties by smaller index first (deterministic).
    return np.lexsort((np.arange(v.size), -np.abs(v)))


def top_support(v, s: int) -> IndexSet:
    """Indices (1-based) of the s largest-magnitude entries of `v`.

    Ties break toward the smaller index; when s exceeds the number of
    nonzeros, smallest-index zero entries fill the remaining slots so the
    result always has exactly s members.
    """
    v = as_signal(v)
    s = int(s)
    if s < 0 or s > v.size:
        raise ValueError(f"s={s} outside [0, {v.size}]")
    order = _magnitude_order(v)
    return IndexSet(tuple(int(i) + 1 for i in np.sort(order[:s])), v.size)


def energy_support_size(v, p_hat: float) -> int:
    """Smallest l such that the l largest-magnitude entries carry a
    p_hat fraction of the signal's l2 energy.

    Compares cumulative sums of squares against p_hat**2 * ||v||_2**2,
    which is equivalent to the norm inequality without repeated roots.
    Returns 0 (with a warning) for an all-zero signal.
    """
    v = as_signal(v)
    p_hat = float(p_hat)
    if not 0.0 < p_hat <= 1.0:
        raise ValueError(f"p_hat={p_hat} outside (0, 1]")
    sq = np.sort(np.abs(v))[::-1] ** 2
    total = sq.sum()
    if total == 0.0:
        warnings.warn("energy_support_size of an all-zero signal", RuntimeWarning)
        return 0
    cum = np.cumsum(sq)
    return int(np.searchsorted(cum, p_hat * p_hat * total, side="left")) + 1


def best_k_term(v, k: int) -> np.ndarray:
    """Copy of `v` with all but the k largest-magnitude entries zeroed."""
    v = as_signal(v)
    keep = top_support(v, k)
    out = np.zeros_like(v)
    pos = keep.positions()
    out[pos] = v[pos]
    return out


def support_accuracy(est: IndexSet, truth: IndexSet) -> float:
    """Fraction of `est` that lies inside `truth`: |est & truth| / |est|."""
    if len(est) == 0:
        raise ValueError("accuracy undefined for an empty estimate")
    return len(est.intersection(truth)) / len(est)
