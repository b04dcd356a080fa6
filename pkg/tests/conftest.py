"""Shared fixtures. The two desk-scale experiment runs are session-scoped
because they take minutes; every test that needs them shares one run."""

from __future__ import annotations

import os

import pytest

from sdrl1.bench import (
    CompressibleConfig,
    SparseGridConfig,
    run_compressible,
    run_sparse_grid,
)


def workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


@pytest.fixture(scope="session")
def fig1_records():
    """Sparse-signal recovery sweep: N=400, n=100, k/n in 0.1..0.5,
    30 trials per point, all three methods on shared instances."""
    cfg = SparseGridConfig(
        N=400,
        n_fractions=(0.25,),
        k_over_n=(0.1, 0.2, 0.3, 0.4, 0.5),
        trials=30,
        master_seed=11,
    )
    return run_sparse_grid(cfg, workers=workers())


@pytest.fixture(scope="session")
def fig2_records():
    """Compressible-signal sweep: N=400, n=40, p in {1.1, 1.5, 2},
    30 trials per point, SDRL1 vs IRL1 on shared instances."""
    cfg = CompressibleConfig(
        N=400, n_over_N=0.1, p_values=(1.1, 1.5, 2.0), trials=30, master_seed=7
    )
    return run_compressible(cfg, workers=workers())
