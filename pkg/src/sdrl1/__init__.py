"""Sparse recovery via weighted l1 minimization.

Solves basis pursuit denoise with per-coordinate weights, drives it with
plain l1, iteratively reweighted l1 (IRL1), and support-driven reweighted
l1 (SDRL1) outer loops, provides computable checkers for the support
recovery conditions that motivate SDRL1, and ships a deterministic Monte
Carlo harness for recovery experiments.
"""

from .sigcore import (
    IndexSet,
    best_k_term,
    energy_support_size,
    support_accuracy,
    top_support,
)
from .sensing import (
    MeasurementSet,
    SensingMatrix,
    gen_gaussian,
    load_matrix,
    load_vector,
    measure,
    save_matrix,
    save_vector,
)
from .wbpdn import (
    InfeasibleError,
    SolverConfig,
    SolverResult,
    project_affine,
    project_l2_ball,
    prox_weighted_l1,
    solve,
)
from .reweight import (
    Method,
    OuterConfig,
    OuterIteration,
    RecoveryResult,
    compute_k_hat,
    omega_update,
    run_irl1,
    run_l1,
    run_sdrl1,
    sdrl1_support_update,
    sdrl1_weights,
)
from .theory import (
    Prop1Inputs,
    Prop2Simulation,
    RipEstimate,
    brute_force_rip,
    decay_condition_max_d1,
    eta,
    gamma,
    nsp_constant,
    prop2_accuracy,
    prop2_simulate,
    rip_condition_ok,
)
from .signalgen import SignalKind, SignalSpec, gen_compressible, gen_sparse
from .bench import (
    CompressibleConfig,
    SparseGridConfig,
    TrialRecord,
    exact_recovery,
    mse,
    run_compressible,
    run_sparse_grid,
)

__version__ = "0.1.0"

__all__ = [
    "IndexSet",
    "top_support",
    "energy_support_size",
    "best_k_term",
    "support_accuracy",
    "SensingMatrix",
    "MeasurementSet",
    "gen_gaussian",
    "measure",
    "save_matrix",
    "load_matrix",
    "save_vector",
    "load_vector",
    "SolverConfig",
    "SolverResult",
    "InfeasibleError",
    "solve",
    "prox_weighted_l1",
    "project_l2_ball",
    "project_affine",
    "Method",
    "OuterConfig",
    "OuterIteration",
    "RecoveryResult",
    "run_l1",
    "run_irl1",
    "run_sdrl1",
    "compute_k_hat",
    "sdrl1_weights",
    "sdrl1_support_update",
    "omega_update",
    "RipEstimate",
    "Prop1Inputs",
    "Prop2Simulation",
    "gamma",
    "rip_condition_ok",
    "eta",
    "nsp_constant",
    "decay_condition_max_d1",
    "brute_force_rip",
    "prop2_accuracy",
    "prop2_simulate",
    "SignalKind",
    "SignalSpec",
    "gen_sparse",
    "gen_compressible",
    "SparseGridConfig",
    "CompressibleConfig",
    "TrialRecord",
    "exact_recovery",
    "mse",
    "run_sparse_grid",
    "run_compressible",
    "__version__",
]
