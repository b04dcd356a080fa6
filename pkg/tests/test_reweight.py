"""Outer-loop recovery drivers: support-size cap, weight construction,
support updates, and the three drivers' contracts."""

import numpy as np
import pytest

from sdrl1.reweight import (
    Method,
    OuterConfig,
    RecoveryResult,
    compute_k_hat,
    omega_update,
    run_irl1,
    run_l1,
    run_sdrl1,
    sdrl1_support_update,
    sdrl1_weights,
)
from sdrl1.sensing import MeasurementSet, SensingMatrix, gen_gaussian, measure
from sdrl1.sigcore import IndexSet
from sdrl1.signalgen import SignalKind, SignalSpec, gen_sparse


def _sparse_instance(n, N, k, mat_seed, sig_seed):
    A = gen_gaussian(n, N, seed=mat_seed)
    x = gen_sparse(SignalSpec(kind=SignalKind.SPARSE, N=N, k=k, seed=sig_seed))
    return A, x, MeasurementSet(A.entries @ x, 0.0)


def _rel_err(x_hat, x):
    return np.linalg.norm(x_hat - x) / np.linalg.norm(x)


class TestComputeKHat:
    def test_reference_values(self):
        assert compute_k_hat(200, 2000) == 230
        assert compute_k_hat(1000, 2000) == 347
        assert compute_k_hat(100, 400) == 69
        assert compute_k_hat(40, 400) == 46

    def test_floor_is_one(self):
        assert compute_k_hat(1, 2) == 1

    def test_invalid_dims(self):
        with pytest.raises(ValueError):
            compute_k_hat(10, 10)
        with pytest.raises(ValueError):
            compute_k_hat(0, 10)


class TestSdrl1Weights:
    def test_three_levels(self):
        w = sdrl1_weights(
            IndexSet.from_iterable([1, 2], 4),
            IndexSet.from_iterable([2], 4),
            0.5,
            0.0,
            4,
        )
        np.testing.assert_array_equal(w, [0.5, 0.0, 1.0, 1.0])

    def test_empty_sets_give_unit_weights(self):
        w = sdrl1_weights(IndexSet.empty(5), IndexSet.empty(5), 0.5, 0.0, 5)
        np.testing.assert_array_equal(w, np.ones(5))

    def test_full_t1_empty_omega(self):
        w = sdrl1_weights(
            IndexSet.from_iterable(range(1, 4), 3), IndexSet.empty(3), 0.7, 0.0, 3
        )
        np.testing.assert_array_equal(w, [0.7, 0.7, 0.7])

    def test_omega_outside_t1_rejected(self):
        with pytest.raises(ValueError, match="subset"):
            sdrl1_weights(
                IndexSet.from_iterable([1], 4),
                IndexSet.from_iterable([2], 4),
                0.5,
                0.0,
                4,
            )

    def test_mismatched_universe_rejected(self):
        with pytest.raises(ValueError):
            sdrl1_weights(IndexSet.empty(4), IndexSet.empty(5), 0.5, 0.0, 4)

    def test_omega_range_checked(self):
        with pytest.raises(ValueError):
            sdrl1_weights(IndexSet.empty(3), IndexSet.empty(3), 1.5, 0.0, 3)


class TestSdrl1SupportUpdate:
    def test_dominant_entry(self):
        x = np.zeros(50)
        x[0], x[1] = 10.0, 1.0
        s, T1 = sdrl1_support_update(x, 0.99, 230)
        assert s == 1
        assert T1.positions().tolist() == [0]

    def test_k_hat_caps_size(self):
        s, T1 = sdrl1_support_update(np.ones(10), 0.999, 3)
        assert s == 3
        assert len(T1) == 3

    def test_all_zero_iterate(self):
        s, T1 = sdrl1_support_update(np.zeros(6), 0.99, 4)
        assert s == 0
        assert len(T1) == 0

    def test_invalid_k_hat(self):
        with pytest.raises(ValueError):
            sdrl1_support_update(np.ones(4), 0.99, 0)


class TestOmegaUpdate:
    def test_intersection(self):
        x_prev = np.array([5.0, 0.0, 4.0, 1.0])
        T1 = IndexSet.from_iterable([3, 4], 4)
        out = omega_update(x_prev, 2, T1)  # top-2 of x_prev is {1, 3}
        assert out.positions().tolist() == [2]

    def test_zero_s_prev(self):
        out = omega_update(np.ones(4), 0, IndexSet.from_iterable([1], 4))
        assert len(out) == 0

    def test_negative_s_prev(self):
        with pytest.raises(ValueError):
            omega_update(np.ones(4), -1, IndexSet.empty(4))


class TestOuterConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"tol": 0.0},
            {"max_outer": 0},
            {"irl1_a_floor": 0.0},
            {"p_hat": 0.0},
            {"p_hat": 1.5},
            {"omega1": -0.1},
            {"omega2": 2.0},
            {"k_hat_override": 0},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            OuterConfig(**kwargs)


class TestRunL1:
    def test_single_unit_weight_solve(self):
        A, x, m = _sparse_instance(10, 30, 1, mat_seed=0, sig_seed=1)
        res = run_l1(A, m)
        assert res.method is Method.L1
        assert res.outer_iterations == 1
        assert len(res.trace) == 1
        np.testing.assert_array_equal(res.trace[0].weights, np.ones(30))
        assert _rel_err(res.solution, x) <= 1e-4


class TestRunIrl1:
    def test_weight_formula(self):
        # identity system recovers x=(2,0) at t=1; with a = 0.5*max|x| = 1
        # the next weights must be 1/(|x|+1) = (1/3, 1)
        A = SensingMatrix(np.eye(2))
        m = MeasurementSet(np.array([2.0, 0.0]))
        res = run_irl1(A, m, OuterConfig(irl1_a_scale=0.5))
        assert res.outer_iterations >= 2
        np.testing.assert_allclose(res.trace[1].weights, [1.0 / 3.0, 1.0], atol=1e-5)

    def test_first_iteration_is_plain_l1(self):
        A, x, m = _sparse_instance(12, 40, 3, mat_seed=2, sig_seed=3)
        res = run_irl1(A, m)
        base = run_l1(A, m)
        assert np.array_equal(res.trace[0].solution, base.solution)

    def test_recovered_instance_exits_at_two(self):
        A, x, m = _sparse_instance(10, 30, 1, mat_seed=4, sig_seed=5)
        res = run_irl1(A, m)
        assert res.outer_iterations == 2
        assert res.converged
        assert res.trace[1].rel_change <= OuterConfig().tol

    def test_max_outer_respected(self):
        A, x, m = _sparse_instance(8, 60, 7, mat_seed=6, sig_seed=7)
        res = run_irl1(A, m, OuterConfig(max_outer=3))
        assert res.outer_iterations <= 3

    def test_stability_floor_applies_to_zero_iterate(self):
        # eps >= ||y|| makes the first solve return exactly zero, so the
        # weight update divides by the floor alone
        A = SensingMatrix(np.eye(3))
        m = MeasurementSet(np.array([0.1, 0.0, 0.0]), epsilon=1.0)
        res = run_irl1(A, m, OuterConfig(irl1_a_floor=1e-3, max_outer=2))
        np.testing.assert_allclose(res.trace[1].weights, np.full(3, 1e3))


class TestRunSdrl1:
    def test_iteration_one_is_plain_l1(self):
        A, x, m = _sparse_instance(12, 40, 3, mat_seed=8, sig_seed=9)
        res = run_sdrl1(A, m)
        base = run_l1(A, m)
        assert np.array_equal(res.trace[0].solution, base.solution)

    def test_weight_level_progression(self):
        # frozen instance where support-driven reweighting succeeds and the
        # plain-l1 start fails: levels go {1} -> {1, w1} -> includes w2
        A, x, m = _sparse_instance(25, 100, 10, mat_seed=7, sig_seed=107)
        res = run_sdrl1(A, m)
        assert _rel_err(res.solution, x) <= 1e-3
        assert _rel_err(run_l1(A, m).solution, x) > 1e-1
        levels = [set(np.unique(rec.weights)) for rec in res.trace]
        assert levels[0] == {1.0}
        assert levels[1] == {0.5, 1.0}
        assert res.outer_iterations >= 3
        assert 0.0 in levels[2]

    def test_trace_invariants(self):
        A, x, m = _sparse_instance(25, 100, 10, mat_seed=3, sig_seed=103)
        cfg = OuterConfig()
        res = run_sdrl1(A, m, cfg)
        k_hat = compute_k_hat(25, 100)
        allowed = {1.0, cfg.omega1, cfg.omega2}
        for rec in res.trace:
            assert rec.Omega.issubset(rec.T1)
            assert len(rec.T1) == rec.s_t <= k_hat
            assert set(np.unique(rec.weights)) <= allowed

    def test_weights_come_from_previous_state(self):
        # record t carries the state computed from iterate t; the weights
        # used at t+1 must rebuild from exactly that state
        A, x, m = _sparse_instance(25, 100, 10, mat_seed=7, sig_seed=107)
        cfg = OuterConfig()
        res = run_sdrl1(A, m, cfg)
        for prev, cur in zip(res.trace, res.trace[1:]):
            rebuilt = sdrl1_weights(prev.T1, prev.Omega, cfg.omega1, cfg.omega2, 100)
            np.testing.assert_array_equal(cur.weights, rebuilt)

    def test_k_hat_override(self):
        A, x, m = _sparse_instance(25, 100, 10, mat_seed=5, sig_seed=105)
        res = run_sdrl1(A, m, OuterConfig(k_hat_override=4))
        assert all(rec.s_t <= 4 for rec in res.trace)

    def test_recovers_at_least_as_often_as_l1(self):
        sdrl1_wins = l1_wins = 0
        for seed in range(8):
            A, x, m = _sparse_instance(25, 100, 10, seed, seed + 100)
            sdrl1_wins += _rel_err(run_sdrl1(A, m).solution, x) <= 1e-3
            l1_wins += _rel_err(run_l1(A, m).solution, x) <= 1e-3
        assert sdrl1_wins >= max(2, l1_wins)

    def test_deterministic(self):
        A, x, m = _sparse_instance(15, 50, 4, mat_seed=10, sig_seed=11)
        r1 = run_sdrl1(A, m)
        r2 = run_sdrl1(A, m)
        assert np.array_equal(r1.solution, r2.solution)
        assert r1.outer_iterations == r2.outer_iterations


class TestRecoveryResult:
    def test_trace_length_must_match(self):
        with pytest.raises(ValueError):
            RecoveryResult(
                solution=np.zeros(2),
                method=Method.L1,
                outer_iterations=2,
                trace=(),
                converged=True,
            )

    def test_method_enum_values(self):
        assert Method.L1.value == "l1"
        assert Method.IRL1.value == "irl1"
        assert Method.SDRL1.value == "sdrl1"
