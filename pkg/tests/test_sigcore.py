import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from sdrl1.sigcore import (
    IndexSet,
    as_signal,
    best_k_term,
    energy_support_size,
    support_accuracy,
    top_support,
)
from oracles import energy_count_oracle

signals = hnp.arrays(
    np.float64,
    st.integers(1, 30),
    elements=st.floats(-1e6, 1e6, allow_nan=False, width=64),
)


class TestAsSignal:
    def test_accepts_list(self):
        v = as_signal([1, 2, 3], "v")
        assert v.dtype == np.float64 and v.shape == (3,)

    def test_rejects_matrix(self):
        with pytest.raises(ValueError):
            as_signal(np.zeros((2, 2)), "v")

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            as_signal([1.0, np.nan], "v")

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            as_signal([], "v")


class TestIndexSet:
    def test_one_based_bounds(self):
        s = IndexSet.from_iterable([1, 5], N=5)
        assert s.indices == (1, 5)
        with pytest.raises(ValueError):
            IndexSet.from_iterable([0], N=5)
        with pytest.raises(ValueError):
            IndexSet.from_iterable([6], N=5)

    def test_duplicates_collapse(self):
        assert IndexSet.from_iterable([2, 2, 1], N=4).indices == (1, 2)

    def test_mask_roundtrip(self):
        s = IndexSet.from_iterable([2, 4], N=6)
        mask = s.to_mask()
        assert mask.tolist() == [False, True, False, True, False, False]
        assert IndexSet.from_mask(mask) == s

    def test_positions_zero_based(self):
        s = IndexSet.from_iterable([1, 3], N=4)
        assert s.positions().tolist() == [0, 2]

    def test_set_algebra(self):
        a = IndexSet.from_iterable([1, 2, 3], N=6)
        b = IndexSet.from_iterable([3, 4], N=6)
        assert (a & b).indices == (3,)
        assert (a | b).indices == (1, 2, 3, 4)
        assert IndexSet.from_iterable([2, 3], N=6).issubset(a)
        assert not b.issubset(a)

    def test_n_mismatch_rejected(self):
        a = IndexSet.from_iterable([1], N=4)
        b = IndexSet.from_iterable([1], N=5)
        with pytest.raises(ValueError):
            a.intersection(b)

    def test_contains_and_len(self):
        s = IndexSet.from_iterable([2, 5], N=5)
        assert 2 in s and 3 not in s and len(s) == 2
        assert len(IndexSet.empty(7)) == 0

    @given(st.lists(st.integers(1, 12), min_size=0, max_size=12))
    def test_mask_roundtrip_property(self, idx):
        s = IndexSet.from_iterable(idx, N=12)
        assert IndexSet.from_mask(s.to_mask()) == s
        assert list(s) == sorted(set(idx))


class TestTopSupport:
    def test_picks_largest_magnitudes(self):
        x = np.array([0.5, -3.0, 2.0, 0.0])
        assert top_support(x, 2).indices == (2, 3)

    def test_tie_breaks_to_smaller_index(self):
        x = np.array([-2.0, 2.0, 1.0])
        assert top_support(x, 1).indices == (1,)
        assert top_support(np.array([1.0, 1.0, 1.0]), 2).indices == (1, 2)

    def test_s_zero_and_full(self):
        x = np.array([1.0, 2.0])
        assert top_support(x, 0) == IndexSet.empty(2)
        assert top_support(x, 2).indices == (1, 2)

    def test_s_out_of_range(self):
        with pytest.raises(ValueError):
            top_support(np.array([1.0]), 2)
        with pytest.raises(ValueError):
            top_support(np.array([1.0]), -1)

    @given(signals, st.data())
    def test_selected_magnitudes_dominate(self, x, data):
        s = data.draw(st.integers(0, x.size))
        sel = top_support(x, s)
        assert len(sel) == s
        inside = np.abs(x)[sel.positions()]
        mask = sel.to_mask()
        outside = np.abs(x)[~mask]
        if s and outside.size:
            assert inside.min() >= outside.max()


class TestEnergySupportSize:
    def test_dominant_entry(self):
        x = np.zeros(50)
        x[0], x[1] = 10.0, 1.0
        assert energy_support_size(x, 0.99) == 1

    def test_needs_both_entries(self):
        x = np.array([3.0, 4.0, 0.0])
        # top entry carries 4/5 of the norm; stay clear of the exact boundary
        assert energy_support_size(x, 0.79) == 1
        assert energy_support_size(x, 0.81) == 2

    def test_flat_signal_needs_all(self):
        assert energy_support_size(np.ones(4), 0.99) == 4

    def test_p_hat_one_counts_nonzeros(self):
        x = np.array([0.0, 2.0, 0.0, -1.0])
        assert energy_support_size(x, 1.0) == 2

    def test_all_zero_warns_and_returns_zero(self):
        with pytest.warns(RuntimeWarning):
            assert energy_support_size(np.zeros(4), 0.99) == 0

    def test_invalid_p_hat(self):
        with pytest.raises(ValueError):
            energy_support_size(np.ones(3), 0.0)
        with pytest.raises(ValueError):
            energy_support_size(np.ones(3), 1.5)

    @given(signals, st.sampled_from([0.5, 0.9, 0.99]))
    @settings(max_examples=200)
    def test_matches_linear_scan_oracle(self, x, p_hat):
        if not np.any(x):
            return
        assert energy_support_size(x, p_hat) == energy_count_oracle(x, p_hat)


class TestBestKTerm:
    def test_keeps_top_k(self):
        x = np.array([1.0, -4.0, 2.0, 0.5])
        np.testing.assert_array_equal(best_k_term(x, 2), [0.0, -4.0, 2.0, 0.0])

    def test_k_zero_and_full(self):
        x = np.array([1.0, 2.0])
        np.testing.assert_array_equal(best_k_term(x, 0), [0.0, 0.0])
        np.testing.assert_array_equal(best_k_term(x, 2), x)

    @given(signals, st.data())
    def test_is_best_approximation(self, x, data):
        k = data.draw(st.integers(0, x.size))
        xk = best_k_term(x, k)
        assert np.count_nonzero(xk) <= k
        # no k-sparse vector comes closer: the residual keeps the N-k
        # smallest magnitudes
        resid = np.sort(np.abs(x - xk))
        expect = np.sort(np.abs(x))[: x.size - k]
        np.testing.assert_allclose(resid[resid > 0], expect[expect > 0])


class TestSupportAccuracy:
    def test_exact_fraction(self):
        est = IndexSet.from_iterable([1, 2, 3, 4], N=10)
        truth = IndexSet.from_iterable([3, 4, 5], N=10)
        assert support_accuracy(est, truth) == 0.5

    def test_full_and_zero(self):
        t = IndexSet.from_iterable([1, 2], N=5)
        assert support_accuracy(t, t) == 1.0
        other = IndexSet.from_iterable([4, 5], N=5)
        assert support_accuracy(other, t) == 0.0

    def test_empty_estimate_rejected(self):
        with pytest.raises(ValueError):
            support_accuracy(IndexSet.empty(5), IndexSet.from_iterable([1], N=5))
