import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from specbudget import (
    BudgetConfig,
    EmptyInputError,
    MisalignedInputError,
    OutOfRangeError,
    SketchConfig,
    SpectrumProfile,
    calibrate_static_budget,
    clamp_ratio,
    compare_policies,
    generate_spectrum,
    make_ensemble,
    matrix_from_spectrum,
    mixed_profiles,
    truncate_top_k,
)
from specbudget.pruning import random_scores, row_norm_scores


class TestTruncateTopK:
    def test_basic(self):
        assert truncate_top_k([0.1, 0.9, 0.5], 2).tolist() == [1, 2]

    def test_all(self):
        assert truncate_top_k([0.3, 0.1, 0.2], 3).tolist() == [0, 1, 2]

    def test_ties_prefer_lower_index(self):
        assert truncate_top_k([0.5, 0.5, 0.5], 2).tolist() == [0, 1]

    @pytest.mark.parametrize("k", [0, 4, -1])
    def test_out_of_range(self, k):
        with pytest.raises(OutOfRangeError):
            truncate_top_k([1.0, 2.0, 3.0], k)

    def test_non_finite(self):
        with pytest.raises(ValueError):
            truncate_top_k([1.0, np.nan], 1)


class TestCalibrate:
    def test_figure_pair(self):
        assert calibrate_static_budget([95, 259]) == 177

    def test_constant(self):
        assert calibrate_static_budget([150, 150, 150]) == 150

    def test_half_to_even(self):
        assert calibrate_static_budget([1, 2]) == 2
        assert calibrate_static_budget([2, 3]) == 2
        assert calibrate_static_budget([3, 4]) == 4

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            calibrate_static_budget([])


class TestClampRatio:
    def test_upper(self):
        assert clamp_ratio(0.774, 0.4, 0.6) == 0.6

    def test_interior(self):
        assert clamp_ratio(0.5, 0.4, 0.6) == 0.5

    def test_lower(self):
        assert clamp_ratio(0.1, 0.6, 0.8) == 0.6

    @pytest.mark.parametrize("lo, hi", [(0.7, 0.6), (-0.1, 0.5), (0.2, 1.2)])
    def test_bad_interval(self, lo, hi):
        with pytest.raises(ValueError):
            clamp_ratio(0.5, lo, hi)


def rank_pair():
    profiles = [SpectrumProfile.low_rank_noise(r, 0.0, 64) for r in (3, 9)]
    return make_ensemble(profiles, 64, 96, seed=0)


class TestComparePolicies:
    def test_rank_three_and_nine(self):
        mats = rank_pair()
        scores = [random_scores(64, i) for i in range(2)]
        cmp = compare_policies(mats, scores, BudgetConfig(0.999))
        low, high = cmp.records
        assert cmp.k_static == 6
        assert (low.k_adaptive, high.k_adaptive) == (3, 9)
        assert low.retained_energy_adaptive == pytest.approx(1.0, abs=1e-12)
        assert high.retained_energy_adaptive == pytest.approx(1.0, abs=1e-12)
        assert low.energy_deficit_adaptive == 0 and high.energy_deficit_adaptive == 0
        # six of nine equal components kept
        assert high.retained_energy_static == pytest.approx(6 / 9, abs=1e-12)
        assert high.energy_deficit_static == pytest.approx(1 / 3, abs=1e-12)
        assert low.energy_deficit_static == 0
        assert low.wasted_tokens_static == 3
        assert high.wasted_tokens_static == 0

    def test_homogeneous(self):
        m = matrix_from_spectrum(generate_spectrum(SpectrumProfile.exponential(0.8, 20)), 20, 30, 1)
        cmp = compare_policies([m, m, m], [row_norm_scores(m)] * 3, BudgetConfig(0.99))
        for r in cmp.records:
            assert r.k_adaptive == r.k_static
            assert r.energy_deficit_adaptive == r.energy_deficit_static == 0
            assert r.retained_score_mass_adaptive == r.retained_score_mass_static

    def test_mixed_ensemble_matched_and_dominant(self):
        profiles = mixed_profiles(100, 48, seed=5)
        mats = make_ensemble(profiles, 48, 64, seed=5)
        cmp = compare_policies(mats, [random_scores(48, i) for i in range(100)], BudgetConfig(0.99))
        assert abs(cmp.mean_k_adaptive - cmp.k_static) <= 0.5
        agg = cmp.aggregates()
        assert agg["mean_retained_energy_adaptive"] >= agg["mean_retained_energy_static"]
        assert agg["mean_energy_deficit_adaptive"] == 0

    def test_randomized_budgets(self):
        mats = rank_pair()
        cfg = BudgetConfig(0.999, randomized=SketchConfig(t=20, p=5, q=2))
        cmp = compare_policies(mats, [row_norm_scores(m) for m in mats], cfg)
        assert [r.k_adaptive for r in cmp.records] == [3, 9]

    def test_misaligned_lengths(self):
        with pytest.raises(MisalignedInputError):
            compare_policies(rank_pair(), [np.ones(64)], BudgetConfig(0.9))

    def test_misaligned_tokens(self):
        with pytest.raises(MisalignedInputError):
            compare_policies(rank_pair(), [np.ones(64), np.ones(63)], BudgetConfig(0.9))

    def test_empty(self):
        with pytest.raises(EmptyInputError):
            compare_policies([], [], BudgetConfig(0.9))

    def test_to_dict(self):
        mats = rank_pair()
        d = compare_policies(mats, [np.ones(64)] * 2, BudgetConfig(0.999)).to_dict()
        assert len(d["records"]) == 2
        assert d["aggregates"]["k_static"] == 6


def test_score_generators(rng):
    a = random_scores(10, 3)
    assert np.array_equal(a, random_scores(10, 3))
    assert np.all((a >= 0) & (a < 1))
    m = rng.standard_normal((5, 4))
    np.testing.assert_allclose(row_norm_scores(m), np.sum(m**2, axis=1))


# --- properties -----------------------------------------------------------


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60), st.data())
def test_truncation_properties(scores, data):
    k = data.draw(st.integers(1, len(scores)))
    idx = truncate_top_k(scores, k)
    assert idx.size == k
    assert np.all(np.diff(idx) > 0)
    assert np.array_equal(idx, truncate_top_k(scores, k))
    s = np.asarray(scores)
    kept = set(idx.tolist())
    dropped = [i for i in range(s.size) if i not in kept]
    if dropped:
        assert s[idx].min() >= s[dropped].max()
        # a dropped score equal to a kept one must come after it
        for j in dropped:
            for i in idx:
                if s[i] == s[j]:
                    assert i < j


@given(st.lists(st.integers(1, 1000), min_size=1, max_size=50))
def test_calibration_within_half(budgets):
    assert abs(calibrate_static_budget(budgets) - np.mean(budgets)) <= 0.5


@given(st.lists(st.integers(1, 12), min_size=2, max_size=6), st.integers(0, 2**32))
def test_dominance_on_low_rank_ensembles(ranks, seed):
    n = 16
    profiles = [SpectrumProfile.low_rank_noise(r, 0.0, n) for r in ranks]
    mats = make_ensemble(profiles, n, 20, seed)
    cmp = compare_policies(mats, [random_scores(n, i) for i in range(len(mats))], BudgetConfig(0.999))
    assert abs(cmp.mean_k_adaptive - cmp.k_static) <= 0.5
    for r in cmp.records:
        assert r.energy_deficit_adaptive == 0
        if r.k_raw > r.k_static:
            assert r.energy_deficit_static > 0
