import numpy as np
import pytest

from pegstress.errors import AlignmentError, ValidationError
from pegstress.peg import (
    HybridRailParams,
    alpha_sensitivity,
    hybrid_transform,
    scale_factors,
    summarize,
)
from pegstress.series import DeviationSeries, MinuteVolumeSeries

PARAMS = HybridRailParams()  # 100e6/min capacity, alpha=0.5, 5e6 floor, 0.25 min scale


def dev(values, start=0):
    return DeviationSeries(start, np.asarray(values, dtype=float))


def vol(values, start=0):
    return MinuteVolumeSeries(start, np.asarray(values, dtype=float))


def test_summarize_counts_and_runs():
    d = dev([0, 6, 12, 12, 4, 11, 0, 10])
    s = summarize(d, eps_bps=5, gamma_bps=10)
    assert s.d_max_bps == 12
    assert s.minutes_ge_eps == 5  # thresholds are inclusive: 6,12,12,11,10
    assert s.longest_run_ge_gamma == 2  # the [12, 12] block


def test_summarize_no_breach():
    s = summarize(dev([0.0, 1.0, 2.0]), 5, 10)
    assert s.minutes_ge_eps == 0
    assert s.longest_run_ge_gamma == 0


def test_summarize_run_at_end():
    # a run touching the series end must still be closed off
    s = summarize(dev([0, 10, 10, 10]), 5, 10)
    assert s.longest_run_ge_gamma == 3


def test_scale_factors_floor_and_interior():
    v = vol([1e6, 5e6, 100e6, 400e6])
    s = scale_factors(v, PARAMS)
    # alpha*R = 50e6. First two minutes sit below/at the volume floor, where
    # 5/(5+50) ~ 0.091 loses to the 0.25 minimum.
    np.testing.assert_allclose(s, [0.25, 0.25, 100 / 150, 400 / 450])


def test_hybrid_transform_floor_region_is_exact_quarter():
    rng = np.random.default_rng(3)
    d = dev(rng.uniform(0, 500, 64))
    v = vol(rng.uniform(0, 13e6, 64))  # always below the 16.67e6 breakeven
    h = hybrid_transform(d, v, PARAMS)
    # 0.25*x is exact in binary floating point
    np.testing.assert_array_equal(h.deviations, 0.25 * d.deviations)


def test_hybrid_transform_never_amplifies():
    rng = np.random.default_rng(4)
    d = dev(rng.uniform(0, 2000, 512))
    v = vol(rng.lognormal(16, 2, 512))
    h = hybrid_transform(d, v, PARAMS)
    assert np.all(h.deviations <= d.deviations + 1e-12)
    assert h.start_minute == d.start_minute


def test_hybrid_transform_requires_same_grid():
    d = dev([1.0, 2.0], start=0)
    v = vol([1.0, 1.0], start=5)
    with pytest.raises(AlignmentError):
        hybrid_transform(d, v, PARAMS)
    with pytest.raises(AlignmentError):
        hybrid_transform(dev([1.0, 2.0, 3.0]), vol([1.0, 1.0]), PARAMS)


def test_alpha_sensitivity_monotone_contraction():
    rng = np.random.default_rng(11)
    d = dev(rng.uniform(0, 1500, 2000))
    v = vol(rng.lognormal(15.5, 1.0, 2000))
    grid = [0.05, 0.1, 0.25, 0.5, 0.75, 1.0]
    rows = alpha_sensitivity(d, v, PARAMS, grid, eps_bps=5, gamma_bps=10)
    assert [a for a, _ in rows] == grid
    d_max = [s.d_max_bps for _, s in rows]
    minutes = [s.minutes_ge_eps for _, s in rows]
    runs = [s.longest_run_ge_gamma for _, s in rows]
    # deeper pass-through can only shrink deviations, so every summary
    # statistic is nonincreasing in alpha
    for seq in (d_max, minutes, runs):
        assert all(a >= b for a, b in zip(seq, seq[1:]))
    base = summarize(d, 5, 10)
    assert d_max[0] <= base.d_max_bps


def test_params_validation():
    with pytest.raises(ValidationError):
        HybridRailParams(min_scale=0.0)
    with pytest.raises(ValidationError):
        HybridRailParams(min_scale=1.5)
    with pytest.raises(ValidationError):
        HybridRailParams(rail_capacity_usd_per_min=-1)
    with pytest.raises(ValidationError):
        HybridRailParams(pass_through=0.0)


def test_summary_thresholds_recorded():
    s = summarize(dev([0.0, 20.0]), eps_bps=7, gamma_bps=15)
    assert s.eps_bps == 7
    assert s.gamma_bps == 15
