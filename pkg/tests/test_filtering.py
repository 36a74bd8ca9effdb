import numpy as np
import pytest

from pfresample.filtering import FilterDemoSpec, demo_filter, kalman_filter, simulate


def test_noiseless_limit_tracks_truth():
    spec = FilterDemoSpec(T=20, P=256, q=0.0, p0=0.0, m0=1.5, a=0.95, r=1.0, scheme="multinomial")
    res = demo_filter(spec)
    np.testing.assert_array_equal(res.mean, res.truth)
    assert np.all(res.var <= 1e-28)


def test_kalman_oracle_scalar_step():
    spec = FilterDemoSpec(T=1, P=2, a=0.5, q=1.0, r=2.0, m0=0.0, p0=4.0)
    m, p = kalman_filter(spec, np.array([np.nan, 3.0]))
    # predictive N(0, 2); update with r = 2 halves the variance
    assert p[1] == pytest.approx(1.0)
    assert m[1] == pytest.approx(1.5)


def test_simulation_reproducible():
    a = simulate(FilterDemoSpec(seed=4))
    b = simulate(FilterDemoSpec(seed=4))
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1][1:], b[1][1:])


def test_matches_kalman_small():
    # seed 1 has a 3-sigma innovation at t = 18 that leaves ESS near 40
    res = demo_filter(FilterDemoSpec(T=30, P=4096, scheme="stratified", seed=1))
    z = np.abs(res.mean - res.kf_mean)[1:] / res.standard_errors()[1:]
    assert z.max() < 5


def test_no_resampling_collapses():
    kw = dict(T=50, P=2048, seed=0)
    without = demo_filter(FilterDemoSpec(scheme=None, **kw))
    with_rs = demo_filter(FilterDemoSpec(scheme="systematic", **kw))
    assert without.ess[1:].min() < 0.05 * with_rs.ess[1:].min()
    assert without.ess[-1] < 5


def test_spec_validation():
    with pytest.raises(ValueError):
        FilterDemoSpec(r=0.0)
    with pytest.raises(ValueError):
        FilterDemoSpec(T=0)


def test_standard_error_calibration():
    z = []
    for seed in range(20):
        res = demo_filter(FilterDemoSpec(T=50, P=1024, scheme="multinomial", seed=seed))
        z.append((res.mean - res.kf_mean)[1:] / res.standard_errors()[1:])
    z = np.concatenate(z)
    assert 0.85 < z.std() < 1.15
    assert np.mean(np.abs(z) > 3) < 0.01
