import math

import numpy as np
import pytest
import scipy.integrate
import scipy.stats
from hypothesis import given, strategies as st

from guildnet import stats


def test_pearson_exact_cases():
    x = [1.0, 2.0, 3.0, 4.0]
    assert stats.pearson(x, [2 * v + 1 for v in x]) == pytest.approx(1.0)
    assert stats.pearson(x, [-v for v in x]) == pytest.approx(-1.0)
    assert stats.pearson([1, 2, 3], [1, 3, 2]) == pytest.approx(0.5)


def test_pearson_errors():
    with pytest.raises(ValueError):
        stats.pearson([1, 2], [1, 2])
    with pytest.raises(ValueError):
        stats.pearson([1, 1, 1], [1, 2, 3])
    with pytest.raises(ValueError):
        stats.pearson([1, 2, 3], [1, 2])


@given(
    st.lists(st.floats(-100, 100), min_size=4, max_size=20),
    st.floats(0.1, 10),
    st.floats(-5, 5),
)
def test_pearson_affine_invariance(xs, scale, shift):
    ys = [2.0 * v + 1.0 for v in xs]
    if np.std(xs) < 1e-6 or np.std([scale * v + shift for v in xs]) < 1e-6:
        return
    base = stats.pearson(xs, ys)
    assert stats.pearson([scale * v + shift for v in xs], ys) == pytest.approx(base, abs=1e-9)
    assert stats.pearson([-scale * v for v in xs], ys) == pytest.approx(-base, abs=1e-9)


def test_t_p_against_reference_table():
    # published t-table value: two-sided p for t=2.0 at 10 dof
    assert stats.two_sided_t_p(2.0, 10) == pytest.approx(0.0734, abs=1e-3)


def test_t_p_against_quadrature_oracle():
    for t, df in ((0.5, 3), (1.7, 8), (2.0, 10), (3.3, 25), (0.1, 60)):
        pdf = scipy.stats.t(df).pdf
        tail, _ = scipy.integrate.quad(pdf, t, np.inf)
        assert stats.two_sided_t_p(t, df) == pytest.approx(2 * tail, rel=1e-8)


def test_t_test_p_conventions():
    assert stats.t_test_p(0.0, 10) == pytest.approx(1.0)
    assert stats.t_test_p(1.0, 10) == 0.0
    assert stats.t_test_p(-0.4, 20) == pytest.approx(stats.t_test_p(0.4, 20))
    # monotone decreasing in |rho|
    ps = [stats.t_test_p(r, 15) for r in (0.1, 0.3, 0.5, 0.7, 0.9)]
    assert all(a > b for a, b in zip(ps, ps[1:]))


def test_t_test_p_matches_scipy():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(5, 50))
        rho = float(rng.uniform(-0.95, 0.95))
        t = rho * math.sqrt((n - 2) / (1 - rho * rho))
        expected = 2 * scipy.stats.t(n - 2).sf(abs(t))
        assert stats.t_test_p(rho, n) == pytest.approx(expected, rel=1e-9)


def test_loglog_fit_exact_power_laws():
    for alpha in (0.5, 1.0, 1.5, 2.0):
        pts = [(k, k ** alpha) for k in range(1, 11)]
        fit = stats.loglog_fit(pts)
        assert fit.slope == pytest.approx(alpha, abs=1e-9)
        assert fit.r2 == pytest.approx(1.0, abs=1e-9)
    flat = stats.loglog_fit([(k, 3.0) for k in range(1, 8)])
    assert flat.slope == pytest.approx(0.0, abs=1e-12)


def test_loglog_fit_noisy_recovery():
    rng = np.random.default_rng(7)
    ks = np.linspace(1, 50, 50)
    vs = 3.0 * ks ** 1.5 * np.exp(rng.normal(0, 0.01, size=50))
    fit = stats.loglog_fit(list(zip(ks, vs)))
    assert fit.slope == pytest.approx(1.5, abs=0.05)


def test_loglog_fit_errors():
    with pytest.raises(ValueError):
        stats.loglog_fit([(1.0, 1.0)])
    with pytest.raises(ValueError):
        stats.loglog_fit([(1.0, 1.0), (2.0, -1.0)])


def test_exp_survival_fit():
    pts = [(d, math.exp(-0.2 * d)) for d in range(1, 15)]
    assert stats.exp_survival_fit(pts) == pytest.approx(0.2, abs=1e-10)
    assert stats.exp_survival_fit([(d, 0.5) for d in range(1, 6)]) == pytest.approx(0.0)


def test_exp_survival_fit_monte_carlo():
    rng = np.random.default_rng(3)
    durations = np.ceil(rng.exponential(scale=1 / 0.25, size=10_000)).astype(int)
    from guildnet.ingest import survival_ccdf

    rate = stats.exp_survival_fit(survival_ccdf(list(durations))[:30])
    assert rate == pytest.approx(0.25, rel=0.05)
