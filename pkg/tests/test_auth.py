import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.stats import norm

from thzauth.auth import (
    AuthConfig,
    NearestFingerprint,
    acceptance_probability,
    adaptive_simpson,
    analytic_pfa,
    analytic_pmd,
    authenticate,
    decide,
    exact_pfa,
    exact_pmd,
    expected_pmd,
    sigma_from_snr_db,
    snr_db_from_sigma,
    threshold_for_pfa,
)


def test_snr_conversion():
    assert sigma_from_snr_db(0.0) == 1.0
    assert sigma_from_snr_db(20.0) == pytest.approx(0.1)
    assert snr_db_from_sigma(sigma_from_snr_db(-7.5)) == pytest.approx(-7.5)


def test_perfect_measurement_accepted():
    l = np.array([70.0, 75.0, 80.0, 85.0])
    d = authenticate(80.0, AuthConfig(1.0, 2.0, l))
    assert (d.hypothesis, d.index, d.statistic) == ("H0", 2, 0.0)
    assert not d.impersonation


def test_midpoint_rejected_with_lowest_index_tie():
    d = authenticate(85.0, AuthConfig(1.0, 2.0, np.array([80.0, 90.0])))
    assert d.hypothesis == "H1" and d.statistic == 5.0 and d.index == 0


def test_statistic_equal_to_threshold_is_h1():
    h1, _, t = decide(np.array([82.0]), np.array([80.0]), 2.0)
    assert t[0] == 2.0 and h1[0]


def test_auth_config_validation():
    with pytest.raises(ValueError):
        AuthConfig(1.0, 1.0, np.array([]))
    with pytest.raises(ValueError):
        AuthConfig(0.0, 1.0, np.array([1.0]))
    with pytest.raises(ValueError):
        NearestFingerprint([])


@settings(max_examples=300)
@given(
    st.lists(st.integers(-20, 20), min_size=1, max_size=12),
    st.lists(st.integers(-50, 50), min_size=1, max_size=20),
)
def test_nearest_matches_brute_force(l, z):
    # integer-valued (halved) data makes exact ties frequent
    la = np.array(l, float) / 2
    za = np.array(z, float) / 4
    idx, dist = NearestFingerprint(la).query(za)
    for k, v in enumerate(za):
        d = np.abs(v - la)
        assert idx[k] == int(np.argmin(d))  # argmin returns the first minimum
        assert dist[k] == d.min()


def test_threshold_for_pfa():
    # eps = sigma Q^-1(pfa/2); Q^-1(0.025) = 1.959963984540054 from 40-digit bisection
    assert threshold_for_pfa(0.05, 1.0) == pytest.approx(1.959963984540054, abs=1e-10)
    assert threshold_for_pfa(0.05, 2.0) == pytest.approx(2 * 1.959963984540054, abs=1e-9)
    assert threshold_for_pfa(1 - 1e-12, 1.0) < 1e-11
    for bad in (0.0, 1.0, -0.5):
        with pytest.raises(ValueError):
            threshold_for_pfa(bad, 1.0)


def test_analytic_pfa():
    assert analytic_pfa(0.0, 1.3) == 1.0
    assert analytic_pfa(1.5, 1.5) == pytest.approx(0.31731050786291410, rel=1e-13)
    for sigma in (0.3, 1.0, 4.0):
        assert analytic_pfa(threshold_for_pfa(0.2, sigma), sigma) == pytest.approx(0.2, abs=1e-10)


def test_analytic_pmd_examples():
    assert analytic_pmd([85.0], 85.0, 2.0, 1.0) == pytest.approx(0.95449973610364159, rel=1e-12)
    assert analytic_pmd([85.0, 200.0], 85.0, 50.0, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert analytic_pmd([85.0, 95.0], 40.0, 2.0, 1.0) < 1e-100
    # several Eves, uniform and weighted aggregation
    per = [analytic_pmd([85.0], e, 2.0, 1.0) for e in (84.0, 90.0)]
    assert analytic_pmd([85.0], [84.0, 90.0], 2.0, 1.0) == pytest.approx(np.mean(per))
    assert analytic_pmd([85.0], [84.0, 90.0], 2.0, 1.0, weights=[3, 1]) == pytest.approx(0.75 * per[0] + 0.25 * per[1])
    assert math.isnan(analytic_pmd([85.0], np.array([]), 2.0, 1.0))
    with pytest.raises(ValueError):
        analytic_pmd([], 1.0, 1.0, 1.0)


def test_analytic_pmd_is_clamped():
    # overlapping windows would push the raw sum above one
    assert analytic_pmd([85.0, 85.1, 85.2], 85.1, 3.0, 1.0) == 1.0


def test_expected_pmd_single_fingerprint():
    # integral of Q(x - eps) - Q(x + eps) over a wide interval is 2 eps
    assert expected_pmd([85.0], 2.0, 1.0, 65.0, 105.0) == pytest.approx(0.1, abs=0.005)
    assert expected_pmd([85.0], 2.0, 1.0, 65.0, 105.0) == pytest.approx(0.1, abs=1e-9)
    assert expected_pmd([85.0], 0.0, 1.0, 65.0, 105.0) == 0.0
    with pytest.raises(ValueError):
        expected_pmd([85.0], 1.0, 1.0, 10.0, 10.0)


def test_expected_pmd_against_quad():
    l = np.array([60.0, 61.5, 70.0, 74.0])
    eps, sigma, lo, hi = 1.2, 0.8, 55.0, 80.0

    def integrand(x):
        return min(1.0, sum(norm.cdf(li + eps, x, sigma) - norm.cdf(li - eps, x, sigma) for li in l))

    ref, _ = quad(integrand, lo, hi, points=list(l - eps) + list(l + eps) + list(l), limit=400, epsabs=1e-12)
    assert expected_pmd(l, eps, sigma, lo, hi) == pytest.approx(ref / (hi - lo), abs=1e-8)


def test_adaptive_simpson_polynomial_and_kink():
    assert adaptive_simpson(lambda x: x**3, [0.0, 2.0]) == pytest.approx(4.0, abs=1e-12)
    assert adaptive_simpson(lambda x: np.abs(x), [-1.0, 0.0, 3.0]) == pytest.approx(5.0, abs=1e-12)
    assert adaptive_simpson(np.sin, [0.0, math.pi], tol=1e-10) == pytest.approx(2.0, abs=1e-9)


def test_acceptance_probability_merges_windows():
    l = [0.0, 1.0]
    # windows (-2, 2) and (-1, 3) overlap into (-2, 3)
    p = acceptance_probability(0.5, l, 2.0, 1.0)
    assert p == pytest.approx(norm.cdf(3, 0.5) - norm.cdf(-2, 0.5), rel=1e-12)
    # well-separated windows reproduce the single-window formula
    far = acceptance_probability(0.0, [0.0, 100.0], 1.0, 1.0)
    assert far == pytest.approx(1 - analytic_pfa(1.0, 1.0), rel=1e-12)


def test_exact_rates_monte_carlo():
    rng = np.random.default_rng(5)
    l = np.array([10.0, 11.0, 14.0])
    eve = np.array([10.5, 12.0, 20.0])
    eps, sigma, n = 0.7, 0.6, 200_000
    p_fa = exact_pfa(l, eps, sigma)
    owner = rng.integers(3, size=n)
    h1, _, _ = decide(l[owner] + sigma * rng.standard_normal(n), l, eps)
    assert abs(h1.mean() - p_fa) < 3 * math.sqrt(p_fa * (1 - p_fa) / n)
    p_md = exact_pmd(l, eve, eps, sigma)
    who = rng.integers(3, size=n)
    h1e, _, _ = decide(eve[who] + sigma * rng.standard_normal(n), l, eps)
    assert abs((~h1e).mean() - p_md) < 3 * math.sqrt(p_md * (1 - p_md) / n)
    assert math.isnan(exact_pmd(l, [], eps, sigma))
