import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from condextremes import numerics
from condextremes.errors import EmptyDomain, NoSignChange, NonPositive

finite = st.floats(-700, 700, allow_nan=False)


@given(finite, finite)
def test_log_add_matches_logaddexp(a, b):
    assert numerics.log_add(a, b) == pytest.approx(np.logaddexp(a, b), rel=1e-14, abs=1e-14)


def test_log_add_neg_inf():
    assert numerics.log_add(-math.inf, -math.inf) == -math.inf
    assert numerics.log_add(-math.inf, 2.0) == 2.0


@given(finite, st.floats(1e-6, 50))
def test_log_sub_inverts_log_add(a, gap):
    b = a - gap
    assert numerics.log_sub(numerics.log_add(a, b), b) == pytest.approx(a, abs=1e-9)


def test_log_sum_huge_range():
    assert numerics.log_sum([-3900.0, -3900.0]) == pytest.approx(-3900.0 + math.log(2), abs=1e-12)
    assert numerics.log_sum([]) == -math.inf


@pytest.mark.parametrize("x", [-30.0, -3.0, 0.0, 1.0, 7.9, 8.0, 8.1, 12.0, 40.0, 1e3])
def test_std_normal_logsf_against_scipy(x):
    assert numerics.std_normal_logsf(x) == pytest.approx(special.log_ndtr(-x), rel=1e-13)


def test_std_normal_logsf_far_tail():
    v = numerics.std_normal_logsf(1e4)
    assert math.isfinite(v)
    assert v == pytest.approx(-5e7 - math.log(1e4) - 0.5 * math.log(2 * math.pi), rel=1e-15)


@given(st.floats(-8, 200))
def test_std_normal_logsf_decreasing(x):
    # below about -8 the value is -0.0 to double precision
    assert numerics.std_normal_logsf(x + 0.5) < numerics.std_normal_logsf(x)


def test_log_gamma_fn():
    assert numerics.log_gamma_fn(5.0) == pytest.approx(math.log(24.0), rel=1e-15)
    with pytest.raises(NonPositive):
        numerics.log_gamma_fn(0.0)


@pytest.mark.parametrize("order,expected,tol", [(1, math.cos(0.7), 1e-9), (2, -math.sin(0.7), 1e-7),
                                                (3, -math.cos(0.7), 1e-5), (4, math.sin(0.7), 1e-4)])
def test_finite_diff_deriv_sin(order, expected, tol):
    # rounding noise grows like eps / h^order
    assert numerics.finite_diff_deriv(math.sin, 0.7, order) == pytest.approx(expected, abs=tol)


def test_finite_diff_rejects_order():
    with pytest.raises(ValueError):
        numerics.finite_diff_deriv(math.sin, 0.0, 5)


def test_find_root():
    assert numerics.find_root(lambda x: x * x - 2, (0.0, 2.0)) == pytest.approx(math.sqrt(2), rel=1e-15)
    with pytest.raises(NoSignChange):
        numerics.find_root(lambda x: x * x + 1, (0.0, 2.0))


def test_maximize_finds_both_peaks():
    f = lambda x: np.logaddexp(-(x - 1) ** 2 / 0.01, -(x - 5) ** 2 / 0.01 - 3)
    m = numerics.maximize(f, (0.0, 8.0), 256)
    xs = sorted(x for x, _ in m)
    assert xs[0] == pytest.approx(1.0, abs=1e-6) and xs[-1] == pytest.approx(5.0, abs=1e-6)


def test_maximize_empty_domain():
    with pytest.raises(EmptyDomain):
        numerics.maximize(lambda x: -x * x, (1.0, 1.0))


def test_integrate_log_gaussian_far_below_underflow():
    # int exp(-3900 - x^2/2) dx over R
    v = numerics.integrate_log(lambda x: -3900 - 0.5 * np.asarray(x) ** 2, (-math.inf, math.inf), 1e-12,
                               points=[0.0])
    assert v == pytest.approx(-3900 + 0.5 * math.log(2 * math.pi), abs=1e-10)


def test_integrate_log_gamma_integral():
    a = 7.5
    f = lambda x: a * np.log(x) - x
    v = numerics.integrate_log(f, (0.0, math.inf), 1e-12, points=[a])
    assert v == pytest.approx(special.gammaln(a + 1), rel=1e-12)


def test_integrate_log_edge_peak():
    # narrow peak sitting on a panel edge is still resolved by the graded mesh
    f = lambda x: -np.abs(np.asarray(x) - 1e-3) * 1e5
    v = numerics.integrate_log(f, (0.0, 10.0), 1e-12, points=[1e-3])
    exact = math.log((2 - math.exp(-100)) / 1e5)
    assert v == pytest.approx(exact, abs=1e-10)


def test_integrate_log_open_end_not_evaluated():
    def f(x):
        x = np.asarray(x, dtype=float)
        assert np.all(x > 0)
        return -np.log(x) / 2 - x

    assert numerics.integrate_log(f, (0.0, math.inf), 1e-8) == pytest.approx(0.5 * math.log(math.pi), abs=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.floats(0.1, 50), st.floats(-5, 5))
def test_integrate_log_exponential_tail(rate, shift):
    v = numerics.integrate_log(lambda x: -rate * (np.asarray(x) - shift), (shift, math.inf), 1e-10)
    assert v == pytest.approx(-math.log(rate), abs=1e-8)
