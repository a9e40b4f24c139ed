import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from condextremes import hw_model as hw, numerics
from condextremes.errors import NonPositive, NonPositiveX, OutsideRestrictedSpace, ThresholdTooLow
from condextremes.margins import ProbLevel
from condextremes.paramfile import ParamFileError

P = hw.hw_table_s1()

# log P(Y > y) at log y = 10, 20, 50 and log chi_u at u = 50, 150; DERIVED from
# an independent 40-digit integration of the same mixture integral
SURVIVAL_ORACLE = {10.0: -309.875885580452, 20.0: -1414.68451124073, 50.0: -9522.54159103894}
CHI_ORACLE = {50.0: -316.523703115959, 150.0: -1603.33543497158}


def test_table_s1_values():
    d = P.to_dict()
    assert d["lambda"] == 2.908 and d["sigma0"] == 0.005 and len(d) == 11
    assert P.restricted


def test_param_file_roundtrip(tmp_path):
    f = tmp_path / "hw.txt"
    P.to_file(f)
    assert hw.HwParams.from_file(f) == P
    f.write_text(f.read_text().replace("mu2", "# mu2"))
    with pytest.raises(ParamFileError):
        hw.HwParams.from_file(f)


def test_nonpositive_parameter_rejected():
    with pytest.raises(NonPositive):
        hw.HwParams.from_dict({**P.to_dict(), "k": 0.0})


def test_validate_and_density_mass():
    d = hw.validate(P)
    assert d.ok
    log_mass = numerics.integrate_log(lambda x: hw.log_density_x(P, x), (0.0, math.inf), 1e-12, points=[P.u_thr])
    assert math.exp(log_mass) == pytest.approx(d.mass, rel=1e-9)


def test_renormalized_density_integrates_to_one():
    q = hw.hw_table_s1(renormalize=True)
    log_mass = numerics.integrate_log(lambda x: hw.log_density_x(q, x), (0.0, math.inf), 1e-12, points=[q.u_thr])
    assert log_mass == pytest.approx(0.0, abs=1e-9)


def test_density_rejects_nonpositive_x():
    with pytest.raises(NonPositiveX):
        hw.log_density_x(P, [1.0, 0.0])


@settings(max_examples=20, deadline=None)
@given(st.floats(0.2, 12.0))
def test_x_logsf_matches_density_integral(x):
    # 1 - F_X(x) also carries the mass the splice leaves out
    num = numerics.integrate_log(lambda t: hw.log_density_x(P, t), (x, math.inf), 1e-12, points=[max(x, P.u_thr)])
    gap = 1.0 - hw.validate(P).mass
    assert hw.x_logsf(P, x) == pytest.approx(math.log(math.exp(num) + gap), rel=1e-8, abs=1e-10)


def test_cond_logsf_is_lognormal():
    x, y = 2.0, 20.0
    z = (math.log(y) - hw.mu(P, x)) / hw.sigma(P, x)
    assert hw.cond_logsf_y(P, y, x) == pytest.approx(numerics.std_normal_logsf(z), rel=1e-15)


def test_eta_closed_and_restricted_space():
    s = hw.eta_closed(P)
    assert s.chi == 0.0 and s.eta == pytest.approx(1 / 26, rel=1e-15)
    with pytest.raises(OutsideRestrictedSpace):
        hw.eta_closed(hw.HwParams.from_dict({**P.to_dict(), "mu2": 0.8}))


def test_modes_at_y100():
    r = hw.integrand_modes(P, 100.0)
    assert r.bimodal and r.n_maxima == 2
    assert r.x_star == pytest.approx(0.52686, rel=1e-4)
    assert r.x_min == pytest.approx(13.2006, rel=1e-4)
    assert r.x_star2 == pytest.approx(50.302, rel=1e-4)
    assert r.log_g_star > r.log_g_star2


def test_unimodal_at_y10():
    r = hw.integrand_modes(P, 10.0)
    assert not r.bimodal and r.x_star == pytest.approx(2.46905, rel=1e-4)


def test_modes_are_stationary_points():
    r = hw.integrand_modes(P, 50.0)
    f = lambda x: float(hw.log_integrand(P, 50.0, x))
    for x in (r.x_star, r.x_min, r.x_star2):
        assert abs(numerics.finite_diff_deriv(f, x, 1, h=1e-4 * x)) < 1e-4 * max(1.0, abs(f(x)))


def test_survival_small_y_against_scipy_quad():
    y = math.exp(2.0)
    g = lambda x: math.exp(float(hw.log_integrand(P, y, x)))
    ref = sum(integrate.quad(g, a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
              for a, b in [(0, P.u_thr), (P.u_thr, 60.0)])
    assert hw.survival_y(P, y) == pytest.approx(math.log(ref), rel=1e-9)


@pytest.mark.parametrize("ly", sorted(SURVIVAL_ORACLE))
def test_survival_oracle(ly):
    assert hw.survival_logy(P, ly, 1e-12) == pytest.approx(SURVIVAL_ORACLE[ly], rel=1e-11)


def test_survival_decreasing_and_asymptotic_ratio():
    lys = [5.0, 10.0, 20.0, 40.0]
    s = [hw.survival_logy(P, ly) for ly in lys]
    assert all(b < a for a, b in zip(s, s[1:]))
    for ly, v in zip(lys, s):
        assert 0.85 < v / hw.survival_y_asymptotic(P, math.exp(ly)) < 1.05


def test_large_log_y_finite():
    # y = exp(1e3) overflows a double; the log-y path still works
    v = hw.survival_logy(P, 1e3)
    assert math.isfinite(v) and v < 0


def test_log_quantile_inverts_survival():
    ly = hw.log_quantile_y(P, ProbLevel(150.0))
    assert ly == pytest.approx(7.34026421, rel=1e-7)
    assert hw.survival_logy(P, ly) == pytest.approx(-150.0, rel=1e-6)


@pytest.mark.parametrize("u", sorted(CHI_ORACLE))
def test_chi_u_oracle(u):
    assert hw.chi_u(P, u, 1e-12) == pytest.approx(CHI_ORACLE[u], rel=1e-11)


def test_chi_u_below_marginal_tail_and_decreasing():
    c = [hw.chi_u(P, u) for u in (10.0, 25.0, 50.0)]
    assert all(v < -u for v, u in zip(c, (10.0, 25.0, 50.0)))
    assert c[0] > c[1] > c[2]


def test_chi_u_threshold_too_low():
    with pytest.raises(ThresholdTooLow):
        hw.chi_u(P, 1.0)


def test_x_threshold_hits_level():
    # exact inversion while the spliced tail can still reach exp(-u)
    for u in (3.0, 6.0, 8.0):
        assert hw.x_logsf(P, hw.x_threshold(P, u)) == pytest.approx(-u, rel=1e-9)


def test_x_threshold_weibull_tail_beyond_ten():
    for u in (12.0, 30.0):
        assert hw.x_threshold(P, u) == pytest.approx(P.lam * u ** (1 / P.k), rel=1e-15)
