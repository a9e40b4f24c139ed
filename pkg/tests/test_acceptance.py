"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria 7 and 8 are known to fail at desk scale (the asymptotic regime is
reached far beyond the levels checked); they are kept at full strength.
"""
from __future__ import annotations

import math
import time

import numpy as np
import pytest
from scipy import stats

from condextremes import empirical, ht_model, hw_model, invlogistic, laplace_engine
from condextremes.cli import laplace_rows
from condextremes.errors import DeltaTooSmall, SmoothnessViolation
from condextremes.ht_model import HtCase, HtParams
from condextremes.margins import ProbLevel, laplace_logsf

TABLE_S1 = hw_model.hw_table_s1()
N_GRID = (1e2, 1e4, 1e6)

# seeds fixed before any result was looked at
FIG4_SEED = 2023
SIM_SEED = 12345


def test_c01_laplace_example_power(report):
    t0 = time.perf_counter()
    worst = 0.0
    for p in (1, 2, 3):
        for n, val, ref in laplace_rows(1, N_GRID, p=p):
            worst = max(worst, abs(val - ref))
    dt = time.perf_counter() - t0
    ok = report(1, worst <= 1e-6 and dt < 1.0, f"max |err| = {worst:.2e}, {dt:.2f} s")
    assert ok


def test_c02_laplace_example_linear_quadratic(report):
    rows = laplace_rows(2, N_GRID)
    worst = max(abs(val / ref - 1) for _, val, ref in rows)
    n6 = [val for n, val, _ in rows if n == 1e6][0]
    conv = abs(n6 / math.sqrt(math.pi) - 1)
    ok = report(2, worst <= 1e-9 and conv <= 1e-3,
                f"max rel err = {worst:.2e}, |I(1e6)/sqrt(pi) - 1| = {conv:.2e}")
    assert ok


def test_c03_laplace_example_gamma(report):
    rng = np.random.default_rng(20231)
    worst = 0.0
    for a, b in zip(rng.uniform(1, 50, 10), rng.uniform(0.1, 10, 10)):
        (_, val, ref), = laplace_rows(3, [1.0], alpha_fn=lambda n, a=a: a, beta_fn=lambda n, b=b: b)
        worst = max(worst, abs(math.log(val) - math.log(ref)))
    ok = report(3, worst <= 1e-6, f"max |log err| = {worst:.2e} over 10 (alpha, beta) draws")
    assert ok


def test_c04_lower_bound_harness(report):
    families = [
        laplace_engine.power_family(2),
        laplace_engine.linear_quadratic_family(),
        laplace_engine.gamma_family(lambda n: n, lambda n: 1.0),
    ]
    all_ok = True
    for fam in families:
        reps = laplace_engine.check_lower_bound_sequence(fam, N_GRID)
        all_ok &= all(r.bound_ok for r in reps)
    raised = False
    try:
        laplace_engine.check_lower_bound_sequence(laplace_engine.linear_quadratic_family(), N_GRID, k0=1)
    except SmoothnessViolation:
        raised = True
    ok = report(4, all_ok and raised, f"bounds hold: {all_ok}, forced k0=1 rejected: {raised}")
    assert ok


def test_c05_hw_closed_form(report):
    e = hw_model.eta_closed(TABLE_S1).eta
    d = hw_model.validate(TABLE_S1)
    ok = report(5, abs(e - 1 / 26) < 1e-15 and abs(d.mass - 1) < 5e-3 and d.density_gap_rel < 1e-2,
                f"eta = {e!r}, mass = {d.mass:.5f}, gap = {d.density_gap_rel:.2e}")
    assert ok


def _mode_gap(p, y):
    r = hw_model.integrand_modes(p, y)
    return max(abs(r.asymptotic_x_star / r.x_star - 1), abs(r.asymptotic_x_star2 / r.x_star2 - 1))


def test_c06_hw_integrand_modes(report):
    t0 = time.perf_counter()
    shape_ok = True
    for y in (40.0, 50.0, 100.0):
        r = hw_model.integrand_modes(TABLE_S1, y)
        shape_ok &= (r.n_maxima == 2 and r.x_min is not None and r.x_star < r.x_min < r.x_star2
                     and r.log_g_star > r.log_g_star2)
    g3, g6 = _mode_gap(TABLE_S1, 1e3), _mode_gap(TABLE_S1, 1e6)
    dt = time.perf_counter() - t0
    ok = report(6, shape_ok and g6 < g3 and dt < 10,
                f"two maxima + one minimum: {shape_ok}, gap 1e3 = {g3:.3f}, 1e6 = {g6:.3f}, {dt:.1f} s")
    assert ok


def _ratio(p, ly):
    s = hw_model.survival_logy(p, ly)
    return -s * 2 * (p.sigma0 + p.sigma1) / (ly * ly - 2 * p.mu0 * ly)


def test_c07_hw_survival_rate(report):
    r10, r50 = _ratio(TABLE_S1, 10.0), _ratio(TABLE_S1, 50.0)
    ok = report(7, 0.85 < r50 < 1.05 and abs(r50 - 1) < abs(r10 - 1),
                f"R(10) - 1 = {r10 - 1:+.5f}, R(50) - 1 = {r50 - 1:+.5f} (known red, see notes)")
    assert ok


def test_c08_hw_eta_slope(report):
    t0 = time.perf_counter()
    c = {u: hw_model.chi_u(TABLE_S1, u) for u in (25.0, 50.0, 100.0, 150.0)}
    hi = -(c[150.0] - c[100.0]) / 50
    lo = -(c[50.0] - c[25.0]) / 25
    dt = time.perf_counter() - t0
    ok = report(8, abs(hi - 26) <= 0.15 * 26 and abs(hi - 26) < abs(lo - 26) and dt < 60,
                f"slope(100,150) = {hi:.3f}, slope(25,50) = {lo:.3f}, {dt:.1f} s (known red, see notes)")
    assert ok


def test_c09_c0_solver(report):
    rng = np.random.default_rng(909)
    worst = 0.0
    for a, g, d in zip(rng.uniform(0.05, 0.95, 200), rng.uniform(0.1, 5, 200), rng.uniform(1.5, 10, 200)):
        c = ht_model.solve_c0(a, g, d)
        worst = max(worst, abs(ht_model.c0_residual(a, g, d, c)))
    err = abs(ht_model.solve_c0(0.5, 1.0, 2.0) - math.sqrt(0.8))
    ok = report(9, worst <= 1e-12 and err <= 1e-10, f"max residual = {worst:.2e}, |c0 - sqrt(0.8)| = {err:.2e}")
    assert ok


def test_c10_table_continuity(report):
    # rows 3/4 at gamma = 1/alpha
    p = HtParams(0.4, 0.0, 1 / 0.4, 1.0)
    d34 = abs(ht_model.eta_row(p, HtCase(3)) - ht_model.eta_row(p, HtCase(4)))
    # rows 6/7 at gamma = (1 - beta)/beta
    b = 0.4
    p = HtParams(0.0, b, (1 - b) / b, 1 / (1 - b))
    d67 = abs(ht_model.eta_row(p, HtCase(6)) - ht_model.eta_row(p, HtCase(7)))
    # row 2 across boundary_fn = 1: (alpha, beta) = (0.5, 0.5), delta = 2, gamma = 4/3
    p = HtParams(0.5, 0.5, 4 / 3, 2.0)
    c0 = ht_model.solve_c0(p.alpha, p.gamma, p.delta)
    d2 = abs(ht_model.eta_row(p, HtCase(2, c=1.0, c0=c0)) - ht_model.eta_row(p, HtCase(2, c=c0, c0=c0)))
    below = ht_model.eta(HtParams(0.5, 0.5, 4 / 3 * (1 - 1e-13), 2.0)).eta
    above = ht_model.eta(HtParams(0.5, 0.5, 4 / 3 * (1 + 1e-13), 2.0)).eta
    d2 = max(d2, abs(below - above))
    worst = max(d34, d67, d2)
    ok = report(10, worst <= 1e-10, f"|d eta| rows 3/4 = {d34:.1e}, 6/7 = {d67:.1e}, row 2 = {d2:.1e}")
    assert ok


def _eta_grid(g):
    grid = np.round(np.arange(0, 0.951, 0.05), 10)
    return np.array([[ht_model.eta(HtParams(a, b, g, 1 / (1 - b))).eta for b in grid] for a in grid])


def test_c11_fig3_monotone(report):
    worst = 0.0
    for g in (1.0, 1.5, 2.0, 5.0):
        e = _eta_grid(g)
        worst = min(worst, np.diff(e, axis=0).min(), np.diff(e, axis=1).min())
    ok = report(11, worst >= -1e-9, f"most negative step = {worst:.2e}")
    assert ok


def test_c12_fig2_regions(report):
    mids = (np.arange(40) + 0.5) / 40
    agree = total = 0
    for g in (1.0, 1.5, 2.0, 5.0):
        for a in mids:
            for b in mids:
                d = 1 / (1 - b)
                agree += (ht_model.boundary_fn(a, g, d) < 1) == (ht_model.solve_c0(a, g, d) < 1)
                total += 1
    ok = report(12, agree == total, f"{agree}/{total} grid cells agree")
    assert ok


def test_c13_fig4(report):
    t0 = time.perf_counter()
    xi = 0.35
    target = 2.0**-xi
    p_ht = invlogistic.ht_limit(xi, u_thr=1.0)
    e200 = ht_model.eta_at(p_ht, ProbLevel(200.0), margin="exponential")
    cross = ht_model.crossing_level(p_ht, target, (2.0, 50.0), margin="exponential")
    sample = invlogistic.simulate(xi, 10_000, FIG4_SEED)
    hits = 0
    for p in (0.9, 0.95, 0.99):
        est = empirical.eta_hat(sample, ProbLevel.from_p(p))
        hits += est.ci_lo <= target <= est.ci_hi
    dt = time.perf_counter() - t0
    ok = report(13, abs(e200 - 1 / 1.35) <= 0.005 and 6.5 < cross < 8.5 and hits >= 2 and dt < 120,
                f"eta_HT(200) = {e200:.5f}, crossing u* = {cross:.3f}, CI hits {hits}/3 (seed {FIG4_SEED}), {dt:.1f} s")
    assert ok


def test_c14_delta_bound(report):
    rejected = False
    try:
        HtParams(0.5, 0.5, 1.0, 1.5)
    except DeltaTooSmall:
        rejected = True
    accepted = True
    for xi in np.round(np.arange(0.1, 0.91, 0.1), 10):
        try:
            invlogistic.ht_limit(float(xi))
        except DeltaTooSmall:
            accepted = False
    ok = report(14, rejected and accepted, f"rejects (0.5, 0.5, 1, 1.5): {rejected}, accepts ht_limit: {accepted}")
    assert ok


def test_c15_simulator(report):
    n = 100_000
    s = invlogistic.simulate(1.0, n, SIM_SEED)
    cdf = lambda v: -np.expm1(laplace_logsf(v))
    ks = [stats.kstest(v, cdf).statistic for v in (s.x, s.y)]
    ks_crit = 1.628 / math.sqrt(n)  # 1% level
    ph = np.mean((s.x > 0) & (s.y > 0))
    z0 = (ph - 0.25) / math.sqrt(0.25 * 0.75 / n)
    t1, t2 = invlogistic.simulate_t(0.35, n, SIM_SEED)
    pt = math.exp(-(2.0**0.35))
    z1 = (np.mean((t1 > 1) & (t2 > 1)) - pt) / math.sqrt(pt * (1 - pt) / n)
    ok = report(15, max(ks) < ks_crit and abs(z0) <= 4 and abs(z1) <= 4,
                f"KS = {ks[0]:.4f}, {ks[1]:.4f} (< {ks_crit:.4f}), z(0,0) = {z0:+.2f}, z_t(1,1) = {z1:+.2f}")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
