"""Laplace approximation when the classic assumptions fail.

Three families where the textbook second-order expansion is either exact,
wrong by a constant, or needs a moving mode:

* ``-n x^p`` on ``[0, inf)``: the mode sits on the boundary and, for ``p > 2``,
  has zero curvature.  ``n^(1/p) int = Gamma(1/p + 1)`` for every ``n``.
* ``-x - n x^2``: the first derivative at the boundary mode is nonzero, yet the
  quadratic term still drives the limit.  Forcing ``k0 = 1`` breaks the
  smoothness condition.
* ``alpha_n log x - beta_n x``: an interior mode that moves with ``n``.

Run: ``python demos/laplace_examples.py``
"""
import math

from condextremes import laplace_engine as le
from condextremes.cli import laplace_rows
from condextremes.errors import SmoothnessViolation

N = [1e2, 1e4, 1e6]

print("power family, n^(1/p)-normalised integral vs Gamma(1/p + 1)")
for p in (1, 2, 3):
    for n, val, ref in laplace_rows(1, N, p=p):
        print(f"  p={p} n={n:>9.0f}  {val:.15f}  err={abs(val - ref):.1e}")

print("\nsqrt(n) int_R exp(-x - n x^2) dx -> sqrt(pi)")
for n, val, ref in laplace_rows(2, N):
    print(f"  n={n:>9.0f}  {val:.12f}  exact={ref:.12f}  sqrt(pi)={math.sqrt(math.pi):.12f}")

print("\nlower-bound harness on -x - n x^2")
for r in le.check_lower_bound_sequence(le.linear_quadratic_family(), N):
    print(f"  n={r.n:>9.0f}  k0={r.k0}  scaled={r.scaled_integral:.6f}  C1={r.lower_bound:.6f}"
          f"  ratio={r.smoothness_ratio:.3f}")
try:
    le.check_lower_bound_sequence(le.linear_quadratic_family(), N, k0=1)
except SmoothnessViolation as exc:
    print(f"  forcing k0=1: {exc}")

print("\nmoving interior mode, alpha_n = n, beta_n = 1 (limit sqrt(2 pi) = 2.506628...)")
for r in le.check_lower_bound_sequence(le.gamma_family(lambda n: n, lambda n: 1.0), N):
    print(f"  n={r.n:>9.0f}  x*={r.x_star:>9.0f}  scaled={r.scaled_integral:.10f}  ratio={r.smoothness_ratio:.4f}")
