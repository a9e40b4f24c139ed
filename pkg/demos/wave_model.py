"""Significant wave height and wave period under the Haver-Winterstein model.

With the northern North Sea estimates the pair is asymptotically
independent with ``eta = 1/26``, but the marginal tail of the period ``Y``
comes from a mixture integral whose integrand splits into two peaks for
large ``y``.  This script prints the peak structure, the marginal tail and
the joint tail, and shows how slowly the finite-level slope approaches 26.

Run: ``python demos/wave_model.py``  (about 10 s)
"""
import math

from condextremes import hw_model as hw

p = hw.hw_table_s1()
d = hw.validate(p)
print(f"splice check: mass {d.mass:.5f}, density gap {d.density_gap_rel:.2e}, ok={d.ok}")
print(f"closed form: eta = {hw.eta_closed(p).eta:.6f} (1/26 = {1 / 26:.6f})\n")

print("maxima of log g_y (numeric vs leading-order formula)")
for y in (10.0, 20.0, 50.0, 100.0, 1e3, 1e6):
    r = hw.integrand_modes(p, y)
    if r.bimodal:
        print(f"  y={y:>9g}  x*={r.x_star:8.4f} ({r.asymptotic_x_star:8.4f})  min={r.x_min:8.3f}"
              f"  x**={r.x_star2:8.3f} ({r.asymptotic_x_star2:8.3f})")
    else:
        print(f"  y={y:>9g}  single maximum at {r.x_star:.4f}")

print("\nmarginal tail of Y: numeric / two-term asymptotic")
for ly in (5.0, 10.0, 20.0, 50.0, 100.0):
    s = hw.survival_logy(p, ly)
    a = -(ly * ly - 2 * p.mu0 * ly) / (2 * (p.sigma0 + p.sigma1))
    print(f"  log y={ly:>5g}  log P(Y>y)={s:14.4f}  ratio={s / a:.5f}")

print("\nslope of -log P(X_E > u, Y_E > u); the limit is 26")
c = {u: hw.chi_u(p, u) for u in (25.0, 50.0, 100.0, 150.0)}
print(f"  over (25, 50):   {-(c[50.0] - c[25.0]) / 25:.3f}")
print(f"  over (100, 150): {-(c[150.0] - c[100.0]) / 50:.3f}")
