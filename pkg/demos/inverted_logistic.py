"""Finite-level eta of a Heffernan-Tawn fit versus the truth.

The inverted logistic law with ``xi = 0.35`` has ``eta(p) = 2^-0.35`` at every
level.  Its Heffernan-Tawn limit ``(0, 0.65, 0.35, 1/0.35)`` has
``eta = 1/1.35`` and reaches it only slowly, crossing the true value near
``u = 7.4``.  A simulated sample and its Clopper-Pearson bands complete the
picture.  The HT curve is evaluated with both thresholds at ``u`` on the
exponential scale; the Laplace-quantile convention is shown for comparison.

Run: ``python demos/inverted_logistic.py``
"""
from condextremes import empirical, ht_model, invlogistic
from condextremes.margins import ProbLevel

XI, SEED, N = 0.35, 2023, 10_000
truth = invlogistic.eta_exact(XI).eta
p_ht = invlogistic.ht_limit(XI, u_thr=1.0)
print(f"true eta = {truth:.5f}, HT limit eta = {ht_model.eta(p_ht).eta:.5f}")
for margin in ("exponential", "laplace"):
    u = ht_model.crossing_level(p_ht, truth, (2.0, 50.0), margin)
    print(f"crossing ({margin} cut): u* = {u:.4f}")

sample = invlogistic.simulate(XI, N, SEED)
print(f"\n   u       p    eta_HT(p)  eta_hat   95% CI            m_joint")
for p in (0.8, 0.9, 0.95, 0.99, 0.995):
    lv = ProbLevel.from_p(p)
    e_ht = ht_model.eta_at(p_ht, lv, margin="exponential")
    est = empirical.eta_hat(sample, lv)
    print(f"{lv.u:6.3f}  {p:6.3f}  {e_ht:9.5f}  {est.eta_hat:8.5f}  ({est.ci_lo:.4f}, {est.ci_hi:.4f})"
          f"  {est.m_joint:6d}")
print(f"\nu = 200: eta_HT(p) = {ht_model.eta_at(p_ht, ProbLevel(200.0), margin='exponential'):.5f}"
      f" (limit {1 / 1.35:.5f})")
