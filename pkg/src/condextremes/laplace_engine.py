"""Executable checks of the classic Laplace approximation and its extension.

The extension bounds ``int_I exp(g_n - g_n(x*)) dx * [-g_n^(k0)(x*)]^(1/k0)``
from below for a sequence of log-integrands ``g_n`` whose mode may move with
``n``, sit on the boundary of ``I``, or have vanishing curvature.  Here each
hypothesis is evaluated at finite ``n``: the engine locates the mode, picks
``k0``, computes the scaled integral by log-domain quadrature, and reports the
derivative ratio that has to stay below 3/2 near the mode.  A finite-``n``
ratio is evidence for the asymptotic hypothesis, not a proof of it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence

import numpy as np

from . import numerics
from .errors import NoNegativeDerivative, NonNegativeCurvature, SmoothnessViolation

SMOOTHNESS_LIMIT = 1.5


@dataclass(frozen=True)
class IntegrandFamily:
    """A sequence of log-integrands ``g(n, x)`` on a common interval.

    ``g`` should accept a numpy array for ``x``.  ``deriv(n, x, order)``
    supplies analytic derivatives; without it, Richardson finite differences
    of ``g`` are used (which assumes ``g`` extends smoothly a little past a
    finite endpoint).  ``mode(n)`` may give the maximiser directly; otherwise
    it is located with :func:`numerics.maximize` over ``search`` (defaults to
    the domain, infinite ends clipped).  ``centered(n, x)``, when given,
    returns ``g(n, x) - g(n, x*)`` without the cancellation of the plain
    difference (it matters once ``|g|`` reaches 1e7 or so).
    """

    g: Callable
    domain: tuple[float, float]
    deriv: Optional[Callable] = None
    mode: Optional[Callable] = None
    search: Optional[tuple[float, float]] = None
    name: str = ""
    centered: Optional[Callable] = None

    def derivative(self, n: float, x: float, order: int) -> float:
        if self.deriv is not None:
            return float(self.deriv(n, x, order))
        return numerics.finite_diff_deriv(lambda t: float(self.g(n, np.array([t]))[0]), x, order)


@dataclass(frozen=True)
class LaplaceReport:
    n: float
    x_star: float
    k0: int
    log_integral: float          # log of int_I exp(g_n - g_n(x*)) dx
    scaled_integral: float       # the integral times [-g_n^(k0)(x*)]^(1/k0)
    smoothness_ratio: float
    boundary_mode: bool
    lower_order_terms: tuple = ()  # |g_n^(i)(x*)| [-g_n^(k0)(x*)]^(-i/k0), i < k0
    lower_bound: Optional[float] = None
    bound_ok: Optional[bool] = None

    @property
    def scale(self) -> float:
        """``[-g_n^(k0)(x*)]^(1/k0)``."""
        return self.scaled_integral / math.exp(self.log_integral)


def classic_laplace(g: Callable[[float], float], g2: float, x_star: float, n: float) -> float:
    """``log[exp(n g(x*)) sqrt(2 pi / (n |g''(x*)|))]``."""
    if not g2 < 0:
        raise NonNegativeCurvature(f"g''(x*)={g2!r} must be negative")
    return n * float(g(x_star)) + 0.5 * math.log(2 * math.pi / (n * -g2))


# ---------------------------------------------------------------------------

def _locate_mode(fam: IntegrandFamily, n: float) -> tuple[float, bool]:
    lo, hi = fam.domain
    if fam.mode is not None:
        x = float(fam.mode(n))
    else:
        window = fam.search or fam.domain
        maxima = numerics.maximize(lambda t: fam.g(n, t), window)
        if not maxima:
            raise NoNegativeDerivative("no maximum found in the search window")
        x = max(maxima, key=lambda m: m[1])[0]
    tol = 1e-12 * max(1.0, abs(x))
    on_boundary = (math.isfinite(lo) and abs(x - lo) <= tol) or (math.isfinite(hi) and abs(x - hi) <= tol)
    return x, on_boundary


def _ratio_grid(fam, n, x_star, k0, dk0, delta, n_grid=33):
    """Max of ``g^(k0)(x* + t s^-1) / g^(k0)(x*)`` over ``|t| < delta`` inside the domain."""
    lo, hi = fam.domain
    s = (-dk0) ** (1.0 / k0)
    ratios = []
    for t in np.linspace(-delta, delta, n_grid):
        x = x_star + t / s
        if not lo <= x <= hi or (x in (lo, hi) and x != x_star):
            continue
        ratios.append(fam.derivative(n, x, k0) / dk0)
    return max(ratios)


def _derivs(fam, n, x_star, max_order):
    return [fam.derivative(n, x_star, i) for i in range(1, max_order + 1)]


def detect_k0(
    fam: IntegrandFamily,
    n: float,
    max_order: int = 4,
    *,
    delta: float = 1.0,
    tol_neg: float = 1e-8,
) -> tuple[float, int]:
    """Mode ``x*`` and order ``k0`` for which the extension applies at ``n``.

    Orders are tried upwards (from 1 at a boundary mode, from 2 at an interior
    one, where the first derivative vanishes).  An order qualifies when
    ``g_n^(k)(x*)`` is below ``-tol_neg * scale`` and the derivative ratio over
    the ``delta`` neighbourhood stays below 3/2; so ``-x - n x^2`` on
    ``[0, inf)`` skips ``k0 = 1`` (its ratio grows like ``2n``) and lands on 2.
    """
    if max_order not in (1, 2, 3, 4):
        raise ValueError("max_order must be in 1..4")
    x_star, boundary = _locate_mode(fam, n)
    d = _derivs(fam, n, x_star, max_order)
    scale = max(1.0, max(abs(v) for v in d))
    start = 1 if boundary else 2
    for k in range(start, max_order + 1):
        dk = d[k - 1]
        if dk < -tol_neg * scale:
            if _ratio_grid(fam, n, x_star, k, dk, delta) < SMOOTHNESS_LIMIT:
                return x_star, k
    raise NoNegativeDerivative(
        f"no derivative order <= {max_order} is negative with a valid neighbourhood at x*={x_star!r}"
    )


def scaled_integral(
    fam: IntegrandFamily,
    n: float,
    *,
    k0: Optional[int] = None,
    delta: float = 1.0,
    rel_tol: float = 1e-10,
) -> LaplaceReport:
    """Evaluate the scaled integral and the smoothness ratio at index ``n``.

    ``k0`` forces the derivative order instead of detecting it.
    """
    if k0 is None:
        x_star, k0 = detect_k0(fam, n, delta=delta)
        _, boundary = _locate_mode(fam, n)
    else:
        x_star, boundary = _locate_mode(fam, n)
    dk0 = fam.derivative(n, x_star, k0)
    if not dk0 < 0:
        raise NoNegativeDerivative(f"g^({k0})(x*)={dk0!r} is not negative")
    s = (-dk0) ** (1.0 / k0)
    if fam.centered is not None:
        rel = lambda x: fam.centered(n, x)
    else:
        g_star = float(fam.g(n, np.array([x_star]))[0])
        rel = lambda x: fam.g(n, x) - g_star
    lo, hi = fam.domain
    log_int = numerics.integrate_log(
        rel,
        (lo, hi),
        rel_tol,
        points=[x_star, x_star - 8.0 / s, x_star + 8.0 / s],
        scale=4.0 / s,
    )
    ratio = _ratio_grid(fam, n, x_star, k0, dk0, delta)
    lower = tuple(
        abs(fam.derivative(n, x_star, i)) * (-dk0) ** (-i / k0) for i in range(1, k0)
    )
    return LaplaceReport(
        n=float(n),
        x_star=x_star,
        k0=k0,
        log_integral=log_int,
        scaled_integral=math.exp(log_int) * s,
        smoothness_ratio=ratio,
        boundary_mode=boundary,
        lower_order_terms=lower,
    )


def constructive_constant(k0: int, epsilon: float, delta: float, boundary: str | None = None) -> float:
    """``exp(-eps e^delta) * int_{(-delta, delta) cap I'} exp(-3|y|^k0 / (2 k0!)) dy``.

    ``boundary`` is ``"lower"`` / ``"upper"`` when the mode sits on that end of
    the interval, so the rescaled domain only covers one side of zero.
    """
    lo, hi = -delta, delta
    if boundary == "lower":
        lo = 0.0
    elif boundary == "upper":
        hi = 0.0
    c = 3.0 / (2.0 * math.factorial(k0))
    log_int = numerics.integrate_log(lambda y: -c * np.abs(y) ** k0, (lo, hi), 1e-12, points=[0.0])
    return math.exp(-epsilon * math.exp(delta) + log_int)


def check_lower_bound_sequence(
    fam: IntegrandFamily,
    n_list: Sequence[float],
    *,
    k0: Optional[int] = None,
    delta: float = 1.0,
) -> list[LaplaceReport]:
    """Run :func:`scaled_integral` along ``n_list`` and compare with the constant.

    Raises :class:`SmoothnessViolation` when some ratio reaches 3/2.  Each
    returned report carries the constructive lower bound and whether its scaled
    integral clears it.
    """
    n_list = list(n_list)
    if len(n_list) < 3 or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError("n_list must be increasing with at least three entries")
    reports = [scaled_integral(fam, n, k0=k0, delta=delta) for n in n_list]
    for r in reports:
        if not r.smoothness_ratio < SMOOTHNESS_LIMIT:
            raise SmoothnessViolation(
                f"derivative ratio {r.smoothness_ratio:.6g} >= 3/2 at n={r.n:g} (k0={r.k0})"
            )
    eps = max((max(r.lower_order_terms) if r.lower_order_terms else 0.0) for r in reports)
    out = []
    lo, hi = fam.domain
    for r in reports:
        side = None
        if r.boundary_mode:
            side = "lower" if math.isfinite(lo) and abs(r.x_star - lo) <= abs(r.x_star - hi) else "upper"
        c1 = constructive_constant(r.k0, eps, delta, side)
        out.append(replace(r, lower_bound=c1, bound_ok=r.scaled_integral >= c1))
    return out


# ---------------------------------------------------------------------------
# the three worked families
# ---------------------------------------------------------------------------

def power_family(p: int) -> IntegrandFamily:
    """``g_n(x) = -n x^p`` on ``[0, inf)``; ``n^(1/p) int = Gamma(1/p + 1)`` exactly."""

    def g(n, x):
        return -n * np.asarray(x, dtype=float) ** p

    def deriv(n, x, order):
        if order > p:
            return 0.0
        return -n * math.perm(p, order) * x ** (p - order)

    return IntegrandFamily(g=g, domain=(0.0, math.inf), deriv=deriv, mode=lambda n: 0.0, name=f"-n x^{p}")


def linear_quadratic_family(whole_line: bool = False) -> IntegrandFamily:
    """``g_n(x) = -x - n x^2`` on ``[0, inf)`` (or on the whole line)."""

    def g(n, x):
        x = np.asarray(x, dtype=float)
        return -x - n * x * x

    def deriv(n, x, order):
        return {1: -1.0 - 2.0 * n * x, 2: -2.0 * n}.get(order, 0.0)

    if whole_line:
        return IntegrandFamily(
            g=g, domain=(-math.inf, math.inf), deriv=deriv, mode=lambda n: -0.5 / n, name="-x - n x^2 on R"
        )
    return IntegrandFamily(g=g, domain=(0.0, math.inf), deriv=deriv, mode=lambda n: 0.0, name="-x - n x^2")


def gamma_family(alpha: Callable[[float], float], beta: Callable[[float], float]) -> IntegrandFamily:
    """``g_n(x) = alpha_n log x - beta_n x`` on ``(0, inf)``, mode ``alpha_n / beta_n``."""

    def g(n, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return alpha(n) * np.log(x) - beta(n) * x

    def deriv(n, x, order):
        a = alpha(n)
        if order == 1:
            return a / x - beta(n)
        return a * (-1) ** (order - 1) * math.factorial(order - 1) / x**order

    def centered(n, x):
        # a (log t - (t - 1)) with t = x / x*
        a = alpha(n)
        d = np.asarray(x, dtype=float) * (beta(n) / a) - 1.0
        with np.errstate(divide="ignore"):
            return a * (np.log1p(d) - d)

    return IntegrandFamily(
        g=g, domain=(0.0, math.inf), deriv=deriv, mode=lambda n: alpha(n) / beta(n),
        name="a_n log x - b_n x", centered=centered,
    )
