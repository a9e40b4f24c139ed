"""Haver-Winterstein conditional model for significant wave height and period.

``X`` has a log-normal body spliced to a Weibull tail at ``u_thr``; given
``X = x``, ``log Y`` is normal with median curve ``mu0 + mu1 x^mu2`` and
variance ``sigma0 + sigma1 exp(-sigma2 x)``.  The marginal tail of ``Y`` is
the mixture integral of the conditional survival against ``f_X``; its
integrand is bimodal for large ``y``, which is why mode finding and domain
splitting come before any quadrature here.

With ``0 < mu2 < 1/2`` and ``2 mu2 < k`` the pair is asymptotically
independent with ``eta = 1 / (2 + sigma1/sigma0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np
from scipy import optimize, special

from . import numerics
from .errors import NonPositive, NonPositiveX, OutsideRestrictedSpace, ThresholdTooLow
from .margins import DependenceSummary, ProbLevel
from .paramfile import read_param_file, write_param_file

_LOG_SQRT_2PI = 0.5 * math.log(2 * math.pi)


@dataclass(frozen=True)
class HwParams:
    alpha: float    # log-normal scale
    theta: float    # log-normal location
    u_thr: float    # splice point
    k: float        # Weibull shape
    lam: float      # Weibull scale (``lambda`` in parameter files)
    mu0: float
    mu1: float
    mu2: float
    sigma0: float
    sigma1: float
    sigma2: float
    renormalize: bool = False

    def __post_init__(self):
        for name in ("alpha", "u_thr", "k", "lam", "mu1", "mu2", "sigma0", "sigma1", "sigma2"):
            if not getattr(self, name) > 0:
                raise NonPositive(f"{name} must be positive, got {getattr(self, name)!r}")

    @property
    def restricted(self) -> bool:
        """True inside ``0 < mu2 < 1/2, 2 mu2 < k`` where the closed form holds."""
        return 0 < self.mu2 < 0.5 and 2 * self.mu2 < self.k

    @property
    def log_mass(self) -> float:
        """Log normalising constant subtracted when ``renormalize`` is set."""
        return math.log(validate(self).mass) if self.renormalize else 0.0

    @classmethod
    def from_dict(cls, values: dict, renormalize: bool = False) -> "HwParams":
        kwargs = {("lam" if k == "lambda" else k): float(v) for k, v in values.items()}
        return cls(**kwargs, renormalize=renormalize)

    @classmethod
    def from_file(cls, path, renormalize: bool = False) -> "HwParams":
        """Read the eleven ``name = value`` entries (``lambda`` for the Weibull scale)."""
        return cls.from_dict(read_param_file(path, PARAM_KEYS), renormalize)

    def to_dict(self) -> dict:
        return {("lambda" if f.name == "lam" else f.name): getattr(self, f.name)
                for f in fields(self) if f.name != "renormalize"}

    def to_file(self, path) -> None:
        write_param_file(path, self.to_dict())


PARAM_KEYS = (
    "alpha", "theta", "u_thr", "k", "lambda", "mu0", "mu1", "mu2", "sigma0", "sigma1", "sigma2",
)


def hw_table_s1(renormalize: bool = False) -> HwParams:
    """Northern North Sea estimates of the eleven parameters."""
    return HwParams(
        alpha=0.573, theta=0.893, u_thr=3.803, k=1.550, lam=2.908,
        mu0=1.134, mu1=0.892, mu2=0.225, sigma0=0.005, sigma1=0.120, sigma2=0.455,
        renormalize=renormalize,
    )


@dataclass(frozen=True)
class HwDiagnostics:
    mass: float
    density_gap_rel: float
    mass_tol: float = 5e-3
    continuity_tol: float = 1e-2

    @property
    def ok(self) -> bool:
        return abs(self.mass - 1.0) <= self.mass_tol and self.density_gap_rel <= self.continuity_tol


def _lognormal_logpdf(p: HwParams, x):
    lx = np.log(x)
    return -lx - math.log(p.alpha) - _LOG_SQRT_2PI - (lx - p.theta) ** 2 / (2 * p.alpha**2)


def _weibull_logpdf(p: HwParams, x):
    return math.log(p.k / p.lam) + (p.k - 1) * np.log(x / p.lam) - (x / p.lam) ** p.k


def validate(p: HwParams) -> HwDiagnostics:
    """Total mass and relative density jump at the splice point (report only)."""
    z = (math.log(p.u_thr) - p.theta) / p.alpha
    mass = float(special.ndtr(z)) + math.exp(-((p.u_thr / p.lam) ** p.k))
    f_ln = math.exp(float(_lognormal_logpdf(p, p.u_thr)))
    f_wb = math.exp(float(_weibull_logpdf(p, p.u_thr)))
    return HwDiagnostics(mass=mass, density_gap_rel=abs(f_ln - f_wb) / f_wb)


def log_density_x(p: HwParams, x):
    """Log of the spliced log-normal/Weibull density of ``X``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise NonPositiveX("X density is defined for x > 0 only")
    out = np.where(x <= p.u_thr, _lognormal_logpdf(p, x), _weibull_logpdf(p, x))
    if p.renormalize:
        out = out - p.log_mass
    return out[()] if out.ndim == 0 else out


def mu(p: HwParams, x):
    return p.mu0 + p.mu1 * np.asarray(x, dtype=float) ** p.mu2


def sigma(p: HwParams, x):
    return np.sqrt(p.sigma0 + p.sigma1 * np.exp(-p.sigma2 * np.asarray(x, dtype=float)))


def cond_logsf_y(p: HwParams, y: float, x):
    """``log P(Y > y | X = x)`` under the conditional log-normal law."""
    if not y > 0:
        raise NonPositive("y must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise NonPositive("x must be positive")
    return _cond_logsf(p, math.log(y), x)


def _cond_logsf(p: HwParams, log_y: float, x):
    return numerics.std_normal_logsf((log_y - mu(p, x)) / sigma(p, x))


def log_integrand(p: HwParams, y: float, x):
    """``log g_y(x) = log P(Y > y | X = x) + log f_X(x)``."""
    if not y > 0:
        raise NonPositive("y must be positive")
    return log_integrand_logy(p, math.log(y), x)


def log_integrand_logy(p: HwParams, log_y: float, x):
    """:func:`log_integrand` parametrised by ``log y`` (no overflow for huge ``y``)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise NonPositive("x must be positive")
    return _cond_logsf(p, log_y, x) + log_density_x(p, x)


# ---------------------------------------------------------------------------
# modes of the mixture integrand
# ---------------------------------------------------------------------------

def asymptotic_modes(p: HwParams, y: float) -> tuple[float, float]:
    """Leading-order locations of the small and large maxima of ``g_y``."""
    return _asymptotic_modes(p, math.log(y))


def _asymptotic_modes(p: HwParams, ly: float) -> tuple[float, float]:
    small = (p.sigma1 * p.sigma2 * ly / (2 * p.mu1 * p.mu2 * (p.sigma0 + p.sigma1))) ** (-1 / (1 - p.mu2))
    large = (p.lam**p.k * p.mu1 * p.mu2 * ly / (p.k * p.sigma0)) ** (1 / (p.k - p.mu2))
    return small, large


def asymptotic_local_min(p: HwParams, y: float) -> float:
    """Leading term ``log log y / sigma2`` of the interior minimum."""
    return math.log(math.log(y)) / p.sigma2


@dataclass(frozen=True)
class HwModeReport:
    y: float
    x_star: float
    x_min: Optional[float]
    x_star2: Optional[float]
    asymptotic_x_star: float
    asymptotic_x_star2: float
    log_g_star: float = math.nan
    log_g_star2: Optional[float] = None
    n_maxima: int = 1

    @property
    def bimodal(self) -> bool:
        return self.x_star2 is not None


def _search_window(p: HwParams, ly: float) -> tuple[float, float]:
    hi = 200.0
    if ly > 0:
        hi = max(hi, 3.0 * _asymptotic_modes(p, ly)[1])
    return 1e-8, hi


def integrand_modes(p: HwParams, y: float, n_seeds: int = 512) -> HwModeReport:
    """Numeric maxima/minimum of ``log g_y`` plus the asymptotic formulas.

    ``x_min`` and ``x_star2`` are ``None`` when ``g_y`` is unimodal.  A spurious
    extremum produced by the density jump at the splice point is not counted.
    """
    if not y > 0:
        raise NonPositive("y must be positive")
    return integrand_modes_logy(p, math.log(y), n_seeds)


def integrand_modes_logy(p: HwParams, ly: float, n_seeds: int = 512) -> HwModeReport:
    y = math.exp(ly) if ly < 709 else math.inf
    f = lambda x: log_integrand_logy(p, ly, x)
    maxima = [m for m in numerics.maximize(f, _search_window(p, ly), n_seeds) if not _at_splice(p, m[0])]
    a1, a2 = _asymptotic_modes(p, ly) if ly > 0 else (math.nan, math.nan)
    if not maxima:
        raise numerics.NoConvergence(f"no maximum of log g_y found for log y={ly!r}")
    x1, v1 = maxima[0]
    if len(maxima) == 1:
        return HwModeReport(y, x1, None, None, a1, a2, v1, None, 1)
    x2, v2 = maxima[1]
    minima = numerics.maximize(lambda x: -f(x), (x1, x2), 64)
    interior = [m for m in minima if x1 < m[0] < x2]
    xm = min(interior, key=lambda m: m[1])[0] if interior else None
    return HwModeReport(y, x1, xm, x2, a1, a2, v1, v2, len(maxima))


def _at_splice(p: HwParams, x: float) -> bool:
    return abs(x - p.u_thr) <= 1e-6 * p.u_thr


# ---------------------------------------------------------------------------
# marginal tail of Y
# ---------------------------------------------------------------------------

def survival_y(p: HwParams, y: float, rel_tol: float = numerics.DEFAULT_REL_TOL) -> float:
    """``log P(Y > y)`` by log-domain quadrature of the mixture integral."""
    if not y > 0:
        raise NonPositive("y must be positive")
    return survival_logy(p, math.log(y), rel_tol)


def survival_logy(p: HwParams, ly: float, rel_tol: float = numerics.DEFAULT_REL_TOL) -> float:
    """:func:`survival_y` parametrised by ``log y``."""
    rep = integrand_modes_logy(p, ly)
    pts = [p.u_thr, rep.x_star]
    if rep.bimodal:
        pts += [rep.x_min, rep.x_star2]
    return numerics.integrate_log(
        lambda x: log_integrand_logy(p, ly, x), (0.0, math.inf), rel_tol, points=[t for t in pts if t]
    )


def survival_y_asymptotic(p: HwParams, y: float) -> float:
    """Two retained terms ``-(log^2 y - 2 mu0 log y) / (2 (sigma0 + sigma1))``."""
    if not y > 1:
        raise NonPositive("the asymptotic form needs y > 1")
    ly = math.log(y)
    return -(ly * ly - 2 * p.mu0 * ly) / (2 * (p.sigma0 + p.sigma1))


def quantile_y(p: HwParams, level: ProbLevel, rel_tol: float = 1e-6) -> float:
    """``y`` with ``P(Y > y) = exp(-u)`` (see :func:`log_quantile_y`)."""
    return math.exp(log_quantile_y(p, level, rel_tol))


def log_quantile_y(p: HwParams, level: ProbLevel, rel_tol: float = 1e-6) -> float:
    """Root in ``log y`` of ``log P(Y > y) + u``.

    The bracket is grown from the asymptotic inverse ``sqrt(2 (sigma0 + sigma1) u)``;
    the unknown O(1) correction is left to the root search, which is run until
    ``|log P(Y > y) + u| <= rel_tol * u``.
    """
    u = level.u
    target = lambda ly: survival_logy(p, ly) + u
    seed = math.sqrt(2 * (p.sigma0 + p.sigma1) * u)
    lo, hi = 0.5 * seed, 1.5 * seed
    while target(lo) <= 0:
        lo -= max(1.0, abs(lo))
    while target(hi) >= 0:
        hi += max(1.0, hi)
    ly = optimize.brentq(target, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps)
    resid = target(ly)
    if abs(resid) > rel_tol * u:
        raise numerics.NoConvergence(f"quantile residual {resid:.3g} exceeds {rel_tol * u:.3g}")
    return ly


# ---------------------------------------------------------------------------
# joint exceedances and eta
# ---------------------------------------------------------------------------

def x_logsf(p: HwParams, x: float) -> float:
    """``log P(X > x)`` from the closed-form CDFs of both branches."""
    lm = p.log_mass
    if x > p.u_thr:
        # 1 - F_X(x) = (1 - mass) + S_Wb(x) unless renormalised
        if p.renormalize:
            return -((x / p.lam) ** p.k) - lm
        tail = -((x / p.lam) ** p.k)
        gap = 1.0 - validate(p).mass
        if gap >= 0:
            return float(np.logaddexp(tail, math.log(gap))) if gap > 0 else tail
        return float(numerics.log_sub(tail, math.log(-gap)))
    z = (math.log(x) - p.theta) / p.alpha
    below = float(special.ndtr(z)) * math.exp(-lm)
    return math.log1p(-below)


def x_threshold(p: HwParams, u: float) -> float:
    """``x`` with ``P(X > x) = exp(-u)`` on the Weibull branch.

    For ``u <= 10`` the exact spliced CDF is inverted when its tail can reach
    ``exp(-u)``; otherwise (and always beyond ``u = 10``) the Weibull survival
    ``(x / lam)^k = u`` is used, shifted by the log mass when renormalised.
    """
    weibull = p.lam * (u - p.log_mass) ** (1.0 / p.k)
    if u > 10 or p.renormalize:
        return weibull
    gap = 1.0 - validate(p).mass
    if gap >= math.exp(-u):
        return weibull
    s = math.exp(-u) - gap
    return p.lam * (-math.log(s)) ** (1.0 / p.k)


def chi_u(p: HwParams, u: float, rel_tol: float = numerics.DEFAULT_REL_TOL) -> float:
    """``log P(X_E > u, Y_E > u)`` with both margins on the exponential scale."""
    x_u = x_threshold(p, u)
    if not x_u > p.u_thr:
        raise ThresholdTooLow(f"x threshold {x_u:.6g} at u={u} is not above the splice point {p.u_thr}")
    ly_u = log_quantile_y(p, ProbLevel(u))
    f = lambda x: log_integrand_logy(p, ly_u, x)
    # the integrand is decreasing from the threshold for large u; cover any
    # interior maximum all the same
    pts = [m[0] for m in numerics.maximize(f, (x_u, 4 * x_u), 64)]
    return numerics.integrate_log(f, (x_u, math.inf), rel_tol, points=pts, scale=0.1 * x_u)


def eta_closed(p: HwParams) -> DependenceSummary:
    """``chi = 0`` and ``eta = 1 / (2 + sigma1 / sigma0)``."""
    if not p.restricted:
        raise OutsideRestrictedSpace(
            f"closed form needs 0 < mu2 < 0.5 and 2 mu2 < k (mu2={p.mu2}, k={p.k})"
        )
    return DependenceSummary(chi=0.0, eta=1.0 / (2.0 + p.sigma1 / p.sigma0), note="closed form")
