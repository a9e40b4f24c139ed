"""Exact Heffernan-Tawn model on Laplace margins.

Above a threshold ``u_thr`` the conditional law is

    P(Y > alpha x + x^beta z | X = x) = exp(-gamma z^delta),  z > 0,

and one otherwise.  Compatibility with a Laplace margin for ``Y`` forces
``delta >= 1 / (1 - beta)``; parameters violating it are rejected at
construction.  ``eta`` follows a seven-way case analysis on whether ``alpha``
and ``beta`` vanish and whether ``delta`` sits on its lower bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import numerics
from .errors import BelowThreshold, DeltaTooSmall, DomainError, EtaUndefined, Unclassifiable
from .margins import LOG2, DependenceSummary, ProbLevel, eta_from_joint, laplace_quantile
from .paramfile import read_param_file, write_param_file

BOUNDARY_TOL = 1e-12
DEFAULT_U_THR = 3.0
PARAM_KEYS = ("alpha", "beta", "gamma", "delta", "u_thr")


@dataclass(frozen=True)
class HtParams:
    alpha: float
    beta: float
    gamma: float
    delta: float
    u_thr: float = DEFAULT_U_THR

    def __post_init__(self):
        if not 0 <= self.alpha < 1:
            raise DomainError(f"alpha={self.alpha!r} must lie in [0, 1)")
        if not 0 <= self.beta < 1:
            raise DomainError(f"beta={self.beta!r} must lie in [0, 1)")
        if not self.gamma > 0:
            raise DomainError(f"gamma={self.gamma!r} must be positive")
        if not self.u_thr > 0:
            raise DomainError(f"u_thr={self.u_thr!r} must be positive")
        bound = self.delta_bound
        if not self.delta >= bound * (1 - BOUNDARY_TOL):
            raise DeltaTooSmall(self.delta, bound)

    @property
    def delta_bound(self) -> float:
        """``1 / (1 - beta)``."""
        return 1.0 / (1.0 - self.beta)

    @property
    def on_boundary(self) -> bool:
        """``delta == 1 / (1 - beta)`` up to :data:`BOUNDARY_TOL` (relative)."""
        b = self.delta_bound
        return abs(self.delta - b) <= BOUNDARY_TOL * b

    @classmethod
    def from_dict(cls, values: dict) -> "HtParams":
        missing = [k for k in PARAM_KEYS[:4] if k not in values]
        if missing:
            raise DomainError(f"missing HT parameters: {', '.join(missing)}")
        return cls(**{k: float(v) for k, v in values.items()})

    @classmethod
    def from_file(cls, path) -> "HtParams":
        return cls.from_dict(read_param_file(path, PARAM_KEYS, required=False))

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in PARAM_KEYS}

    def to_file(self, path) -> None:
        write_param_file(path, self.to_dict())


def validate(p: HtParams) -> HtParams:
    """Identity on valid parameters (construction already enforces the bound)."""
    if not p.delta >= p.delta_bound * (1 - BOUNDARY_TOL):
        raise DeltaTooSmall(p.delta, p.delta_bound)
    return p


def cond_logsf(p: HtParams, y, x):
    """``log P(Y > y | X = x)`` for ``x > u_thr``: ``-gamma z^delta`` or 0 when ``z <= 0``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= p.u_thr):
        raise BelowThreshold(f"conditional law is defined for x > u_thr={p.u_thr}")
    z = (np.asarray(y, dtype=float) - p.alpha * x) / x**p.beta
    out = np.where(z > 0, -p.gamma * np.maximum(z, 0.0) ** p.delta, 0.0)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# the c0 equation and the case table
# ---------------------------------------------------------------------------

def c0_residual(alpha: float, gamma: float, delta: float, c: float) -> float:
    """``gamma (1 - alpha c)^(delta-1) (delta - 1 + alpha c) - c^delta``."""
    return gamma * (1 - alpha * c) ** (delta - 1) * (delta - 1 + alpha * c) - c**delta


def boundary_fn(alpha: float, gamma: float, delta: float) -> float:
    """``gamma (1 - alpha)^(delta-1) (delta - 1 + alpha)``; below one exactly when ``c0 < 1``."""
    return gamma * (1 - alpha) ** (delta - 1) * (delta - 1 + alpha)


def solve_c0(alpha: float, gamma: float, delta: float) -> float:
    """Unique root of :func:`c0_residual` in ``(0, 1/alpha)``.

    The residual is ``gamma (delta - 1) > 0`` at zero and ``-alpha^-delta`` at
    ``1/alpha``.  Brent's root is polished by bisection down to two adjacent
    doubles, and the one with the smaller absolute residual is returned.
    """
    if not 0 < alpha < 1:
        raise DomainError(f"alpha={alpha!r} must lie in (0, 1)")
    if not gamma > 0:
        raise DomainError(f"gamma={gamma!r} must be positive")
    if not delta > 1:
        raise DomainError(f"delta={delta!r} must exceed 1")
    f = lambda c: c0_residual(alpha, gamma, delta, c)
    # f(c) <= gamma delta - c^delta, so the root never exceeds (gamma delta)^(1/delta)
    hi = min(1.0 / alpha, (gamma * delta) ** (1.0 / delta) * (1 + 1e-12))
    # 1 - alpha/alpha need not round to zero; step inside until the sign is right
    for _ in range(64):
        if f(hi) < 0:
            break
        hi = math.nextafter(hi, 0.0)
    else:
        return hi
    c = numerics.find_root(f, (0.0, hi))
    lo, up = c, c
    step = max(abs(c), 1e-300) * 1e-15
    while f(lo) < 0:
        lo = max(lo - step, 0.0)
        step *= 2
    step = max(abs(c), 1e-300) * 1e-15
    while f(up) > 0:
        up = min(up + step, hi)
        if up == hi:
            break
        step *= 2
    while True:
        mid = 0.5 * (lo + up)
        if not lo < mid < up:
            break
        if f(mid) > 0:
            lo = mid
        else:
            up = mid
    return min((lo, up), key=lambda t: abs(f(t)))


@dataclass(frozen=True)
class HtCase:
    row: int
    c: Optional[float] = None
    c0: Optional[float] = None

    @property
    def sub_case(self) -> Optional[str]:
        """``"2a"`` when ``c0 < 1`` (so ``c = 1``), ``"2b"`` otherwise; row 2 only."""
        if self.row != 2:
            return None
        return "2a" if self.c0 < 1 else "2b"


def classify(p: HtParams) -> HtCase:
    """Row of the seven-way case table."""
    if p.delta < p.delta_bound * (1 - BOUNDARY_TOL):
        raise Unclassifiable(f"delta={p.delta!r} is below 1/(1-beta); parameters were not validated")
    edge = p.on_boundary
    if p.alpha > 0:
        if not edge:
            return HtCase(1)
        # delta == 1 in floating point (tiny beta) is the beta = 0 limit of row 2
        if p.beta > 0 and p.delta > 1:
            c0 = solve_c0(p.alpha, p.gamma, p.delta)
            return HtCase(2, c=max(1.0, c0), c0=c0)
        return HtCase(3) if p.gamma > 1.0 / p.alpha else HtCase(4)
    if not edge:
        return HtCase(5)
    if p.beta == 0 or p.gamma <= (1 - p.beta) / p.beta:
        return HtCase(6)
    return HtCase(7)


def eta_row(p: HtParams, case: HtCase) -> Optional[float]:
    a, g, d = p.alpha, p.gamma, p.delta
    if case.row in (1, 3):
        return a
    if case.row == 2:
        c = case.c
        return 1.0 / (g * (1 - a * c) ** d / c ** (d - 1) + c)
    if case.row == 4:
        return 1.0 / (g + 1 - g * a)
    if case.row == 5:
        return None
    if case.row == 6:
        return 1.0 / (g + 1)
    if case.row == 7:
        return g ** (-1 / d) * (d - 1) ** (1 - 1 / d) / d
    raise Unclassifiable(f"unknown row {case.row}")


def eta(p: HtParams, *, strict: bool = False) -> DependenceSummary:
    """``chi = 0`` and ``eta`` from the case table.

    Row 5 has no ``eta``: the summary then carries ``eta=None`` with a note, or
    :class:`EtaUndefined` is raised when ``strict`` is set.
    """
    case = classify(p)
    value = eta_row(p, case)
    if value is None:
        if strict:
            raise EtaUndefined("eta is not defined when alpha = 0 and delta > 1/(1-beta) (row 5)")
        return DependenceSummary(chi=0.0, eta=None, note="row 5: eta not defined")
    return DependenceSummary(chi=0.0, eta=value, note=f"row {case.row}")


# ---------------------------------------------------------------------------
# joint survival and the finite-level curve
# ---------------------------------------------------------------------------

def _log_integrand(p: HtParams, q: float):
    a, b, g, d = p.alpha, p.beta, p.gamma, p.delta
    if a > 0:
        def f(x):
            x = np.asarray(x, dtype=float)
            z = np.maximum(q - a * x, 0.0) / x**b
            return -g * z**d - x
    else:
        lq = d * math.log(q)

        def f(x):
            x = np.asarray(x, dtype=float)
            return -g * np.exp(lq - b * d * np.log(x)) - x
    return f


def joint_logsf(p: HtParams, q: float, rel_tol: float = numerics.DEFAULT_REL_TOL) -> float:
    """``log P(X > q, Y > q)`` with a standard Laplace ``X`` and ``q >= u_thr``.

    For ``alpha > 0`` the integral over ``(q, q/alpha)`` is joined with the
    certain-exceedance part ``exp(-q/alpha) / 2`` beyond the kink.
    """
    if not q >= p.u_thr:
        raise BelowThreshold(f"q={q!r} is below u_thr={p.u_thr}")
    f = _log_integrand(p, q)
    if p.alpha > 0:
        hi = q / p.alpha
        pts = [x for x, _ in numerics.maximize(f, (q, hi), 64)]
        body = numerics.integrate_log(f, (q, hi), rel_tol, points=pts)
        return -LOG2 + float(np.logaddexp(body, -hi))
    bd = p.beta * p.delta
    if bd == 0:
        return -LOG2 - p.gamma * q**p.delta - q
    mode = (p.gamma * bd) ** (1.0 / (bd + 1)) * q ** (p.delta / (bd + 1))
    return -LOG2 + numerics.integrate_log(f, (q, math.inf), rel_tol, points=[mode], scale=1.0)


MARGINS = ("laplace", "exponential")


def eta_at(
    p: HtParams,
    level: ProbLevel,
    rel_tol: float = numerics.DEFAULT_REL_TOL,
    margin: str = "laplace",
) -> float:
    """Finite-level ``eta_HT(p)``.

    ``margin="laplace"`` cuts both coordinates at the Laplace quantile
    ``u - log 2``.  ``margin="exponential"`` reads the tail of ``X`` as unit
    exponential, ``P(X > x) = exp(-x)``, and cuts both coordinates at ``u``
    itself; the two agree in the limit but differ by a visible amount at
    moderate ``u`` (``fig 4`` uses the latter).
    """
    if margin == "laplace":
        return eta_from_joint(level, joint_logsf(p, laplace_quantile(level), rel_tol))
    if margin == "exponential":
        return eta_from_joint(level, joint_logsf(p, level.u, rel_tol) + LOG2)
    raise ValueError(f"margin must be one of {MARGINS}")


def eta_curve(
    p: HtParams,
    u_grid: Sequence[float],
    rel_tol: float = numerics.DEFAULT_REL_TOL,
    margin: str = "laplace",
):
    """``[(level, eta_HT(p)), ...]``; every threshold must reach ``u_thr``."""
    out = []
    for u in u_grid:
        level = ProbLevel(float(u))
        out.append((level, eta_at(p, level, rel_tol, margin)))
    return out


def crossing_level(
    p: HtParams, target: float, bracket: tuple[float, float], margin: str = "laplace"
) -> float:
    """``u`` in ``bracket`` where ``eta_HT(p)`` equals ``target``."""
    g = lambda u: eta_at(p, ProbLevel(u), 1e-12, margin) - target
    return numerics.find_root(g, bracket, tol=1e-10)


def with_threshold(p: HtParams, u_thr: float) -> HtParams:
    return replace(p, u_thr=u_thr)
