"""Log-domain numerical primitives.

Tail probabilities in this package routinely sit far below the smallest
positive double (``exp(-3900)`` is typical), so every nonnegative quantity is
carried as its natural logarithm.  A plain ``float`` is used for that purpose;
``-inf`` encodes an exact zero.

The quadrature here is an adaptive, globally refined Gauss-Legendre rule whose
panel sums are accumulated with log-sum-exp, so integrands are never
exponentiated before their running maximum has been subtracted.
"""
from __future__ import annotations

import heapq
import math
from typing import Callable, Sequence

import numpy as np
from scipy import optimize, special

from .errors import (
    EmptyDomain,
    NoConvergence,
    NonFinite,
    NonPositive,
    NoSignChange,
)

Interval = tuple[float, float]

_NODES15, _WEIGHTS15 = np.polynomial.legendre.leggauss(15)
_NODES7, _WEIGHTS7 = np.polynomial.legendre.leggauss(7)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_EPS = np.finfo(float).eps

DEFAULT_REL_TOL = 1e-8
_GRADING_LEVELS = 30


# ---------------------------------------------------------------------------
# log-domain arithmetic
# ---------------------------------------------------------------------------

def log_add(a, b):
    """Return ``log(exp(a) + exp(b))`` without leaving the log domain."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    hi = np.maximum(a, b)
    lo = np.minimum(a, b)
    with np.errstate(invalid="ignore"):
        out = hi + np.log1p(np.exp(lo - hi))
    out = np.where(np.isneginf(hi), -np.inf, out)
    return out[()] if out.ndim == 0 else out


def log_sub(a, b):
    """Return ``log(exp(a) - exp(b))`` for ``a >= b``."""
    a = float(a)
    b = float(b)
    if b > a:
        raise ValueError("log_sub requires a >= b")
    if b == -math.inf:
        return a
    if a == b:
        return -math.inf
    return a + math.log(-math.expm1(b - a))


def log_sum(values) -> float:
    """Log-sum-exp of a sequence of log values (``-inf`` for an empty one)."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        return -math.inf
    m = v.max()
    if m == -math.inf:
        return -math.inf
    return float(m + math.log(np.exp(v - m).sum()))


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def _mills_log_series(x):
    # log of 1 - 1/x^2 + 3/x^4 - 15/x^6 + ...; truncated once the terms stop
    # shrinking or fall below double resolution (x > 8 keeps this well inside
    # the convergent stretch of the asymptotic series).
    x2 = x * x
    total = np.ones_like(x)
    term = np.ones_like(x)
    for k in range(1, 40):
        new = -term * (2 * k - 1) / x2
        if np.all(np.abs(new) < 1e-17):
            break
        term = new
        total = total + term
    return np.log(total)


def std_normal_logsf(x):
    """Log of the standard normal survival function.

    Uses ``erfc`` for ``x <= 8`` and the Mills-ratio asymptotic expansion
    ``phi(x)/x * (1 - 1/x^2 + 3/x^4 - ...)`` beyond, so the result stays finite
    far into the tail (``x = 1e4`` gives about ``-5e7``).
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    big = x > 8.0
    neg = x < 0.0
    mid = ~big & ~neg
    if np.any(mid):
        out[mid] = np.log(0.5 * special.erfc(x[mid] / math.sqrt(2.0)))
    if np.any(neg):
        out[neg] = np.log1p(-0.5 * special.erfc(-x[neg] / math.sqrt(2.0)))
    if np.any(big):
        xb = x[big]
        out[big] = -0.5 * xb * xb - np.log(xb) - _LOG_SQRT_2PI + _mills_log_series(xb)
    return out[()] if out.ndim == 0 else out


def log_gamma_fn(z: float) -> float:
    """``log Gamma(z)`` for ``z > 0``."""
    if not z > 0:
        raise NonPositive(f"log_gamma_fn needs z > 0, got {z!r}")
    return float(special.gammaln(z))


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------

def _central(f, x, order, h):
    if order == 1:
        return (f(x + h) - f(x - h)) / (2 * h)
    if order == 2:
        return (f(x + h) - 2 * f(x) + f(x - h)) / h**2
    if order == 3:
        return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h**3)
    return (f(x + 2 * h) - 4 * f(x + h) + 6 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / h**4


def finite_diff_deriv(f: Callable[[float], float], x: float, order: int, h: float | None = None) -> float:
    """Central finite-difference derivative of order 1-4, Richardson-extrapolated once.

    The default step is ``max(|x|, 1) * eps**(1/(order+2))``.
    """
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be in 1..4, got {order}")
    if h is None:
        h = max(abs(x), 1.0) * _EPS ** (1.0 / (order + 2))
    if not h > 0:
        raise ValueError("h must be positive")

    def fs(t):
        return float(f(t))

    coarse = _central(fs, x, order, h)
    fine = _central(fs, x, order, h / 2)
    return (4.0 * fine - coarse) / 3.0


# ---------------------------------------------------------------------------
# root finding and maximisation
# ---------------------------------------------------------------------------

def find_root(f: Callable[[float], float], bracket: Interval, tol: float = 1e-14) -> float:
    """Root of ``f`` inside a sign-changing bracket (Brent's method)."""
    lo, hi = bracket
    flo, fhi = float(f(lo)), float(f(hi))
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if not flo * fhi < 0:
        raise NoSignChange(f"f({lo})={flo:.6g} and f({hi})={fhi:.6g} have the same sign")
    return float(optimize.brentq(f, lo, hi, xtol=tol, rtol=4 * _EPS, maxiter=500))


class _Vectorized:
    """Evaluate a user function on arrays, falling back to a Python loop."""

    def __init__(self, f):
        self.f = f
        self.native = None

    def __call__(self, x: np.ndarray) -> np.ndarray:
        if self.native is not False:
            try:
                v = np.asarray(self.f(x), dtype=float)
                if v.shape == x.shape:
                    self.native = True
                    return v
            except (TypeError, ValueError):
                pass
            self.native = False
        return np.array([float(self.f(t)) for t in x], dtype=float)


def _polish(fv: _Vectorized, a: float, b: float) -> tuple[float, float]:
    def neg(t):
        val = float(fv(np.array([t]))[0])
        return math.inf if math.isnan(val) or val == -math.inf else -val

    scale = max(abs(a), abs(b), 1e-300)
    res = optimize.minimize_scalar(
        neg, bounds=(a, b), method="bounded", options={"xatol": 1e-13 * scale, "maxiter": 500}
    )
    return float(res.x), -float(res.fun)


def maximize(
    f: Callable[[float], float],
    domain: Interval,
    n_seeds: int = 256,
    *,
    scan_limit: float = 1e4,
) -> list[tuple[float, float]]:
    """All local maxima of ``f`` on ``domain`` as ``(location, value)`` pairs.

    Seeds are log-spaced when ``domain[0] > 0`` and linear otherwise; every
    ascent/descent change in the seed sequence is polished with a bounded
    golden-section/Brent search.  A finite endpoint is reported when the
    function decreases away from it.  Infinite ends are scanned only out to
    ``scan_limit`` (relative to the finite end).
    """
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise EmptyDomain(f"empty domain ({lo}, {hi})")
    if n_seeds < 8:
        raise ValueError("n_seeds must be at least 8")
    lo_s = lo if math.isfinite(lo) else min(hi, 0.0) - scan_limit * max(1.0, abs(hi) if math.isfinite(hi) else 1.0)
    hi_s = hi if math.isfinite(hi) else max(lo_s, 0.0) + scan_limit * max(1.0, abs(lo_s))
    if lo_s > 0:
        seeds = np.geomspace(lo_s, hi_s, n_seeds)
    else:
        seeds = np.linspace(lo_s, hi_s, n_seeds)

    fv = _Vectorized(f)
    vals = fv(seeds)
    vals = np.where(np.isnan(vals), -np.inf, vals)

    found: list[tuple[float, float]] = []
    # lower end
    if vals[0] > -np.inf and vals[0] > vals[1]:
        h = 1e-7 * max(1.0, abs(lo_s))
        slope = (float(fv(np.array([lo_s + h]))[0]) - vals[0]) / h
        if slope < 0 and math.isfinite(lo):
            found.append((lo_s, float(vals[0])))
        else:
            found.append(_polish(fv, seeds[0], seeds[1]))
    for i in range(1, n_seeds - 1):
        if vals[i] > vals[i - 1] and vals[i] >= vals[i + 1] and vals[i] > -np.inf:
            found.append(_polish(fv, seeds[i - 1], seeds[i + 1]))
    # upper end
    if vals[-1] > -np.inf and vals[-1] > vals[-2]:
        h = 1e-7 * max(1.0, abs(hi_s))
        slope = (vals[-1] - float(fv(np.array([hi_s - h]))[0])) / h
        if slope > 0 and math.isfinite(hi):
            found.append((hi_s, float(vals[-1])))
        else:
            found.append(_polish(fv, seeds[-2], seeds[-1]))

    found.sort()
    out: list[tuple[float, float]] = []
    for x, v in found:
        if out and abs(x - out[-1][0]) <= 1e-9 * max(1.0, abs(x)):
            if v > out[-1][1]:
                out[-1] = (x, v)
            continue
        out.append((x, v))
    return out


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def _panel(fv: _Vectorized, a: float, b: float) -> tuple[float, float]:
    """Log estimate and log error bound of the integral over one panel."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = np.concatenate([c + h * _NODES15, c + h * _NODES7])
    v = fv(x)
    if np.any(np.isnan(v)) or np.any(v == np.inf):
        bad = x[np.isnan(v) | (v == np.inf)][0]
        raise NonFinite(f"integrand is not finite at x={bad!r}")
    m = v.max()
    if m == -np.inf:
        return -math.inf, -math.inf
    s15 = float(np.dot(_WEIGHTS15, np.exp(v[:15] - m)))
    s7 = float(np.dot(_WEIGHTS7, np.exp(v[15:] - m)))
    logh = math.log(h)
    est = m + logh + math.log(s15) if s15 > 0 else -math.inf
    diff = abs(s15 - s7)
    err = m + logh + math.log(diff) if diff > 0 else -math.inf
    return est, err


def _tail_bound(fv: _Vectorized, t: float, direction: int) -> float:
    """Log of an envelope bound on the integral beyond ``t``.

    For an integrand that is log-concave past ``t`` and decreasing there, the
    mass beyond ``t`` is at most ``exp(f(t)) / |f'(t)|``.
    """
    h = 1e-6 * max(1.0, abs(t))
    v = fv(np.array([t, t + direction * h]))
    if v[0] == -np.inf:
        return -math.inf
    slope = (v[1] - v[0]) / h
    if not slope < 0:
        return math.inf
    return float(v[0] - math.log(-slope))


def _graded(a: float, b: float, levels: int = _GRADING_LEVELS) -> list[tuple[float, float]]:
    """Split ``[a, b]`` geometrically towards both ends.

    A peak sitting on a panel edge can fall between all Gauss nodes, in which
    case the 15/7-point error estimate is blind to it; grading the initial
    mesh toward every breakpoint down to ``2^-levels`` of the width removes
    that failure mode for modes passed as ``points``.
    """
    w = b - a
    cuts = {a + w * 2.0**-j for j in range(1, levels + 1)} | {b - w * 2.0**-j for j in range(2, levels + 1)}
    xs = sorted(x for x in cuts if a < x < b)
    xs = [a] + xs + [b]
    return [(x0, x1) for x0, x1 in zip(xs[:-1], xs[1:]) if x1 > x0]


def integrate_log(
    f_log: Callable,
    domain: Interval,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    points: Sequence[float] = (),
    scale: float | None = None,
    max_depth: int = 60,
    max_panels: int = 50_000,
) -> float:
    """``log`` of the integral of ``exp(f_log)`` over ``domain``.

    ``f_log`` may be vectorised (preferred) or scalar.  ``points`` are
    breakpoints (modes, kinks) that become panel edges; supplying the modes of a
    sharply peaked integrand is strongly recommended.  Infinite ends are handled
    by doubling panels outward from the outermost breakpoint until the
    log-concave envelope bound on the remaining tail falls below ``rel_tol``
    of the accumulated mass.  ``scale`` sets the first outward panel width.

    Panels are then refined globally (largest error first, Gauss-Legendre 15
    against 7 points) until the summed error estimate is below ``rel_tol``
    times the integral.
    """
    if not 0 < rel_tol <= 1e-2:
        raise ValueError("rel_tol must lie in (0, 1e-2]")
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise EmptyDomain(f"empty domain ({lo}, {hi})")
    fv = _Vectorized(f_log)

    pts = sorted({float(p) for p in points if lo < p < hi and math.isfinite(p)})
    if math.isfinite(lo):
        left = lo
    elif pts:
        left = pts[0]
    else:
        left = min(0.0, hi - 1.0) if math.isfinite(hi) else 0.0
    if math.isfinite(hi):
        right = hi
    elif pts:
        right = pts[-1]
    else:
        right = max(left, 0.0)
    width0 = scale if scale is not None else max(1.0, 0.05 * max(abs(left), abs(right)))
    if right <= left:
        # a single finite end and no breakpoints: open with one panel so the
        # endpoint itself is never evaluated
        if math.isfinite(lo):
            right = left + width0
        else:
            left = right - width0
    edges = [left] + [p for p in pts if left < p < right] + [right]

    panels: list[tuple[float, float, float, float]] = []  # (a, b, est, err)
    for a, b in zip(edges[:-1], edges[1:]):
        for aa, bb in _graded(a, b):
            panels.append((aa, bb, *_panel(fv, aa, bb)))

    log_tol = math.log(rel_tol)
    for direction, infinite in ((1, not math.isfinite(hi)), (-1, not math.isfinite(lo))):
        if not infinite:
            continue
        t = right if direction == 1 else left
        w = width0
        for _ in range(400):
            total = log_sum([p[2] for p in panels])
            bound = _tail_bound(fv, t, direction)
            if bound == -math.inf or (total > -math.inf and bound <= total + log_tol - math.log(8.0)):
                break
            a, b = (t, t + w) if direction == 1 else (t - w, t)
            panels.append((a, b, *_panel(fv, a, b)))
            t = t + direction * w
            w *= 2.0
            if not math.isfinite(t):
                raise NoConvergence("tail extension overflowed")
        else:
            raise NoConvergence("tail of the integrand does not decay")

    heap = [(-p[3], p[0], p[1], 0, p[2]) for p in panels]
    heapq.heapify(heap)
    while True:
        ests = np.array([item[4] for item in heap])
        errs = np.array([-item[0] for item in heap])
        total = log_sum(ests)
        if total == -math.inf:
            return -math.inf
        if log_sum(errs) <= total + log_tol:
            return total
        if len(heap) > max_panels:
            raise NoConvergence(f"more than {max_panels} panels needed")
        # split the worst panels in batches so the convergence sums stay cheap
        for _ in range(max(1, len(heap) // 16)):
            neg_err, a, b, depth, _ = heapq.heappop(heap)
            if depth >= max_depth:
                raise NoConvergence(f"panel refinement exceeded depth {max_depth} near x={a!r}")
            mid = 0.5 * (a + b)
            for aa, bb in ((a, mid), (mid, b)):
                est, err = _panel(fv, aa, bb)
                heapq.heappush(heap, (-err, aa, bb, depth + 1, est))
