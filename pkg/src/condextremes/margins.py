"""Marginal scales and extreme probability levels.

A probability level ``p`` close to one is always stored through its
exponential-scale value ``u = -log(1 - p)``: at ``u = 50`` the tail mass
``1 - p`` is about ``2e-22``, which survives in a double but is one subtraction
away from catastrophic cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import DegenerateJoint, InvalidLevel

LOG2 = math.log(2.0)


@dataclass(frozen=True, order=True)
class ProbLevel:
    """Extreme level ``p = 1 - exp(-u)`` carried as ``u`` (requires ``p > 1/2``)."""

    u: float

    def __post_init__(self):
        if not (math.isfinite(self.u) and self.u > LOG2):
            raise InvalidLevel(f"level u={self.u!r} must exceed log 2 (p > 1/2)")

    @classmethod
    def from_p(cls, p: float) -> "ProbLevel":
        if not 0.5 < p < 1.0:
            raise InvalidLevel(f"p={p!r} must lie in (1/2, 1)")
        return cls(-math.log1p(-p))

    @property
    def p(self) -> float:
        return -math.expm1(-self.u)

    @property
    def log_tail(self) -> float:
        """``log(1 - p) = -u``."""
        return -self.u


@dataclass(frozen=True)
class DependenceSummary:
    """Limiting ``chi`` and ``eta`` plus optional finite-level curves.

    ``eta is None`` marks a coefficient that does not exist for the model
    (``eta_defined`` is then False); ``chi is None`` likewise.
    """

    chi: Optional[float]
    eta: Optional[float]
    note: str = ""
    chi_p_curve: Optional[list] = field(default=None, compare=False)
    eta_p_curve: Optional[list] = field(default=None, compare=False)

    @property
    def eta_defined(self) -> bool:
        return self.eta is not None


def laplace_quantile(level: ProbLevel) -> float:
    """Upper quantile ``q`` of the standard Laplace law with ``P(X > q) = exp(-u)``."""
    return level.u - LOG2


def laplace_logsf(x):
    """``log P(X > x)`` for a standard Laplace variable (density ``exp(-|x|)/2``)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore"):
        out = np.where(x >= 0, -x - LOG2, np.log1p(-0.5 * np.exp(np.minimum(x, 0.0))))
    return out[()] if out.ndim == 0 else out


def t_transform(x):
    """Exponential-scale value ``-log(1 - F_L(x))`` of a Laplace variable.

    ``log 2 + x`` for ``x >= 0`` and ``log 2 - log(2 - exp(x))`` below zero.
    """
    return -laplace_logsf(x)


def t_inverse(t):
    """Inverse of :func:`t_transform` (maps exponential scale back to Laplace)."""
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore"):
        out = np.where(
            t >= LOG2,
            t - LOG2,
            np.log(2.0) + np.log(-np.expm1(-np.minimum(t, LOG2))),
        )
    return out[()] if out.ndim == 0 else out


def eta_from_joint(level: ProbLevel, log_joint_sf: float) -> float:
    """Finite-level ``eta(p) = log(1-p) / log P(X > q, Y > q)``.

    ``log_joint_sf`` is the log joint survival at the common Laplace quantile;
    it equals ``log[(1 - p) chi(p)]``.
    """
    if not (log_joint_sf < 0 and math.isfinite(log_joint_sf)):
        raise DegenerateJoint(f"log joint survival {log_joint_sf!r} must be finite and negative")
    return -level.u / log_joint_sf


def levels(us: Sequence[float]) -> list[ProbLevel]:
    return [ProbLevel(float(u)) for u in us]
