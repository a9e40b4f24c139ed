"""Empirical chi(p), eta(p) and binomial confidence bands.

Both coordinates are cut at their own type-7 sample quantiles.  The joint
exceedance proportion ``m/n`` stands in for ``(1 - p) chi(p)``, so the
Clopper-Pearson interval for that single proportion maps straight through
``eta(p) = log(1 - p) / log(m/n)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats

from .errors import NoExceedances, NoJointExceedances
from .invlogistic import Sample
from .margins import ProbLevel

CSV_HEADER = "u,p,chi_hat,eta_hat,ci_lo,ci_hi,m_joint,n"


@dataclass(frozen=True)
class EtaEstimate:
    level: ProbLevel
    chi_hat: float
    eta_hat: float
    ci_lo: float
    ci_hi: float
    m_joint: int
    n: int

    def csv_row(self) -> str:
        lv = self.level
        return ",".join(
            [f"{lv.u:.17g}", f"{lv.p:.17g}"]
            + [f"{v:.17g}" for v in (self.chi_hat, self.eta_hat, self.ci_lo, self.ci_hi)]
            + [str(self.m_joint), str(self.n)]
        )


def _counts(s: Sample, level: ProbLevel) -> tuple[int, int]:
    qx, qy = np.quantile(s.x, level.p), np.quantile(s.y, level.p)
    ex = s.x > qx
    return int(np.count_nonzero(ex & (s.y > qy))), int(np.count_nonzero(ex))


def chi_hat(s: Sample, level: ProbLevel) -> tuple[float, int, int]:
    """``(m_joint / m_x, m_joint, m_x)`` at the empirical ``p``-quantiles."""
    m_joint, m_x = _counts(s, level)
    if m_x == 0:
        raise NoExceedances(f"no x exceeds its {level.p:.6g} quantile (n={s.n})")
    return m_joint / m_x, m_joint, m_x


def _eta_of_proportion(u: float, prop: float) -> float:
    # eta = log(1-p)/log(prop) = -u/log(prop); increasing in prop on (0, 1)
    if prop <= 0:
        return 0.0
    if prop >= 1:
        return math.inf
    return -u / math.log(prop)


def clopper_pearson(m: int, n: int, level: float = 0.95) -> tuple[float, float]:
    a = 1 - level
    lo = 0.0 if m == 0 else float(stats.beta.ppf(a / 2, m, n - m + 1))
    hi = 1.0 if m == n else float(stats.beta.ppf(1 - a / 2, m + 1, n - m))
    return lo, hi


def eta_hat(s: Sample, level: ProbLevel) -> EtaEstimate:
    """``eta_hat(p) = log(1 - p) / log(m_joint / n)`` with a mapped 95% interval."""
    chi, m_joint, m_x = chi_hat(s, level)
    if m_joint == 0:
        raise NoJointExceedances(f"no joint exceedance at p={level.p:.6g} (n={s.n})")
    n = s.n
    lo, hi = clopper_pearson(m_joint, n)
    e = _eta_of_proportion(level.u, m_joint / n)
    a, b = _eta_of_proportion(level.u, lo), _eta_of_proportion(level.u, hi)
    return EtaEstimate(level, chi, e, min(a, b), max(a, b), m_joint, n)


def eta_hat_curve(s: Sample, levels: Sequence[ProbLevel]) -> list[Optional[EtaEstimate]]:
    """Pointwise estimates; ``None`` where there is no joint (or marginal) exceedance."""
    out: list[Optional[EtaEstimate]] = []
    for lv in levels:
        try:
            out.append(eta_hat(s, lv))
        except (NoExceedances, NoJointExceedances):
            out.append(None)
    return out


def format_curve_csv(curve: Sequence[Optional[EtaEstimate]]) -> str:
    rows = [CSV_HEADER] + [e.csv_row() for e in curve if e is not None]
    return "\n".join(rows) + "\n"
