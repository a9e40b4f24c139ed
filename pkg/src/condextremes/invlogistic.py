"""Inverted bivariate extreme value law with logistic dependence, Laplace margins.

    P(X > x, Y > y) = exp{-(t_x^(1/xi) + t_y^(1/xi))^xi},   0 < xi <= 1,

with ``t_x = -log P(X > x)``.  ``eta = 2^-xi`` exactly and at every level
above the median, while the limiting Heffernan-Tawn description has
``(alpha, beta, gamma, delta) = (0, 1 - xi, xi, 1/xi)`` and so a different
``eta = 1/(1 + xi)`` for the associated exact model.

Simulation uses the positive-stable mixture representation: with ``S``
positive stable of index ``xi`` (Laplace transform ``exp(-s^xi)``) and
independent unit exponentials ``E1, E2``, the pair ``((E1/S)^xi, (E2/S)^xi)``
has the joint survival above on the exponential scale.  ``S`` is drawn by
Kanter's formula from one uniform and one exponential deviate.  The random
stream is numpy's ``default_rng`` (PCG64).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError
from .ht_model import DEFAULT_U_THR, HtParams
from .margins import DependenceSummary, t_inverse, t_transform


@dataclass(frozen=True)
class LogisticXi:
    xi: float

    def __post_init__(self):
        if not 0 < self.xi <= 1:
            raise DomainError(f"xi={self.xi!r} must lie in (0, 1]")


def _xi(xi) -> float:
    return xi.xi if isinstance(xi, LogisticXi) else LogisticXi(float(xi)).xi


def joint_logsf(xi, x, y):
    """``log P(X > x, Y > y) = -(t_x^(1/xi) + t_y^(1/xi))^xi``."""
    k = _xi(xi)
    tx, ty = t_transform(x), t_transform(y)
    return -((tx ** (1 / k) + ty ** (1 / k)) ** k)


def eta_exact(xi) -> DependenceSummary:
    """``chi = 0`` and ``eta = 2^-xi`` (independence at ``xi = 1``)."""
    k = _xi(xi)
    note = "independence" if k == 1 else "exact"
    return DependenceSummary(chi=0.0, eta=2.0**-k, note=note)


def ht_limit(xi, u_thr: float = DEFAULT_U_THR) -> HtParams:
    """Limiting Heffernan-Tawn parameters ``(0, 1 - xi, xi, 1/xi)``."""
    k = _xi(xi)
    return HtParams(0.0, 1.0 - k, k, 1.0 / k, u_thr)


def cond_logsf(xi, y, x):
    """Exact ``log P(Y > y | X = x)`` from the x-derivative of the joint survival.

    With ``A = t_x^(1/xi) + t_y^(1/xi)`` this is
    ``-A^xi + (xi - 1) log A + (1/xi - 1) log t_x + t_x``.
    """
    k = _xi(xi)
    x = np.asarray(x, dtype=float)
    tx, ty = t_transform(x), t_transform(y)
    a = tx ** (1 / k) + ty ** (1 / k)
    # d t_x / dx = f_L(x) / P(X > x) = f_L(x) exp(t_x)
    return -(a**k) + (k - 1) * np.log(a) + (1 / k - 1) * np.log(tx) + tx


def cond_sf_limit_check(xi, z: float, x_grid: Sequence[float]) -> list[float]:
    """``P(Y > z x^(1 - xi) | X = x)`` on ``x_grid``; compare with ``exp(-xi z^(1/xi))``."""
    k = _xi(xi)
    if not z > 0:
        raise DomainError("z must be positive")
    xs = np.asarray(x_grid, dtype=float)
    if np.any(xs <= 0) or np.any(np.diff(xs) <= 0):
        raise DomainError("x_grid must be positive and increasing")
    return [float(math.exp(cond_logsf(k, z * x ** (1 - k), x))) for x in xs]


def cond_sf_limit(xi, z: float) -> float:
    k = _xi(xi)
    return math.exp(-k * z ** (1 / k))


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Sample:
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    seed: int | None = None
    xi: float | None = None

    def __post_init__(self):
        if self.x.shape != self.y.shape or self.x.ndim != 1:
            raise DomainError("x and y must be 1-d arrays of equal length")

    @property
    def n(self) -> int:
        return int(self.x.size)

    @property
    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist()))

    def to_csv(self, path) -> None:
        Path(path).write_text(format_sample_csv(self))

    @classmethod
    def from_csv(cls, path) -> "Sample":
        return parse_sample_csv(Path(path).read_text())


def log_positive_stable(xi: float, u: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Kanter's representation of a positive stable law with index ``xi < 1``, in logs."""
    return (
        np.log(np.sin(xi * u))
        - np.log(np.sin(u)) / xi
        + (1 - xi) / xi * (np.log(np.sin((1 - xi) * u)) - np.log(e))
    )


def simulate_t(xi, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Exponential-scale pairs ``(T1, T2)`` before the Laplace transform."""
    k = _xi(xi)
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = np.random.default_rng(seed)
    e1 = rng.standard_exponential(n)
    e2 = rng.standard_exponential(n)
    if k == 1:
        return e1, e2
    u = rng.uniform(0.0, math.pi, n)
    e = rng.standard_exponential(n)
    log_s = log_positive_stable(k, u, e)
    return np.exp(k * (np.log(e1) - log_s)), np.exp(k * (np.log(e2) - log_s))


def simulate(xi, n: int, seed: int) -> Sample:
    """``n`` pairs on Laplace margins; identical for identical ``(xi, n, seed)``."""
    k = _xi(xi)
    t1, t2 = simulate_t(k, n, seed)
    return Sample(np.asarray(t_inverse(t1)), np.asarray(t_inverse(t2)), seed=int(seed), xi=k)


def format_sample_csv(s: Sample) -> str:
    lines = []
    if s.xi is not None or s.seed is not None:
        lines.append(f"# xi={s.xi!r}, seed={s.seed!r}, n={s.n}")
    lines.append("x,y")
    lines.extend(f"{a:.17g},{b:.17g}" for a, b in zip(s.x.tolist(), s.y.tolist()))
    return "\n".join(lines) + "\n"


def parse_sample_csv(text: str) -> Sample:
    meta = {}
    rows = []
    header_seen = False
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for part in line[1:].split(","):
                key, sep, value = part.partition("=")
                if sep:
                    meta[key.strip()] = value.strip()
            continue
        if not header_seen:
            if [c.strip() for c in line.split(",")] != ["x", "y"]:
                raise DomainError(f"sample CSV header must be 'x,y', got {line!r}")
            header_seen = True
            continue
        a, b = line.split(",")
        rows.append((float(a), float(b)))
    if not header_seen:
        raise DomainError("sample CSV has no header")
    arr = np.array(rows, dtype=float).reshape(-1, 2)
    xi = float(meta["xi"]) if meta.get("xi", "None") != "None" else None
    seed = int(meta["seed"]) if meta.get("seed", "None") != "None" else None
    if "n" in meta and int(meta["n"]) != len(arr):
        raise DomainError(f"sample CSV declares n={meta['n']} but holds {len(arr)} rows")
    return Sample(arr[:, 0].copy(), arr[:, 1].copy(), seed=seed, xi=xi)
