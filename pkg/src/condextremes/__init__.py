"""Extremal dependence (chi, eta and finite-level eta(p)) of conditionally specified bivariate models.

Submodules
----------
numerics        log-domain arithmetic, quadrature, root finding, maximisation
laplace_engine  finite-n checks of the Laplace approximation and its extension
margins         probability levels, Laplace margins, eta(p) from a joint survival
hw_model        spliced log-normal/Weibull model with a conditional log-normal
ht_model        exact Heffernan-Tawn model and its eta case table
invlogistic     inverted logistic benchmark and its simulator
empirical       empirical chi(p), eta(p) with binomial intervals
"""
from . import empirical, ht_model, hw_model, invlogistic, laplace_engine, margins, numerics
from .errors import CondExtremesError, DomainError, NumericalError
from .margins import DependenceSummary, ProbLevel

__version__ = "0.1.0"

__all__ = [
    "CondExtremesError",
    "DependenceSummary",
    "DomainError",
    "NumericalError",
    "ProbLevel",
    "empirical",
    "ht_model",
    "hw_model",
    "invlogistic",
    "laplace_engine",
    "margins",
    "numerics",
]
