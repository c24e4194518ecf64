"""Order statistics of a parent distribution and their varextropy-type measures.

The i-th smallest of n independent copies has density
``f_{i:n} = f F^(i-1) (1-F)^(n-i) / B(i, n-i+1)``. Under the substitution
``u = F(x)`` every measure below reduces to expectations of ``f(F^-1(U))`` or
its square with ``U`` Beta distributed, which is how they are computed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import quadrature
from .distributions import Distribution
from .errors import DomainError, InvalidParameters
from .measures import MeasureReport
from .quadrature import DEFAULT_TOL

__all__ = [
    "OrderStatSpec",
    "OrderStatistic",
    "order_stat_density",
    "beta_expectation",
    "varj_inaccuracy_order",
    "varj_divergence_order",
]

_U_LO = np.finfo(float).tiny
_U_HI = 1.0 - np.finfo(float).epsneg


@dataclass(frozen=True)
class OrderStatSpec:
    """Rank ``i`` out of ``n`` draws from ``parent``."""

    parent: Distribution
    i: int
    n: int

    def __post_init__(self):
        if int(self.i) != self.i or int(self.n) != self.n:
            raise InvalidParameters("rank and sample size must be integers")
        if not 1 <= self.i <= self.n:
            raise InvalidParameters(f"need 1 <= i <= n, got i={self.i}, n={self.n}")
        object.__setattr__(self, "i", int(self.i))
        object.__setattr__(self, "n", int(self.n))


class OrderStatistic:
    """Density-like view of ``X_{i:n}``; shares the parent's support."""

    def __init__(self, spec: OrderStatSpec):
        self.spec = spec
        self.parent = spec.parent
        self._a = spec.i
        self._b = spec.n - spec.i + 1
        self._log_beta = special.betaln(self._a, self._b)

    @property
    def support(self):
        return self.parent.support

    @property
    def density_decreasing(self) -> bool:
        return self.spec.n == 1 and self.parent.density_decreasing

    def __repr__(self):
        return f"OrderStatistic({self.parent}, i={self.spec.i}, n={self.spec.n})"

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = (
                self.parent.logpdf(x)
                + special.xlogy(self._a - 1, self.parent.cdf(x))
                + special.xlogy(self._b - 1, self.parent.sf(x))
                - self._log_beta
            )
        return out

    def pdf(self, x):
        return np.exp(self.logpdf(x))

    def cdf(self, x):
        return special.betainc(self._a, self._b, self.parent.cdf(x))

    def sf(self, x):
        return special.betaincc(self._a, self._b, self.parent.cdf(x))

    def ppf(self, u):
        u = np.asarray(u, dtype=float)
        if np.any((u <= 0) | (u >= 1) | ~np.isfinite(u)):
            raise DomainError("quantile level must lie strictly inside (0, 1)")
        p = np.clip(special.betaincinv(self._a, self._b, u), _U_LO, _U_HI)
        return self.parent.ppf(p)


def order_stat_density(spec: OrderStatSpec) -> OrderStatistic:
    """Density-like object for ``X_{i:n}``."""
    return OrderStatistic(spec)


def _beta_weight(u, a, b):
    return np.exp(special.xlogy(a - 1, u) + special.xlog1py(b - 1, -u) - special.betaln(a, b))


def _beta_expectations(parent, rows, tol):
    """Stacked ``E[f(F^-1(U))^p]`` for ``U ~ Beta(a, b)``, ``rows = [(a, b, p), ...]``."""

    def integrand(u):
        u = np.clip(u, _U_LO, _U_HI)
        fq = parent.pdf(parent.ppf(u))
        return np.stack([fq**p * _beta_weight(u, a, b) for a, b, p in rows])

    res = quadrature.integrate(integrand, 0.0, 1.0, tol)
    return np.atleast_1d(res.value), res.abs_error_estimate


def beta_expectation(parent, a: float, b: float, power: int = 1, tol: float = DEFAULT_TOL) -> float:
    """``E[f(F^-1(U))^power]`` with ``U ~ Beta(a, b)`` and ``f``, ``F`` the parent's."""
    if not (a > 0 and b > 0):
        raise DomainError("Beta shapes must be positive")
    if power not in (1, 2):
        raise DomainError("power must be 1 or 2")
    vals, _ = _beta_expectations(parent, [(a, b, power)], tol)
    return float(vals[0])


def _beta_ratio(num_a, num_b, i, n, power):
    return math.exp(special.betaln(num_a, num_b) - power * special.betaln(i, n - i + 1))


def varj_inaccuracy_order(spec: OrderStatSpec, tol: float = DEFAULT_TOL) -> MeasureReport:
    """``Var_f[-f_{i:n}(X)/2]`` from Beta expectations.

    ``(1/4) {B(2i-1, 2n-2i+1)/B(i,n-i+1)^2 E[f^2(F^-1(U2))] - E[f(F^-1(U1))]^2}``
    with ``U1 ~ Beta(i, n-i+1)`` and ``U2 ~ Beta(2i-1, 2n-2i+1)``. The
    expectation is over the parent, not the order statistic.
    """
    i, n = spec.i, spec.n
    (e1, e2), err = _beta_expectations(
        spec.parent, [(i, n - i + 1, 1), (2 * i - 1, 2 * n - 2 * i + 1, 2)], tol
    )
    c2 = _beta_ratio(2 * i - 1, 2 * n - 2 * i + 1, i, n, 2)
    value = 0.25 * (c2 * e2 - e1 * e1)
    return MeasureReport(
        "varj_inaccuracy_order", max(float(value), 0.0), float(err * (c2 + 2 * abs(e1))),
        method="beta-expectation",
    )


def varj_divergence_order(spec: OrderStatSpec, tol: float = DEFAULT_TOL) -> MeasureReport:
    """``Var_{f_{i:n}}[(f_{i:n}(X) - f(X))/2]`` from Beta expectations.

    With ``B = B(i, n-i+1)``, ``B2 = B(2i-1, 2n-2i+1)``, ``B3 = B(3i-2, 3n-3i+1)``
    and ``U3 ~ Beta(3i-2, 3n-3i+1)``::

        (1/4) [B3/B^3 E f^2(U3) - 2 B2/B^2 E f^2(U2) + E f^2(U1)
               - (B2/B^2 E f(U2) - E f(U1))^2]
    """
    i, n = spec.i, spec.n
    rows = [
        (3 * i - 2, 3 * n - 3 * i + 1, 2),
        (2 * i - 1, 2 * n - 2 * i + 1, 2),
        (i, n - i + 1, 2),
        (2 * i - 1, 2 * n - 2 * i + 1, 1),
        (i, n - i + 1, 1),
    ]
    (e3s, e2s, e1s, e2, e1), err = _beta_expectations(spec.parent, rows, tol)
    c3 = _beta_ratio(3 * i - 2, 3 * n - 3 * i + 1, i, n, 3)
    c2 = _beta_ratio(2 * i - 1, 2 * n - 2 * i + 1, i, n, 2)
    mean = c2 * e2 - e1
    value = 0.25 * (c3 * e3s - 2 * c2 * e2s + e1s - mean * mean)
    return MeasureReport(
        "varj_divergence_order", max(float(value), 0.0),
        float(err * (c3 + 2 * c2 + 1 + 2 * abs(mean) * (c2 + 1))),
        method="beta-expectation",
    )
