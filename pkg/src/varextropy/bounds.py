"""Lower bounds for the varjinaccuracy ``Var_f[-g(X)/2]``.

Two kinds are provided:

* a series bound from a covariance identity with kernel ``q`` and index
  ``delta``. Its k-th term is::

      E_f[q^k g^(k)]^2 / (4 k! E_f[q^k] prod_{j=k-1}^{2k-2} (1 - j delta))

  with closed forms for exponential and power pairs and a numeric path that
  differentiates ``g`` by finite differences.
* a Chebyshev bound ``eps^2 P_f(|-g(X)/2 - J(X,Y)| >= eps)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import optimize, special

from . import _numdiff, quadrature
from .errors import DeltaExcluded, DomainError, InvalidParameters
from .measures import _check_pair, inaccuracy
from .quadrature import DEFAULT_TOL

__all__ = [
    "BoundResult",
    "series_bound_exponential",
    "series_bound_power",
    "series_bound_numeric",
    "chebyshev_bound",
    "chebyshev_bound_exponential",
]

_EPS = np.finfo(float).eps
_U_LO = np.finfo(float).tiny
_U_HI = 1.0 - np.finfo(float).epsneg


@dataclass(frozen=True)
class BoundResult:
    value: float
    kind: str
    order_n: Optional[int] = None
    epsilon: Optional[float] = None
    valid: bool = True
    terms: tuple = field(default_factory=tuple)
    method: str = "closed-form"

    def __float__(self):
        return self.value


def _check_order(n):
    if int(n) != n or n < 1:
        raise DomainError(f"series order must be a positive integer, got {n!r}")
    return int(n)


def _check_rate(name, v):
    if not (np.isfinite(v) and v > 0):
        raise DomainError(f"{name} must be positive and finite, got {v!r}")


def series_bound_exponential(lam: float, eta: float, n: int) -> BoundResult:
    """Series bound for ``X ~ Exp(lam)``, ``Y ~ Exp(eta)``.

    Uses ``q(x) = x/lam`` and ``delta = 0``; the k-th term is
    ``lam^2 r^(k+1) / 4`` with ``r = (eta/(lam+eta))^2``, which sums to
    ``lam eta^4 (1 - r^n) / (4 (lam+2 eta)(lam+eta)^2)``.
    """
    _check_rate("lambda", lam)
    _check_rate("eta", eta)
    n = _check_order(n)
    log_r = 2.0 * (math.log(eta) - math.log(lam + eta))
    k = np.arange(1, n + 1)
    terms = 0.25 * lam * lam * np.exp((k + 1) * log_r)
    value = lam * eta**4 / (4.0 * (lam + 2 * eta) * (lam + eta) ** 2) * -math.expm1(n * log_r)
    return BoundResult(float(value), "series", order_n=n, terms=tuple(terms.tolist()))


def series_bound_power(a: float, b: float, n: int) -> BoundResult:
    """Series bound for ``X ~ Power(a)``, ``Y ~ Power(b)`` on (0, 1).

    Uses ``q(x) = x(1-x)/(a+1)`` and ``delta = -1/(a+1)``. Terms where
    ``b - k`` is a non-positive integer vanish (``1/Gamma`` at a pole is 0).
    The expectations exist only for ``a + b > 1``.
    """
    _check_rate("a", a)
    _check_rate("b", b)
    n = _check_order(n)
    if a + b <= 1.0:
        raise DomainError("power-family series bound needs a + b > 1")
    terms = []
    for k in range(1, n + 1):
        if b - k <= 0 and float(b - k).is_integer():
            terms.append(0.0)
            continue
        log_ratio = (
            special.gammaln(b) + special.gammaln(a + b - 1)
            - special.gammaln(b - k) - special.gammaln(a + b + k)
        )
        terms.append(0.25 * a * b * b * (a + 2 * k) * math.exp(2.0 * log_ratio))
    return BoundResult(math.fsum(terms), "series", order_n=n, terms=tuple(terms))


def _delta_product(k, delta, n):
    prod = 1.0
    for j in range(k - 1, 2 * k - 1):
        prod *= 1.0 - j * delta
    return prod


def _check_delta(delta, n):
    for j in range(1, 2 * n - 1):
        if math.isclose(delta, 1.0 / j, rel_tol=1e-12):
            raise DeltaExcluded(f"delta = 1/{j} is excluded for order {n}")


def series_bound_numeric(
    dx,
    dy,
    q: Callable,
    delta: float,
    n: int,
    tol: float = 1e-9,
) -> BoundResult:
    """Series bound with ``g^(k)`` from finite differences.

    Parameters
    ----------
    dx, dy : Distribution
        ``X`` and ``Y``; the pair must share a support.
    q, delta
        Kernel and index of the covariance identity for ``dx``; the caller is
        responsible for them being the right pair.
    n : int
        Number of terms.

    Notes
    -----
    The base step for the k-th derivative is ``s * eps^(1/(k+6))`` where ``s``
    is the interquartile range of ``dy``; three halvings are extrapolated.
    The derivative is checked for step stability on a quantile grid of ``dx``
    before it is integrated. The default quadrature tolerance sits above the
    round-off level of the differences.
    """
    _check_pair(dx, dy)
    n = _check_order(n)
    if not np.isfinite(delta):
        raise InvalidParameters("delta must be finite")
    _check_delta(delta, n)
    lo, hi = dy.support
    scale = float(dy.ppf(0.75) - dy.ppf(0.25))
    probe = np.asarray(dx.ppf(np.linspace(0.02, 0.98, 49)), dtype=float)
    probe = probe[(probe > lo) & (probe < hi)]

    steps = []
    for k in range(1, n + 1):
        h = scale * _EPS ** (1.0 / (k + 6))
        _numdiff.derivative(dy.pdf, probe, k, h, lo, hi, check=True)
        steps.append(h)

    def integrand(x):
        qx = np.asarray(q(x), dtype=float) * np.ones_like(x)
        rows = []
        for k, h in enumerate(steps, start=1):
            gk = _numdiff.derivative(dy.pdf, x, k, h, lo, hi, check=False)
            qk = qx**k
            rows.extend([qk * gk, qk])
        return np.stack(rows)

    res = quadrature.expectation(dx, integrand, tol)
    vals = np.asarray(res.value)
    terms = []
    for k in range(1, n + 1):
        e_qg, e_q = vals[2 * k - 2], vals[2 * k - 1]
        if not e_q > 0:
            raise DomainError(f"E[q^{k}] must be positive, got {e_q!r}")
        denom = math.factorial(k) * e_q * _delta_product(k, delta, n)
        terms.append(float(0.25 * e_qg * e_qg / denom))
    return BoundResult(math.fsum(terms), "series", order_n=n, terms=tuple(terms), method="numeric")


def chebyshev_bound_exponential(lam: float, eta: float, eps: float) -> BoundResult:
    """Closed-form Chebyshev bound for ``X ~ Exp(lam)``, ``Y ~ Exp(eta)``.

    ``eps^2 (1 - c_+^(lam/eta) + c_-^(lam/eta))`` with
    ``c_pm = lam/(lam+eta) pm 2 eps/eta``. The formula presumes both brackets
    lie in [0, 1]; outside that range they are clipped, which yields the exact
    probabilities, and ``valid`` is set to False.
    """
    _check_rate("lambda", lam)
    _check_rate("eta", eta)
    if not (np.isfinite(eps) and eps > 0):
        raise DomainError("epsilon must be positive")
    base = lam / (lam + eta)
    c_plus = base + 2.0 * eps / eta
    c_minus = base - 2.0 * eps / eta
    valid = 0.0 <= c_minus and c_plus <= 1.0
    p = lam / eta
    prob = 1.0 - min(c_plus, 1.0) ** p + max(c_minus, 0.0) ** p
    return BoundResult(eps * eps * prob, "chebyshev", epsilon=eps, valid=valid)


def _superlevel_measure(phi, grid_s):
    """Lebesgue measure in u of ``{u : phi(u) >= 0}``, u = expit(s)."""
    u = special.expit(grid_s)
    vals = phi(u)
    pos = vals >= 0
    cuts = [0.0]
    states = [bool(pos[0])]
    for i in np.flatnonzero(pos[1:] != pos[:-1]):
        s0, s1 = grid_s[i], grid_s[i + 1]
        root = optimize.brentq(lambda s: float(phi(special.expit(np.array([s])))[0]), s0, s1,
                               xtol=1e-14, rtol=4 * _EPS)
        cuts.append(float(special.expit(root)))
        states.append(bool(pos[i + 1]))
    cuts.append(1.0)
    return math.fsum(b - a for a, b, on in zip(cuts[:-1], cuts[1:], states) if on)


def _generic_probabilities(dx, dy, t_hi, t_lo, gridpoints):
    grid_s = np.linspace(-36.0, 36.0, gridpoints)

    def g_of_u(u):
        u = np.clip(u, _U_LO, _U_HI)
        return dy.pdf(dx.ppf(u))

    p_hi = _superlevel_measure(lambda u: g_of_u(u) - t_hi, grid_s)
    p_lo = _superlevel_measure(lambda u: t_lo - g_of_u(u), grid_s)
    return p_hi, p_lo


def _decreasing_probabilities(dx, dy, t_hi, t_lo):
    """``F(g^-1(t_hi)) + 1 - F(g^-1(t_lo))`` for a strictly decreasing ``g``."""
    g_top = float(dy.pdf(dy.ppf(_U_LO)))
    g_bottom = float(dy.pdf(dy.ppf(_U_HI)))
    in_range = True

    def inverse(t):
        return float(dy.ppf(optimize.brentq(
            lambda u: float(dy.pdf(dy.ppf(u))) - t, _U_LO, _U_HI, xtol=1e-300, rtol=4 * _EPS
        )))

    if t_hi >= g_top:
        p_hi = 0.0
        in_range = in_range and t_hi == g_top
    elif t_hi <= g_bottom:
        p_hi, in_range = 1.0, False
    else:
        p_hi = float(dx.cdf(inverse(t_hi)))
    if t_lo <= g_bottom:
        p_lo = 0.0
        in_range = in_range and t_lo == g_bottom
    elif t_lo >= g_top:
        p_lo, in_range = 1.0, False
    else:
        p_lo = float(dx.sf(inverse(t_lo)))
    return p_hi, p_lo, in_range


def chebyshev_bound(
    dx,
    dy,
    eps: float,
    method: str = "auto",
    tol: float = DEFAULT_TOL,
    gridpoints: int = 4097,
) -> BoundResult:
    """Chebyshev lower bound ``eps^2 {P[g(X) >= 2(eps - J)] + P[g(X) <= -2(eps + J)]}``.

    Parameters
    ----------
    dx, dy : Distribution
        True and reference distributions on a common support.
    eps : float
        Deviation threshold, positive.
    method : {"auto", "generic", "decreasing"}
        ``generic`` locates the level sets of ``g`` by sign changes on a logit
        grid in quantile space of ``dx``; ``decreasing`` inverts ``g``
        directly and needs a strictly decreasing ``dy`` density. ``auto``
        picks ``decreasing`` when available.

    Returns
    -------
    BoundResult
        On the ``decreasing`` path ``valid`` is False when a threshold falls
        outside the range of ``g``; the returned value then uses the limiting
        probability.
    """
    if not (np.isfinite(eps) and eps > 0):
        raise DomainError("epsilon must be positive")
    _check_pair(dx, dy)
    if method not in ("auto", "generic", "decreasing"):
        raise InvalidParameters(f"unknown method {method!r}")
    if method == "auto":
        method = "decreasing" if getattr(dy, "density_decreasing", False) else "generic"
    if method == "decreasing" and not getattr(dy, "density_decreasing", False):
        raise DomainError("reference density is not strictly decreasing")
    j = inaccuracy(dx, dy, tol=tol).value
    t_hi = 2.0 * (eps - j)
    t_lo = 2.0 * (-eps - j)
    valid = True
    if method == "generic":
        p_hi, p_lo = _generic_probabilities(dx, dy, t_hi, t_lo, gridpoints)
    else:
        p_hi, p_lo, valid = _decreasing_probabilities(dx, dy, t_hi, t_lo)
    return BoundResult(eps * eps * (p_hi + p_lo), "chebyshev", epsilon=eps, valid=valid, method=method)
