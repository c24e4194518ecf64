"""Extropy-type information measures and their Kullback-Leibler counterparts.

Every measure is an expectation or a variance of a density functional under
the first argument's density ``f``:

======================  =========================================
measure                 definition
======================  =========================================
extropy                 E_f[-f/2]                (weighted: -X f/2)
varextropy              Var_f[-f/2]              (weighted: -X f/2)
inaccuracy              E_f[-g/2]                (weighted: -X g/2)
discrimination          E_f[(f-g)/2]             (weighted: X(f-g)/2)
varj_inaccuracy         Var_f[-g/2]              (weighted: -X g/2)
varj_divergence         Var_f[(f-g)/2]
kl_divergence           E_f[log f/g]
var_kl                  Var_f[log f/g]
entropy                 E_f[-log f]
varentropy              Var_f[-log f]
======================  =========================================

Arguments are *density-like*: a parametric distribution (anything exposing
``pdf``/``ppf``/``support``) or a gridded :class:`~varextropy.estimation.DensityEstimate`.
Parametric first arguments are integrated in quantile space; gridded ones
with the trapezoid rule on their own grid.

Variances of parametric densities are accumulated about a reference value
taken at the median so that a constant functional gives exactly zero. On a
grid the estimate's mass may differ slightly from one, so grid variances are
the literal ``E[Z^2] - E[Z]^2`` of the tabulated integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .errors import SupportMismatch, SupportViolation
from .quadrature import DEFAULT_TOL

__all__ = [
    "CATALOGUE",
    "MeasureReport",
    "extropy",
    "varextropy",
    "inaccuracy",
    "discrimination",
    "varj_inaccuracy",
    "varj_divergence",
    "kl_divergence",
    "var_kl",
    "entropy",
    "varentropy",
    "density_cov",
]

CATALOGUE = (
    "extropy",
    "weighted_extropy",
    "varextropy",
    "weighted_varextropy",
    "inaccuracy",
    "weighted_inaccuracy",
    "varj_inaccuracy",
    "weighted_varj_inaccuracy",
    "discrimination",
    "weighted_discrimination",
    "varj_divergence",
    "kl_divergence",
    "var_kl",
    "entropy",
    "varentropy",
)

_F_FLOOR = 1e-300


@dataclass(frozen=True)
class MeasureReport:
    name: str
    value: float
    abs_error: float
    weighted: bool = False
    method: str = "quadrature"

    def __float__(self):
        return self.value


def is_estimate(d) -> bool:
    return hasattr(d, "grid") and hasattr(d, "values")


def _check_pair(dx, dy):
    if is_estimate(dx) or is_estimate(dy):
        return
    if tuple(dx.support) != tuple(dy.support):
        raise SupportMismatch(f"supports differ: {dx.support} vs {dy.support}")


def _check_weighted(d):
    lo = d.grid[0] if is_estimate(d) else d.support[0]
    if lo < 0:
        raise SupportViolation("weighted measures need a non-negative support")


def _logpdf(d, x):
    if hasattr(d, "logpdf"):
        return d.logpdf(x)
    with np.errstate(divide="ignore"):
        return np.log(d.pdf(x))


def _grid_error(x, y):
    """Trapezoid error estimate from the full grid vs every other node."""
    full = quadrature.grid_integrate(x, y)
    idx = np.arange(0, x.size, 2)
    if idx[-1] != x.size - 1:
        idx = np.append(idx, x.size - 1)
    half = quadrature.grid_integrate(x[idx], y[..., idx])
    return full, np.max(np.abs(np.atleast_1d(full - half))) / 3.0


class _Moments:
    """Expectations of stacked functionals of (x, f(x), g(x)) under f."""

    def __init__(self, dx, dy=None, tol=DEFAULT_TOL, method="quantile", mask=None):
        self.dx, self.dy, self.tol, self.method, self.mask = dx, dy, tol, method, mask

    def _fields(self, x):
        fx = self.dx.pdf(x)
        gx = None if self.dy is None else self.dy.pdf(x)
        return fx, gx

    def reference(self, fn):
        if is_estimate(self.dx):
            x = np.asarray(self.dx.grid)
            w = np.asarray(self.dx.values)
            cdf = np.cumsum(w)
            xr = x[min(np.searchsorted(cdf, 0.5 * cdf[-1]), x.size - 1)]
        else:
            xr = float(self.dx.ppf(0.5))
        xr = np.array([xr])
        fx, gx = self._fields(xr)
        return float(np.asarray(fn(xr, fx, gx))[0])

    def __call__(self, fns):
        if is_estimate(self.dx):
            x = np.asarray(self.dx.grid, dtype=float)
            fx, gx = np.asarray(self.dx.values, dtype=float), None
            if self.dy is not None:
                gx = self.dy.pdf(x)
            ys = np.stack([np.broadcast_to(fn(x, fx, gx), x.shape) for fn in fns]) * fx
            if self.mask is not None:
                ys = np.where(self.mask, ys, 0.0)
            vals, err = _grid_error(x, ys)
            return np.atleast_1d(vals), err, "grid"

        def integrand(x):
            fx, gx = self._fields(x)
            return np.stack([np.broadcast_to(fn(x, fx, gx), x.shape) for fn in fns])

        if self.method == "direct":
            lo, hi = self.dx.support
            res = quadrature.integrate(
                lambda x: integrand(x) * self.dx.pdf(x), lo, hi, self.tol,
                scale=_length_scale(self.dx),
            )
        else:
            res = quadrature.expectation(self.dx, integrand, self.tol)
        return np.atleast_1d(res.value), res.abs_error_estimate, "quadrature"

    def mean(self, fn):
        vals, err, method = self([fn])
        return float(vals[0]), err, method

    def variance(self, fn):
        # a gridded f need not integrate to exactly one, and then E[Z^2] - E[Z]^2
        # is not shift invariant; grids therefore use the unshifted moments
        s = 0.0 if is_estimate(self.dx) else self.reference(fn)

        def centred(x, f, g):
            return fn(x, f, g) - s

        def centred_sq(x, f, g):
            return (fn(x, f, g) - s) ** 2

        vals, err, method = self([centred, centred_sq])
        m1, m2 = vals
        var = m2 - m1 * m1
        return max(float(var), 0.0), err * (1.0 + 2.0 * abs(m1)), method


def _length_scale(d):
    try:
        q1, q3 = d.ppf(0.25), d.ppf(0.75)
        return float(max(q3 - q1, 1e-300))
    except Exception:  # noqa: BLE001 - distribution-likes without a usable ppf
        return 1.0


def _report(name, triple, weighted=False):
    value, err, method = triple
    return MeasureReport(name, float(value), float(err), weighted, method)


def _name(base, weighted):
    return f"weighted_{base}" if weighted else base


def extropy(d, weighted: bool = False, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Extropy ``-1/2 E_f[f(X)]``, or its weighted form ``-1/2 E_f[X f(X)]``."""
    if weighted:
        _check_weighted(d)
        fn = lambda x, f, g: -0.5 * x * f  # noqa: E731
    else:
        fn = lambda x, f, g: -0.5 * f  # noqa: E731
    return _report(_name("extropy", weighted), _Moments(d, None, tol, method).mean(fn), weighted)


def varextropy(d, weighted: bool = False, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Variance of ``-f(X)/2`` (weighted: ``-X f(X)/2``) under ``f``."""
    if weighted:
        _check_weighted(d)
        fn = lambda x, f, g: -0.5 * x * f  # noqa: E731
    else:
        fn = lambda x, f, g: -0.5 * f  # noqa: E731
    return _report(_name("varextropy", weighted), _Moments(d, None, tol, method).variance(fn), weighted)


def inaccuracy(dx, dy, weighted: bool = False, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Extropy inaccuracy ``-1/2 E_f[g(X)]`` (weighted: ``-1/2 E_f[X g(X)]``)."""
    _check_pair(dx, dy)
    if weighted:
        _check_weighted(dx)
        fn = lambda x, f, g: -0.5 * x * g  # noqa: E731
    else:
        fn = lambda x, f, g: -0.5 * g  # noqa: E731
    return _report(_name("inaccuracy", weighted), _Moments(dx, dy, tol, method).mean(fn), weighted)


def discrimination(dx, dy, weighted: bool = False, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Discrimination ``1/2 E_f[f - g]`` (weighted: ``1/2 E_f[X (f - g)]``)."""
    _check_pair(dx, dy)
    if weighted:
        _check_weighted(dx)
        fn = lambda x, f, g: 0.5 * x * (f - g)  # noqa: E731
    else:
        fn = lambda x, f, g: 0.5 * (f - g)  # noqa: E731
    return _report(_name("discrimination", weighted), _Moments(dx, dy, tol, method).mean(fn), weighted)


def varj_inaccuracy(dx, dy, weighted: bool = False, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Variance of ``-g(X)/2`` (weighted: ``-X g(X)/2``) under ``f``.

    Zero exactly when ``g`` is constant on the support.
    """
    _check_pair(dx, dy)
    if weighted:
        _check_weighted(dx)
        fn = lambda x, f, g: -0.5 * x * g  # noqa: E731
    else:
        fn = lambda x, f, g: -0.5 * g  # noqa: E731
    return _report(_name("varj_inaccuracy", weighted), _Moments(dx, dy, tol, method).variance(fn), weighted)


def varj_divergence(dx, dy, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Dispersion index ``Var_f[(f(X) - g(X))/2]``."""
    _check_pair(dx, dy)
    fn = lambda x, f, g: 0.5 * (f - g)  # noqa: E731
    return _report("varj_divergence", _Moments(dx, dy, tol, method).variance(fn))


def _log_ratio_moments(dx, dy, tol, method, variance):
    _check_pair(dx, dy)
    if is_estimate(dx):
        x = np.asarray(dx.grid, dtype=float)
        fx = np.asarray(dx.values, dtype=float)
        with np.errstate(divide="ignore"):
            lg = _logpdf(dy, x)
        mask = (fx >= _F_FLOOR) & np.isfinite(lg)
        if not np.any(mask):
            from .errors import AllMassExcluded

            raise AllMassExcluded("no grid point has positive f and g")
        bad = (fx >= _F_FLOOR) & ~np.isfinite(lg)
        if np.any(bad & (fx > 1e-12 * fx.max())):
            raise SupportViolation("reference density vanishes where the estimate has mass")
        return log_ratio_on_grid(x, fx, lg, mask, variance)

    def fn(x, f, g):
        with np.errstate(divide="ignore", invalid="ignore"):
            lr = _logpdf(dx, x) - _logpdf(dy, x)
        if np.any(np.isposinf(lr)):
            raise SupportViolation("reference density vanishes where f is positive")
        return lr

    m = _Moments(dx, dy, tol, method)
    return m.variance(fn) if variance else m.mean(fn)


def log_ratio_on_grid(x, fx, lg, mask, variance):
    """Grid moments of ``log f - log g`` restricted to ``mask``."""
    lr = np.where(mask, np.log(np.where(mask, fx, 1.0)) - np.where(mask, lg, 0.0), 0.0)
    w = np.where(mask, fx, 0.0)
    if not variance:
        val, err = _grid_error(x, w * lr)
        return float(val), err, "grid"
    vals, err = _grid_error(x, np.stack([w * lr, w * lr * lr]))
    m1, m2 = vals
    return max(float(m2 - m1 * m1), 0.0), err * (1.0 + 2.0 * abs(m1)), "grid"


def kl_divergence(dx, dy, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Kullback-Leibler divergence ``E_f[log f(X)/g(X)]``."""
    return _report("kl_divergence", _log_ratio_moments(dx, dy, tol, method, False))


def var_kl(dx, dy, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Dispersion of the log-likelihood ratio, ``Var_f[log f(X)/g(X)]``."""
    return _report("var_kl", _log_ratio_moments(dx, dy, tol, method, True))


def _neg_log_f(d):
    def fn(x, f, g):
        if is_estimate(d):
            with np.errstate(divide="ignore"):
                return -np.log(np.maximum(f, _F_FLOOR))
        return -_logpdf(d, x)

    return fn


def entropy(d, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Differential entropy ``-E_f[log f(X)]``."""
    return _report("entropy", _Moments(d, None, tol, method).mean(_neg_log_f(d)))


def varentropy(d, tol: float = DEFAULT_TOL, method="quantile") -> MeasureReport:
    """Varentropy ``Var_f[-log f(X)]``."""
    return _report("varentropy", _Moments(d, None, tol, method).variance(_neg_log_f(d)))


def density_cov(d, h1, h2, tol: float = DEFAULT_TOL) -> float:
    """``Cov_f(h1(X), h2(X))`` by quadrature; ``h1``, ``h2`` take ``x``."""
    m = _Moments(d, None, tol)
    s1 = m.reference(lambda x, f, g: h1(x))
    s2 = m.reference(lambda x, f, g: h2(x))
    vals, _, _ = m([
        lambda x, f, g: h1(x) - s1,
        lambda x, f, g: h2(x) - s2,
        lambda x, f, g: (h1(x) - s1) * (h2(x) - s2),
    ])
    a, b, ab = vals
    return float(ab - a * b)


def pair_catalogue(dx, dy, tol: float = DEFAULT_TOL, weighted: bool = True) -> dict:
    """Every pairwise and single-density measure, keyed by catalogue name."""
    out = {
        "extropy": extropy(dx, tol=tol),
        "varextropy": varextropy(dx, tol=tol),
        "inaccuracy": inaccuracy(dx, dy, tol=tol),
        "discrimination": discrimination(dx, dy, tol=tol),
        "varj_inaccuracy": varj_inaccuracy(dx, dy, tol=tol),
        "varj_divergence": varj_divergence(dx, dy, tol=tol),
        "kl_divergence": kl_divergence(dx, dy, tol=tol),
        "var_kl": var_kl(dx, dy, tol=tol),
        "entropy": entropy(dx, tol=tol),
        "varentropy": varentropy(dx, tol=tol),
    }
    lo = dx.grid[0] if is_estimate(dx) else dx.support[0]
    if weighted and lo >= 0 and not math.isinf(lo):
        out["weighted_extropy"] = extropy(dx, True, tol)
        out["weighted_varextropy"] = varextropy(dx, True, tol)
        out["weighted_inaccuracy"] = inaccuracy(dx, dy, True, tol)
        out["weighted_discrimination"] = discrimination(dx, dy, True, tol)
        out["weighted_varj_inaccuracy"] = varj_inaccuracy(dx, dy, True, tol)
    return {k: out[k] for k in CATALOGUE if k in out}
