"""Generating functions of extropy and of the discrimination measure.

``G(t) = E_f[exp(-t f(X)/2)]`` generates the raw moments of ``-f(X)/2``; its
logarithm generates the cumulants, so the first two derivatives of ``ln G`` at
zero are the extropy and the varextropy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numdiff import central_weights
from .errors import DomainError, StepDegeneracy
from .measures import _check_pair, _Moments
from .quadrature import DEFAULT_TOL

__all__ = [
    "GenFunMoments",
    "extropy_genfun",
    "divergence_genfun",
    "extropy_moments",
    "genfun_derivative_check",
]


@dataclass(frozen=True)
class GenFunMoments:
    """Moments of ``-f(X)/2`` under ``f``.

    ``raw[k-1]`` is ``E[(-f/2)^k]``; ``skewj`` and ``kurtj`` are the third and
    fourth central moments.
    """

    j: float
    varj: float
    skewj: float
    kurtj: float
    raw: tuple


def _stacked_expectation(d, fns, tol, dy=None):
    vals, err, _ = _Moments(d, dy, tol)(fns)
    return vals, err


def extropy_genfun(d, t, tol: float = DEFAULT_TOL):
    """``E_f[exp(-t f(X)/2)]`` for scalar or array ``t``."""
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    fns = [lambda x, f, g, tt=tt: np.exp(-0.5 * tt * f) for tt in ts]
    vals, _ = _stacked_expectation(d, fns, tol)
    return float(vals[0]) if np.ndim(t) == 0 else vals


def divergence_genfun(dx, dy, t, tol: float = DEFAULT_TOL):
    """``E_f[exp(t (f(X) - g(X))/2)]``; its slope at zero is the discrimination."""
    _check_pair(dx, dy)
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    fns = [lambda x, f, g, tt=tt: np.exp(0.5 * tt * (f - g)) for tt in ts]
    vals, _ = _stacked_expectation(dx, fns, tol, dy)
    return float(vals[0]) if np.ndim(t) == 0 else vals


def extropy_moments(d, tol: float = DEFAULT_TOL) -> GenFunMoments:
    """Raw and central moments of ``-f(X)/2`` up to order four."""
    m = _Moments(d, None, tol)
    s = m.reference(lambda x, f, g: -0.5 * f)
    fns = [lambda x, f, g, k=k: (-0.5 * f) ** k for k in range(1, 5)]
    fns += [lambda x, f, g, k=k: (-0.5 * f - s) ** k for k in range(1, 5)]
    vals, _, _ = m(fns)
    raw = tuple(float(v) for v in vals[:4])
    a1, a2, a3, a4 = vals[4:]
    c2 = a2 - a1 * a1
    c3 = a3 - 3 * a1 * a2 + 2 * a1**3
    c4 = a4 - 4 * a1 * a3 + 6 * a1 * a1 * a2 - 3 * a1**4
    return GenFunMoments(
        j=raw[0], varj=max(float(c2), 0.0), skewj=float(c3), kurtj=float(c4), raw=raw
    )


def genfun_derivative_check(d, k: int, tol: float = DEFAULT_TOL, base_step: float = 1e-2) -> float:
    """k-th derivative of ``ln G`` at ``t = 0`` by Richardson-extrapolated differences.

    The step is ``base_step / |J|`` so that ``t f/2`` stays of order
    ``base_step`` whatever the scale of the density. All stencil points share
    one quadrature panel set.
    """
    if k not in (1, 2, 3, 4):
        raise DomainError("derivative order must be 1, 2, 3 or 4")
    j = abs(_Moments(d, None, tol).mean(lambda x, f, g: -0.5 * f)[0])
    h = base_step / max(j, 1e-300)
    offsets, w = central_weights(k)
    steps = (h, h / 2, h / 4)
    ts = np.concatenate([offsets * s for s in steps])
    fns = [lambda x, f, g, tt=tt: np.exp(-0.5 * tt * f) for tt in ts]
    vals, _ = _stacked_expectation(d, fns, tol)
    if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
        raise StepDegeneracy("generating function is not positive and finite on the stencil")
    logs = np.log(vals).reshape(3, offsets.size)
    est = [float(row @ w) / s**k for row, s in zip(logs, steps)]
    r01 = est[1] + (est[1] - est[0]) / 15.0
    r12 = est[2] + (est[2] - est[1]) / 15.0
    return r12 + (r12 - r01) / 63.0
