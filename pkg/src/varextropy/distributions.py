"""Parametric families and maximum-likelihood fitting.

All families use the *rate* parameterization where a scale is involved:

=============  ===================  ======================================
family         params               density
=============  ===================  ======================================
exponential    (rate,)              rate * exp(-rate x),            x >= 0
gamma          (shape, rate)        rate^a x^(a-1) exp(-rate x) / G(a)
weibull        (shape, rate)        rate a (rate x)^(a-1) exp(-(rate x)^a)
lognormal      (mu, sigma)          log-normal with log-mean mu
uniform        (a, b)               1 / (b - a) on [a, b]
power          (a,)                 a x^(a-1) on (0, 1)
=============  ===================  ======================================
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import special

from .errors import (
    DegenerateSample,
    DomainError,
    EmptyDataset,
    InvalidParameters,
    NoConvergence,
)

__all__ = [
    "Family",
    "Distribution",
    "Sample",
    "as_sample",
    "exponential",
    "gamma",
    "weibull",
    "lognormal",
    "uniform",
    "power",
    "density",
    "cumulative",
    "quantile",
    "fit_mle",
    "log_likelihood",
]

_MAX_NEWTON_ITER = 200
_NEWTON_RTOL = 1e-10


class Family(str, enum.Enum):
    EXPONENTIAL = "exponential"
    GAMMA = "gamma"
    WEIBULL = "weibull"
    LOGNORMAL = "lognormal"
    UNIFORM = "uniform"
    POWER = "power"

    @classmethod
    def parse(cls, tag: "str | Family") -> "Family":
        if isinstance(tag, Family):
            return tag
        key = str(tag).strip().lower()
        try:
            return cls(_ALIASES.get(key, key))
        except ValueError:
            raise InvalidParameters(f"unknown distribution family {tag!r}") from None

    @property
    def n_params(self) -> int:
        return 1 if self in (Family.EXPONENTIAL, Family.POWER) else 2


_ALIASES = {
    "exp": "exponential",
    "expon": "exponential",
    "gam": "gamma",
    "g": "gamma",
    "weib": "weibull",
    "w": "weibull",
    "lnorm": "lognormal",
    "lognorm": "lognormal",
    "lg": "lognormal",
    "ln": "lognormal",
    "unif": "uniform",
    "u": "uniform",
    "pow": "power",
}

_PARAM_NAMES = {
    Family.EXPONENTIAL: ("rate",),
    Family.GAMMA: ("shape", "rate"),
    Family.WEIBULL: ("shape", "rate"),
    Family.LOGNORMAL: ("mu", "sigma"),
    Family.UNIFORM: ("a", "b"),
    Family.POWER: ("a",),
}


def _positive(name, value):
    if not (np.isfinite(value) and value > 0):
        raise InvalidParameters(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class Distribution:
    """An immutable member of one of the six supported families.

    Parameters
    ----------
    family : Family or str
        Family tag; common aliases such as ``"exp"`` and ``"lnorm"`` are accepted.
    params : sequence of float
        Parameters in the order listed in the module docstring.
    """

    family: Family
    params: tuple

    def __post_init__(self):
        fam = Family.parse(self.family)
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "family", fam)
        object.__setattr__(self, "params", params)
        if len(params) != fam.n_params:
            raise InvalidParameters(
                f"{fam.value} takes {fam.n_params} parameter(s), got {len(params)}"
            )
        names = _PARAM_NAMES[fam]
        if fam is Family.LOGNORMAL:
            if not np.isfinite(params[0]):
                raise InvalidParameters("mu must be finite")
            _positive("sigma", params[1])
        elif fam is Family.UNIFORM:
            a, b = params
            if not (np.isfinite(a) and np.isfinite(b) and a < b):
                raise InvalidParameters(f"uniform needs finite a < b, got {params}")
        else:
            for n, p in zip(names, params):
                _positive(n, p)

    # -- descriptive -------------------------------------------------------

    @property
    def param_names(self) -> tuple:
        return _PARAM_NAMES[self.family]

    @property
    def param_dict(self) -> dict:
        return dict(zip(self.param_names, self.params))

    @property
    def n_params(self) -> int:
        return self.family.n_params

    @property
    def support(self) -> tuple:
        if self.family is Family.UNIFORM:
            return self.params
        if self.family is Family.POWER:
            return (0.0, 1.0)
        return (0.0, math.inf)

    @property
    def density_decreasing(self) -> bool:
        """True when the density is strictly decreasing on the support."""
        fam, p = self.family, self.params
        if fam is Family.EXPONENTIAL:
            return True
        if fam in (Family.GAMMA, Family.WEIBULL):
            return p[0] <= 1.0
        if fam is Family.POWER:
            return p[0] < 1.0
        return False

    def __str__(self):
        args = ", ".join(f"{v:.10g}" for v in self.params)
        return f"{self.family.value}({args})"

    # -- evaluation --------------------------------------------------------

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        fam, p = self.family, self.params
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if fam is Family.EXPONENTIAL:
                lam = p[0]
                out = np.where(x >= 0, lam * np.exp(-lam * np.maximum(x, 0.0)), 0.0)
            elif fam is Family.GAMMA:
                a, lam = p
                xp = np.maximum(x, 0.0)
                logf = a * math.log(lam) + special.xlogy(a - 1.0, xp) - lam * xp - special.gammaln(a)
                out = np.where(x >= 0, np.exp(logf), 0.0)
            elif fam is Family.WEIBULL:
                a, lam = p
                z = lam * np.maximum(x, 0.0)
                out = np.where(x >= 0, lam * a * np.power(z, a - 1.0) * np.exp(-np.power(z, a)), 0.0)
            elif fam is Family.LOGNORMAL:
                out = np.where(x > 0, np.exp(self.logpdf(np.where(x > 0, x, 1.0))), 0.0)
            elif fam is Family.UNIFORM:
                a, b = p
                out = np.where((x >= a) & (x <= b), 1.0 / (b - a), 0.0)
            else:
                a = p[0]
                xc = np.clip(x, 0.0, 1.0)
                out = np.where((x >= 0) & (x <= 1), a * np.power(xc, a - 1.0), 0.0)
        return out[()] if out.ndim == 0 else out

    def logpdf(self, x):
        x = np.asarray(x, dtype=float)
        fam, p = self.family, self.params
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if fam is Family.LOGNORMAL:
                mu, s = p
                xp = np.where(x > 0, x, 1.0)
                lx = np.log(xp)
                out = -lx - math.log(s) - 0.5 * math.log(2 * math.pi) - 0.5 * ((lx - mu) / s) ** 2
                out = np.where(x > 0, out, -np.inf)
            elif fam is Family.GAMMA:
                a, lam = p
                xp = np.maximum(x, 0.0)
                out = a * math.log(lam) + special.xlogy(a - 1.0, xp) - lam * xp - special.gammaln(a)
                out = np.where(x >= 0, out, -np.inf)
            elif fam is Family.WEIBULL:
                a, lam = p
                z = lam * np.maximum(x, 0.0)
                out = math.log(lam * a) + special.xlogy(a - 1.0, z) - np.power(z, a)
                out = np.where(x >= 0, out, -np.inf)
            elif fam is Family.EXPONENTIAL:
                lam = p[0]
                out = np.where(x >= 0, math.log(lam) - lam * x, -np.inf)
            elif fam is Family.UNIFORM:
                a, b = p
                out = np.where((x >= a) & (x <= b), -math.log(b - a), -np.inf)
            else:
                a = p[0]
                xc = np.clip(x, 0.0, 1.0)
                out = math.log(a) + special.xlogy(a - 1.0, xc)
                out = np.where((x >= 0) & (x <= 1), out, -np.inf)
        return out[()] if np.ndim(out) == 0 else out

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        fam, p = self.family, self.params
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if fam is Family.EXPONENTIAL:
                out = -np.expm1(-p[0] * np.maximum(x, 0.0))
            elif fam is Family.GAMMA:
                out = special.gammainc(p[0], p[1] * np.maximum(x, 0.0))
            elif fam is Family.WEIBULL:
                out = -np.expm1(-np.power(p[1] * np.maximum(x, 0.0), p[0]))
            elif fam is Family.LOGNORMAL:
                xp = np.where(x > 0, x, 1.0)
                out = np.where(x > 0, special.ndtr((np.log(xp) - p[0]) / p[1]), 0.0)
            elif fam is Family.UNIFORM:
                a, b = p
                out = np.clip((x - a) / (b - a), 0.0, 1.0)
            else:
                out = np.power(np.clip(x, 0.0, 1.0), p[0])
        return out[()] if out.ndim == 0 else out

    def sf(self, x):
        """Survival function 1 - F(x), computed without cancellation where possible."""
        x = np.asarray(x, dtype=float)
        fam, p = self.family, self.params
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            if fam is Family.EXPONENTIAL:
                out = np.exp(-p[0] * np.maximum(x, 0.0))
            elif fam is Family.GAMMA:
                out = special.gammaincc(p[0], p[1] * np.maximum(x, 0.0))
            elif fam is Family.WEIBULL:
                out = np.exp(-np.power(p[1] * np.maximum(x, 0.0), p[0]))
            elif fam is Family.LOGNORMAL:
                xp = np.where(x > 0, x, 1.0)
                out = np.where(x > 0, special.ndtr(-(np.log(xp) - p[0]) / p[1]), 1.0)
            else:
                out = 1.0 - self.cdf(x)
        return out[()] if out.ndim == 0 else out

    def ppf(self, p):
        q = np.asarray(p, dtype=float)
        if np.any((q <= 0) | (q >= 1) | ~np.isfinite(q)):
            raise DomainError("quantile level must lie strictly inside (0, 1)")
        fam, par = self.family, self.params
        if fam is Family.EXPONENTIAL:
            out = -np.log1p(-q) / par[0]
        elif fam is Family.GAMMA:
            a, lam = par
            # upper-tail inverse keeps precision for q near 1 (1 - q is exact there)
            out = np.where(
                q <= 0.5,
                special.gammaincinv(a, q),
                special.gammainccinv(a, 1.0 - q),
            ) / lam
        elif fam is Family.WEIBULL:
            a, lam = par
            out = np.power(-np.log1p(-q), 1.0 / a) / lam
        elif fam is Family.LOGNORMAL:
            out = np.exp(par[0] + par[1] * special.ndtri(q))
        elif fam is Family.UNIFORM:
            a, b = par
            out = a + q * (b - a)
        else:
            out = np.power(q, 1.0 / par[0])
        return out[()] if out.ndim == 0 else out

    def sample(self, size, rng=None) -> np.ndarray:
        """Draw ``size`` variates (inverse transform; numpy's gamma sampler for gamma)."""
        rng = np.random.default_rng(rng)
        if self.family is Family.GAMMA:
            return rng.gamma(self.params[0], 1.0 / self.params[1], size=size)
        u = rng.random(size)
        u = np.clip(u, np.finfo(float).tiny, 1.0 - np.finfo(float).epsneg)
        return self.ppf(u)

    def mean(self) -> float:
        fam, p = self.family, self.params
        if fam is Family.EXPONENTIAL:
            return 1.0 / p[0]
        if fam is Family.GAMMA:
            return p[0] / p[1]
        if fam is Family.WEIBULL:
            return math.gamma(1.0 + 1.0 / p[0]) / p[1]
        if fam is Family.LOGNORMAL:
            return math.exp(p[0] + 0.5 * p[1] ** 2)
        if fam is Family.UNIFORM:
            return 0.5 * (p[0] + p[1])
        return p[0] / (p[0] + 1.0)


# -- constructors -------------------------------------------------------------

def exponential(rate: float) -> Distribution:
    return Distribution(Family.EXPONENTIAL, (rate,))


def gamma(shape: float, rate: float) -> Distribution:
    return Distribution(Family.GAMMA, (shape, rate))


def weibull(shape: float, rate: float) -> Distribution:
    return Distribution(Family.WEIBULL, (shape, rate))


def lognormal(mu: float, sigma: float) -> Distribution:
    return Distribution(Family.LOGNORMAL, (mu, sigma))


def uniform(a: float = 0.0, b: float = 1.0) -> Distribution:
    return Distribution(Family.UNIFORM, (a, b))


def power(a: float) -> Distribution:
    return Distribution(Family.POWER, (a,))


# -- functional aliases ---------------------------------------------------------

def density(d, x):
    return d.pdf(x)


def cumulative(d, x):
    return d.cdf(x)


def quantile(d, p):
    return d.ppf(p)


# -- samples ------------------------------------------------------------------

@dataclass(frozen=True)
class Sample:
    """Sorted, finite observations."""

    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float).ravel())
        if v.size == 0:
            raise EmptyDataset("sample is empty")
        if not np.all(np.isfinite(v)):
            raise InvalidParameters("sample contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __repr__(self):
        return f"Sample(n={self.n}, min={self.values[0]:.6g}, max={self.values[-1]:.6g})"


def as_sample(s) -> Sample:
    return s if isinstance(s, Sample) else Sample(s)


# -- maximum likelihood ----------------------------------------------------------

def log_likelihood(d: Distribution, s) -> float:
    x = as_sample(s).values
    return float(np.sum(d.logpdf(x)))


def _safeguarded_newton(fn, dfn, lo, hi, x0):
    """Root of a monotone ``fn`` on the bracket ``[lo, hi]``.

    Newton steps that leave the current bracket are replaced by bisection.
    """
    flo = fn(lo)
    x = x0 if lo < x0 < hi else 0.5 * (lo + hi)
    for _ in range(_MAX_NEWTON_ITER):
        fx = fn(x)
        if fx == 0.0:
            return x
        if np.sign(fx) == np.sign(flo):
            lo, flo = x, fx
        else:
            hi = x
        d = dfn(x)
        step_ok = d != 0 and np.isfinite(d)
        x_new = x - fx / d if step_ok else 0.5 * (lo + hi)
        if not (lo < x_new < hi):
            x_new = 0.5 * (lo + hi)
        if abs(x_new - x) <= _NEWTON_RTOL * abs(x_new):
            return x_new
        x = x_new
    raise NoConvergence(f"Newton iteration did not converge in {_MAX_NEWTON_ITER} steps")


def _expand_bracket(fn, lo, hi, want_lo_sign):
    """Widen ``[lo, hi]`` geometrically until ``fn`` changes sign."""
    for _ in range(_MAX_NEWTON_ITER):
        if np.sign(fn(lo)) == want_lo_sign and np.sign(fn(hi)) == -want_lo_sign:
            return lo, hi
        if np.sign(fn(lo)) != want_lo_sign:
            lo /= 4.0
        if np.sign(fn(hi)) != -want_lo_sign:
            hi *= 4.0
    raise NoConvergence("could not bracket the likelihood equation")


def _fit_gamma(x):
    mean = x.mean()
    s = math.log(mean) - np.log(x).mean()
    if s <= 0:
        raise DegenerateSample("gamma likelihood equation has no finite root")

    def fn(a):
        return math.log(a) - special.digamma(a) - s

    def dfn(a):
        return 1.0 / a - special.polygamma(1, a)

    # Minka's closed-form starting point
    a0 = (3.0 - s + math.sqrt((s - 3.0) ** 2 + 24.0 * s)) / (12.0 * s)
    lo, hi = _expand_bracket(fn, a0 / 2.0, a0 * 2.0, want_lo_sign=1.0)
    a = _safeguarded_newton(fn, dfn, lo, hi, a0)
    return a, a / mean


def _fit_weibull(x):
    # the profile equation is scale-free, so work on x / geometric mean
    lx = np.log(x)
    y = lx - lx.mean()

    def parts(a):
        w = np.exp(a * (y - y.max()))
        sw = w.sum()
        m1 = (w * y).sum() / sw
        m2 = (w * y * y).sum() / sw
        return m1, m2

    def fn(a):
        m1, _ = parts(a)
        return m1 - 1.0 / a

    def dfn(a):
        m1, m2 = parts(a)
        return (m2 - m1 * m1) + 1.0 / (a * a)

    sd = y.std()
    a0 = 1.2825498 / sd  # pi / sqrt(6) / sd of logs
    lo, hi = _expand_bracket(fn, a0 / 2.0, a0 * 2.0, want_lo_sign=-1.0)
    a = _safeguarded_newton(fn, dfn, lo, hi, a0)
    # rate = (n / sum x^a)^(1/a), evaluated stably on the log scale
    log_sum = special.logsumexp(a * lx)
    rate = math.exp((math.log(x.size) - log_sum) / a)
    return a, rate


def fit_mle(family, s) -> Distribution:
    """Maximum-likelihood fit of ``family`` to the sample ``s``.

    Exponential, lognormal, uniform and power have closed forms (the lognormal
    sigma uses divisor n). Gamma and Weibull solve their profile likelihood
    equations in the shape by bracketed Newton iteration.

    Raises
    ------
    DegenerateSample
        If all values are equal or there are fewer than two observations.
    DomainError
        If the sample does not fit the family's support.
    NoConvergence
        If the shape iteration fails within 200 steps.
    """
    fam = Family.parse(family)
    x = as_sample(s).values
    if x.size < 2:
        raise DegenerateSample("at least two observations are needed")
    if x[0] == x[-1]:
        raise DegenerateSample("all observations are equal")
    if fam in (Family.EXPONENTIAL, Family.GAMMA, Family.WEIBULL, Family.LOGNORMAL, Family.POWER):
        if x[0] <= 0:
            raise DomainError(f"{fam.value} requires strictly positive observations")
    if fam is Family.POWER and x[-1] >= 1:
        raise DomainError("power family requires observations in (0, 1)")

    if fam is Family.EXPONENTIAL:
        return exponential(1.0 / x.mean())
    if fam is Family.LOGNORMAL:
        lx = np.log(x)
        return lognormal(lx.mean(), lx.std())
    if fam is Family.UNIFORM:
        return uniform(x[0], x[-1])
    if fam is Family.POWER:
        return power(-x.size / np.log(x).sum())
    if fam is Family.GAMMA:
        return gamma(*_fit_gamma(x))
    return weibull(*_fit_weibull(x))


def param_count(d) -> int:
    return d.n_params


def from_spec(family: str, params: Sequence[float]) -> Distribution:
    return Distribution(Family.parse(family), tuple(params))
