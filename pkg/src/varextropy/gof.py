"""Goodness of fit, information criteria and model comparison.

The comparison pipeline fits each candidate, builds a kernel estimate of the
data and scores every candidate against it. The two candidates closest to the
estimate in discrimination are then ranked by a variance-normalised rule:
``Y2`` is preferred over ``Y1`` (with ``J1 <= J2``) when::

    J2 < (2 - sqrt(V2 / V1)) J1

so a candidate that is slightly further away but much less dispersed can win.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .distributions import Distribution, Family, as_sample, fit_mle, log_likelihood
from .errors import BoundaryProbability, DomainError, InvalidParameters, VarJError
from .estimation import DensityEstimate, empirical_measures, kde

__all__ = [
    "KSResult",
    "ks_test",
    "kolmogorov_sf",
    "ks_exact_cdf",
    "ad_statistic",
    "ad_pvalue",
    "InfoCriteria",
    "info_criteria",
    "Preference",
    "preference_criterion",
    "CandidateResult",
    "ComparisonReport",
    "compare_models",
]


# -- Kolmogorov-Smirnov -------------------------------------------------------

@dataclass(frozen=True)
class KSResult:
    statistic: float
    pvalue: float
    method: str


def _ks_statistic(x, d):
    n = x.size
    u = np.asarray(d.cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - u), np.max(u - (i - 1) / n)))


def kolmogorov_sf(t: float) -> float:
    """``P(K > t)`` for the limiting Kolmogorov distribution."""
    if t <= 0:
        return 1.0
    if t < 1.0:
        # theta-function form converges fast for small t
        w = math.pi * math.pi / (8.0 * t * t)
        s = sum(math.exp(-(2 * k - 1) ** 2 * w) for k in range(1, 8))
        return 1.0 - math.sqrt(2.0 * math.pi) / t * s
    s = 0.0
    for k in range(1, 101):
        term = math.exp(-2.0 * k * k * t * t)
        s += term if k % 2 else -term
        if term < 1e-18:
            break
    return min(1.0, max(0.0, 2.0 * s))


def ks_exact_cdf(n: int, d: float) -> float:
    """``P(D_n < d)`` by the Marsaglia-Tsang-Wang matrix-power method."""
    if d <= 0:
        return 0.0
    if d >= 1:
        return 1.0
    s = d * d * n
    if s > 7.24 or (s > 3.76 and n > 99):
        return 1.0 - 2.0 * math.exp(-(2.000071 + 0.331 / math.sqrt(n) + 1.409 / n) * s)
    k = int(n * d) + 1
    m = 2 * k - 1
    h = k - n * d
    idx = np.arange(m)
    diff = idx[:, None] - idx[None, :] + 1
    H = (diff >= 0).astype(float)
    H[:, 0] -= h ** (idx + 1.0)
    H[m - 1, :] -= h ** (m - idx.astype(float))
    if 2 * h - 1 > 0:
        H[m - 1, 0] += (2 * h - 1) ** m
    fact = np.array([math.factorial(int(v)) if v > 0 else 1 for v in diff.ravel()], dtype=float)
    H /= np.where(diff > 0, fact.reshape(diff.shape), 1.0)

    # H^n by squaring, keeping a base-10 exponent aside to avoid overflow
    Q = np.eye(m)
    eq = 0
    base, eb = H.copy(), 0
    p = n
    while p:
        if p & 1:
            Q = Q @ base
            eq += eb
            if Q[k - 1, k - 1] > 1e140:
                Q *= 1e-140
                eq += 140
        p >>= 1
        if p:
            base = base @ base
            eb *= 2
            if base[k - 1, k - 1] > 1e140:
                base *= 1e-140
                eb += 140
    val = Q[k - 1, k - 1]
    for i in range(1, n + 1):
        val = val * i / n
        if val < 1e-140:
            val *= 1e140
            eq -= 140
    return float(min(1.0, max(0.0, val * 10.0**eq)))


def ks_test(s, d, method: str = "asymptotic") -> KSResult:
    """One-sample two-sided Kolmogorov-Smirnov test.

    Parameters
    ----------
    method : {"asymptotic", "exact", "auto"}
        ``asymptotic`` uses the limiting distribution of ``sqrt(n) D`` with no
        finite-sample correction; ``exact`` the matrix-power method; ``auto``
        picks ``exact`` for ``n <= 100``.

    Notes
    -----
    Parameters estimated from the same data are not corrected for.
    """
    x = np.asarray(as_sample(s), dtype=float)
    n = x.size
    if method not in ("asymptotic", "exact", "auto"):
        raise InvalidParameters(f"unknown method {method!r}")
    if method == "auto":
        method = "exact" if n <= 100 else "asymptotic"
    stat = _ks_statistic(x, d)
    if method == "exact":
        p = 1.0 - ks_exact_cdf(n, stat)
    else:
        p = kolmogorov_sf(math.sqrt(n) * stat)
    return KSResult(stat, float(min(1.0, max(0.0, p))), method)


# -- Anderson-Darling ---------------------------------------------------------

def ad_statistic(s, d) -> float:
    """Anderson-Darling ``A^2`` for a fully specified distribution.

    The lower tail uses ``F`` and the upper tail the survival function, both
    clamped below at 1e-300, so points deep in a tail do not round to 0 or 1.
    """
    x = np.asarray(as_sample(s), dtype=float)
    n = x.size
    F = np.asarray(d.cdf(x), dtype=float)
    S = np.asarray(d.sf(x), dtype=float)
    if np.any(F <= 0) or np.any(S <= 0):
        raise BoundaryProbability("an observation has probability 0 or 1 under the model")
    lf = np.log(np.maximum(F, 1e-300))
    ls = np.log(np.maximum(S, 1e-300))
    i = np.arange(1, n + 1)
    return float(-n - np.sum((2 * i - 1) * (lf + ls[::-1])) / n)


def _adinf(z):
    if z < 2.0:
        return math.exp(-1.2337141 / z) / math.sqrt(z) * (
            2.00012 + (0.247105 - (0.0649821 - (0.0347962 - (0.011672 - 0.00168691 * z) * z) * z) * z) * z
        )
    return math.exp(-math.exp(
        1.0776 - (2.30695 - (0.43424 - (0.082433 - (0.008056 - 0.0003146 * z) * z) * z) * z) * z
    ))


def _errfix(n, x):
    c = 0.01265 + 0.1757 / n
    if x < c:
        t = x / c
        t = math.sqrt(t) * (1 - t) * (49 * t - 102)
        return t * (0.0037 / (n * n) + 0.00078 / n + 0.00006) / n
    if x < 0.8:
        t = (x - c) / (0.8 - c)
        t = -0.00022633 + (6.54034 - (14.6538 - (14.458 - (8.259 - 1.91864 * t) * t) * t) * t) * t
        return t * (0.04213 / n + 0.01365 / (n * n)) / n
    t = -130.2137 + (745.2337 - (1705.091 - (1950.646 - (1116.360 - 255.7844 * x) * x) * x) * x) * x
    return t / n


def ad_pvalue(n: int, a2: float) -> float:
    """Upper-tail p-value of ``A^2`` for a fully specified model (Marsaglia & Marsaglia).

    Not valid when the parameters were estimated from the same data.
    """
    if n < 1:
        raise DomainError("n must be positive")
    if a2 <= 0:
        return 1.0
    x = _adinf(a2)
    return float(min(1.0, max(0.0, 1.0 - (x + _errfix(n, x)))))


# -- information criteria -----------------------------------------------------

@dataclass(frozen=True)
class InfoCriteria:
    loglik: float
    k: int
    aic: float
    caic: float
    bic: float
    hqic: float


def info_criteria(d: Distribution, s, k: Optional[int] = None) -> InfoCriteria:
    """AIC, small-sample corrected AIC (reported as CAIC), BIC and HQIC."""
    x = as_sample(s)
    n = x.n
    k = d.n_params if k is None else int(k)
    if n <= k + 1:
        raise DomainError(f"need n > k + 1, got n={n}, k={k}")
    ll = log_likelihood(d, x)
    aic = -2.0 * ll + 2.0 * k
    return InfoCriteria(
        loglik=ll,
        k=k,
        aic=aic,
        caic=aic + 2.0 * k * (k + 1) / (n - k - 1),
        bic=-2.0 * ll + k * math.log(n),
        hqic=-2.0 * ll + 2.0 * k * math.log(math.log(n)),
    )


# -- preference rule ----------------------------------------------------------

@dataclass(frozen=True)
class Preference:
    preferred: str
    residual: float
    note: str = ""


def preference_criterion(j1: float, j2: float, v1: float, v2: float) -> Preference:
    """Variance-normalised choice between two candidates.

    ``residual = j2 - (2 - sqrt(v2/v1)) j1``; ``"Y2"`` when negative, else
    ``"Y1"``. For ``j1 < 0`` the rule has no justification and the label is
    ``"undefined"`` (the residual is still reported).
    """
    if not (v1 > 0 and v2 > 0):
        raise DomainError("dispersion values must be positive")
    residual = float(j2 - (2.0 - math.sqrt(v2 / v1)) * j1)
    notes = []
    if j1 > j2:
        notes.append("premise j1 <= j2 does not hold")
    if j1 < 0:
        notes.append("j1 < 0: rule undefined, Y1 by default")
        return Preference("undefined", residual, "; ".join(notes))
    return Preference("Y2" if residual < 0 else "Y1", residual, "; ".join(notes))


# -- comparison ---------------------------------------------------------------

@dataclass
class CandidateResult:
    name: str
    family: str
    params: tuple = ()
    fitted: bool = True
    ks: Optional[KSResult] = None
    ad: Optional[float] = None
    criteria: Optional[InfoCriteria] = None
    measures: dict = field(default_factory=dict)
    error: Optional[str] = None
    error_category: Optional[str] = None
    distribution: Optional[Distribution] = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class ComparisonReport:
    candidates: list
    estimate: DensityEstimate
    ranking: tuple = ()
    j_decision: Optional[Preference] = None
    k_decision: Optional[Preference] = None

    def candidate(self, name: str) -> CandidateResult:
        for c in self.candidates:
            if c.name == name:
                return c
        raise KeyError(name)

    def preferred(self, criterion: str = "j") -> Optional[str]:
        """Name of the preferred candidate under the J or K rule."""
        dec = self.j_decision if criterion == "j" else self.k_decision
        if dec is None or len(self.ranking) < 2:
            return None
        return self.ranking[0] if dec.preferred in ("Y1", "undefined") else self.ranking[1]


def _evaluate(name, cand, sample, est, log_ratio_domain) -> CandidateResult:
    fitted = not isinstance(cand, Distribution)
    fam = Family.parse(cand).value if fitted else cand.family.value
    res = CandidateResult(name=name, family=fam, fitted=fitted)
    try:
        d = fit_mle(cand, sample) if fitted else cand
        res.distribution = d
        res.params = d.params
        res.ks = ks_test(sample, d)
        res.ad = ad_statistic(sample, d)
        res.criteria = info_criteria(d, sample)
        res.measures = {m.name: m for m in empirical_measures(est, d, log_ratio_domain)}
    except VarJError as exc:
        res.error, res.error_category = str(exc), exc.category
    return res


def compare_models(
    s,
    candidates: Sequence,
    names: Optional[Sequence[str]] = None,
    bandwidth: Optional[float] = None,
    gridpoints: int = 512,
    log_ratio_domain: str = "sample-range",
) -> ComparisonReport:
    """Fit, score and rank candidate models for a sample.

    Parameters
    ----------
    s : Sample or array_like
        Observations.
    candidates : sequence
        Family tags (fitted by maximum likelihood) or fixed
        :class:`Distribution` instances, at least two.
    names : sequence of str, optional
        Labels; default to the family tag, suffixed on repeats.

    Returns
    -------
    ComparisonReport
        Candidates that fail carry ``error`` and are left out of the ranking.
        The J and K decisions compare the two candidates with the smallest
        discrimination.
    """
    sample = as_sample(s)
    candidates = list(candidates)
    if len(candidates) < 2:
        raise InvalidParameters("compare_models needs at least two candidates")
    if names is None:
        names, seen = [], {}
        for c in candidates:
            base = Family.parse(c).value if not isinstance(c, Distribution) else str(c)
            seen[base] = seen.get(base, 0) + 1
            names.append(base if seen[base] == 1 else f"{base}#{seen[base]}")
    if len(names) != len(candidates) or len(set(names)) != len(names):
        raise InvalidParameters("candidate names must be unique, one per candidate")
    est = kde(sample, bandwidth=bandwidth, gridpoints=gridpoints)
    results = [_evaluate(n, c, sample, est, log_ratio_domain) for n, c in zip(names, candidates)]
    ok = [r for r in results if r.ok]
    ok.sort(key=lambda r: r.measures["discrimination"].value)
    report = ComparisonReport(results, est, tuple(r.name for r in ok))
    if len(ok) >= 2:
        m1, m2 = ok[0].measures, ok[1].measures
        report.j_decision = preference_criterion(
            m1["discrimination"].value, m2["discrimination"].value,
            m1["varj_divergence"].value, m2["varj_divergence"].value,
        )
        report.k_decision = preference_criterion(
            m1["kl_divergence"].value, m2["kl_divergence"].value,
            m1["var_kl"].value, m2["var_kl"].value,
        )
    return report
