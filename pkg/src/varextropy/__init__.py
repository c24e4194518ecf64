"""Extropy, varextropy and related information measures for continuous distributions."""

from .bounds import (
    BoundResult,
    chebyshev_bound,
    chebyshev_bound_exponential,
    series_bound_exponential,
    series_bound_numeric,
    series_bound_power,
)
from .datasets import load_dataset
from .distributions import (
    Distribution,
    Family,
    Sample,
    exponential,
    fit_mle,
    gamma,
    log_likelihood,
    lognormal,
    power,
    uniform,
    weibull,
)
from .errors import VarJError
from .estimation import DensityEstimate, empirical_measures, kde, silverman_bandwidth
from .genfun import (
    GenFunMoments,
    divergence_genfun,
    extropy_genfun,
    extropy_moments,
    genfun_derivative_check,
)
from .gof import (
    ComparisonReport,
    ad_statistic,
    compare_models,
    info_criteria,
    ks_test,
    preference_criterion,
)
from .measures import (
    CATALOGUE,
    MeasureReport,
    density_cov,
    discrimination,
    entropy,
    extropy,
    inaccuracy,
    kl_divergence,
    pair_catalogue,
    var_kl,
    varentropy,
    varextropy,
    varj_divergence,
    varj_inaccuracy,
)
from .order_stats import (
    OrderStatSpec,
    beta_expectation,
    order_stat_density,
    varj_divergence_order,
    varj_inaccuracy_order,
)
from .quadrature import IntegralResult, expectation, integrate

__version__ = "0.1.0"
