import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varextropy import distributions as D
from varextropy import measures as M
from varextropy.errors import DomainError, InvalidParameters
from varextropy.order_stats import (
    OrderStatSpec,
    beta_expectation,
    order_stat_density,
    varj_divergence_order,
    varj_inaccuracy_order,
)
from varextropy.quadrature import integrate

SPECS = [(i, n) for n in range(1, 6) for i in range(1, n + 1)]


def _direct_inaccuracy(parent, i, n):
    o = order_stat_density(OrderStatSpec(parent, i, n))
    return M._Moments(parent, o).variance(lambda x, f, g: -0.5 * g)[0]


def _direct_divergence(parent, i, n):
    return M.varj_divergence(order_stat_density(OrderStatSpec(parent, i, n)), parent).value


# -- spec validation and densities -------------------------------------------

@pytest.mark.parametrize("i, n", [(0, 3), (4, 3), (1, 0), (1.5, 3)])
def test_spec_validation(i, n):
    with pytest.raises(InvalidParameters):
        OrderStatSpec(D.exponential(1.0), i, n)


def test_single_draw_is_parent(family_member):
    o = order_stat_density(OrderStatSpec(family_member, 1, 1))
    x = family_member.ppf(np.linspace(0.01, 0.99, 25))
    np.testing.assert_allclose(o.pdf(x), family_member.pdf(x), rtol=1e-12)


def test_uniform_minimum_of_two():
    o = order_stat_density(OrderStatSpec(D.uniform(), 1, 2))
    x = np.linspace(0.01, 0.99, 25)
    np.testing.assert_allclose(o.pdf(x), 2 * (1 - x), rtol=1e-12)


def test_exponential_maximum_of_two():
    o = order_stat_density(OrderStatSpec(D.exponential(1.0), 2, 2))
    x = np.linspace(0.05, 8.0, 40)
    np.testing.assert_allclose(o.pdf(x), 2 * np.exp(-x) * (1 - np.exp(-x)), rtol=1e-12)
    lo, hi = o.support
    assert integrate(o.pdf, lo, hi, 1e-12).value == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("i, n", SPECS)
def test_normalisation(family_member, i, n):
    o = order_stat_density(OrderStatSpec(family_member, i, n))
    lo, hi = o.support
    assert integrate(o.pdf, lo, hi, 1e-11, scale=float(family_member.ppf(0.5))).value == pytest.approx(
        1.0, abs=1e-8
    )


@given(st.integers(1, 6), st.integers(0, 5), st.floats(0.02, 0.98))
def test_quantile_inverts_cdf(i, extra, u):
    o = order_stat_density(OrderStatSpec(D.gamma(2.5, 1.3), i, i + extra))
    assert o.cdf(o.ppf(u)) == pytest.approx(u, abs=1e-10)


# -- Beta expectations --------------------------------------------------------

def test_beta_expectation_examples():
    for a, b in [(1, 1), (2.5, 0.7), (3, 9)]:
        assert beta_expectation(D.uniform(), a, b) == pytest.approx(1.0, abs=1e-10)
    assert beta_expectation(D.exponential(1.0), 1, 1) == pytest.approx(0.5, abs=1e-12)
    assert beta_expectation(D.exponential(1.0), 1, 1, power=2) == pytest.approx(1 / 3, abs=1e-12)


def test_beta_expectation_errors():
    with pytest.raises(DomainError):
        beta_expectation(D.uniform(), 0.0, 1.0)
    with pytest.raises(DomainError):
        beta_expectation(D.uniform(), 1.0, 1.0, power=3)


# -- the two propositions -----------------------------------------------------

def test_inaccuracy_order_examples():
    assert varj_inaccuracy_order(OrderStatSpec(D.uniform(), 1, 2)).value == pytest.approx(1 / 12, abs=1e-12)
    d = D.exponential(1.0)
    assert varj_inaccuracy_order(OrderStatSpec(d, 1, 1)).value == pytest.approx(
        M.varextropy(d).value, abs=1e-12
    )
    assert varj_inaccuracy_order(OrderStatSpec(d, 2, 3)).value == pytest.approx(
        _direct_inaccuracy(d, 2, 3), abs=1e-8
    )


def test_divergence_order_examples():
    d = D.exponential(1.0)
    assert varj_divergence_order(OrderStatSpec(d, 1, 1)).value == pytest.approx(0.0, abs=1e-12)
    assert varj_divergence_order(OrderStatSpec(D.uniform(), 1, 2)).value == pytest.approx(1 / 18, abs=1e-12)
    assert varj_divergence_order(OrderStatSpec(d, 3, 3)).value == pytest.approx(
        _direct_divergence(d, 3, 3), abs=1e-8
    )


def test_report_fields():
    rep = varj_divergence_order(OrderStatSpec(D.exponential(2.0), 2, 4))
    assert rep.name == "varj_divergence_order" and rep.method == "beta-expectation"
    assert rep.abs_error >= 0
    assert varj_inaccuracy_order(OrderStatSpec(D.exponential(2.0), 2, 4)).name == "varj_inaccuracy_order"


@pytest.mark.parametrize("i, n", SPECS)
def test_formulas_match_direct_quadrature(family_member, i, n):
    spec = OrderStatSpec(family_member, i, n)
    a = varj_inaccuracy_order(spec).value
    b = varj_divergence_order(spec).value
    assert a >= 0 and b >= 0
    assert a == pytest.approx(_direct_inaccuracy(family_member, i, n), abs=1e-8)
    assert b == pytest.approx(_direct_divergence(family_member, i, n), abs=1e-8)


@pytest.mark.parametrize("i, n", SPECS)
def test_uniform_reflection_symmetry(i, n):
    u = D.uniform()
    mirror = OrderStatSpec(u, n + 1 - i, n)
    spec = OrderStatSpec(u, i, n)
    assert varj_inaccuracy_order(spec).value == pytest.approx(varj_inaccuracy_order(mirror).value, abs=1e-12)
    assert varj_divergence_order(spec).value == pytest.approx(varj_divergence_order(mirror).value, abs=1e-12)


def test_large_sample_size_stays_finite():
    # the Beta constants go through log-Gamma and stay finite at n = 50
    rep = varj_inaccuracy_order(OrderStatSpec(D.exponential(1.0), 25, 50))
    assert math.isfinite(rep.value) and rep.value > 0
