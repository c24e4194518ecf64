import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from varextropy import distributions as D
from varextropy import quadrature as Q
from varextropy.errors import InvalidParameters, NonFiniteIntegrand


def test_constant():
    res = Q.integrate(lambda x: 1.0, 0.0, 1.0)
    assert res.value == pytest.approx(1.0, abs=1e-15)
    assert res.converged and res.evaluations > 0 and res.abs_error_estimate >= 0


def test_semi_infinite_density():
    res = Q.integrate(lambda x: 4 * np.exp(-4 * x), 0.0, math.inf)
    assert res.value == pytest.approx(1.0, abs=1e-10)


def test_gamma_integral():
    res = Q.integrate(lambda x: x**2 * 16 * np.exp(-8 * x) * 5 * np.exp(-5 * x), 0.0, math.inf)
    assert res.value == pytest.approx(160 / 13**3, abs=1e-12)


def test_doubly_infinite_and_lower_infinite():
    gauss = lambda x: np.exp(-0.5 * x * x) / math.sqrt(2 * math.pi)  # noqa: E731
    assert Q.integrate(gauss, -math.inf, math.inf).value == pytest.approx(1.0, abs=1e-10)
    assert Q.integrate(gauss, -math.inf, 0.0).value == pytest.approx(0.5, abs=1e-10)


def test_kronrod_rule_degree():
    # the 15-point Kronrod rule integrates polynomials up to degree 22 exactly on one panel
    for k in range(0, 23):
        exact = (1 - (-1) ** (k + 1)) / (k + 1)
        assert float(np.sum(Q.WGK * Q.XGK**k)) == pytest.approx(exact, abs=1e-14)
    # the embedded Gauss rule up to degree 13
    for k in range(0, 14):
        exact = (1 - (-1) ** (k + 1)) / (k + 1)
        assert float(np.sum(Q.WG * Q.XGK**k)) == pytest.approx(exact, abs=1e-14)


def test_stacked_integrand():
    res = Q.integrate(lambda x: np.stack([np.ones_like(x), x, x * x]), 0.0, 2.0)
    np.testing.assert_allclose(res.value, [2.0, 2.0, 8 / 3], atol=1e-14)


def test_nonfinite_integrand():
    with pytest.raises(NonFiniteIntegrand):
        Q.integrate(lambda x: np.where(x > 0.5, np.nan, 1.0), 0.0, 1.0)


def test_bad_arguments():
    with pytest.raises(InvalidParameters):
        Q.integrate(lambda x: x, 1.0, 0.0)
    with pytest.raises(InvalidParameters):
        Q.integrate(lambda x: x, 0.0, 1.0, tol=0.0)


def test_nonconvergence_warns():
    with pytest.warns(Q.QuadratureWarning):
        res = Q.integrate(lambda x: 1 / np.sqrt(x) + np.sin(1 / x), 0.0, 1.0, 1e-14, limit=64)
    assert not res.converged


def test_expectation_examples():
    e = D.exponential(1.0)
    assert Q.expectation(e, lambda x: np.ones_like(x)).value == pytest.approx(1.0, abs=1e-12)
    assert Q.expectation(e, lambda x: x).value == pytest.approx(1.0, abs=1e-9)
    assert Q.expectation(e, lambda x: np.exp(-x)).value == pytest.approx(0.5, abs=1e-9)


def test_grid_integrate_examples():
    assert Q.grid_integrate([0, 1], [1, 1]) == 1.0
    assert Q.grid_integrate([0, 0.5, 1], [0, 0.5, 1]) == 0.5
    x = np.linspace(0, 10, 512)
    assert Q.grid_integrate(x, np.exp(-x)) == pytest.approx(1 - math.exp(-10), abs=1e-4)
    with pytest.raises(InvalidParameters):
        Q.grid_integrate([0, 1, 2], [1, 2])
    with pytest.raises(InvalidParameters):
        Q.grid_integrate([0, 2, 1], [1, 2, 3])


def test_deterministic():
    h = lambda x: np.log1p(x) * np.exp(-x)  # noqa: E731
    a = Q.integrate(h, 0.0, math.inf)
    b = Q.integrate(h, 0.0, math.inf)
    assert a.value == b.value and a.abs_error_estimate == b.abs_error_estimate


def _random_family(draw):
    kind = draw(st.integers(0, 5))
    if kind == 0:
        return D.exponential(draw(st.floats(0.2, 5.0)))
    if kind == 1:
        return D.gamma(draw(st.floats(1.5, 6.0)), draw(st.floats(0.2, 3.0)))
    if kind == 2:
        return D.weibull(draw(st.floats(1.5, 4.0)), draw(st.floats(0.2, 3.0)))
    if kind == 3:
        return D.lognormal(draw(st.floats(-1.0, 1.0)), draw(st.floats(0.3, 1.0)))
    if kind == 4:
        a = draw(st.floats(-2.0, 2.0))
        return D.uniform(a, a + draw(st.floats(0.5, 3.0)))
    return D.power(draw(st.floats(1.0, 4.0)))


families = st.composite(lambda draw: _random_family(draw))


@given(families(), st.sampled_from(["one", "x", "f", "f2"]))
def test_expectation_matches_direct(d, which):
    tol = 1e-10
    h = {"one": lambda x: np.ones_like(x), "x": lambda x: x,
         "f": d.pdf, "f2": lambda x: d.pdf(x) ** 2}[which]
    lo, hi = d.support
    scale = float(d.ppf(0.75) - d.ppf(0.25))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", Q.QuadratureWarning)
        via_u = Q.expectation(d, h, tol).value
        direct = Q.integrate(lambda x: h(x) * d.pdf(x), lo, hi, tol, scale=scale).value
    assert via_u == pytest.approx(direct, abs=10 * tol)
