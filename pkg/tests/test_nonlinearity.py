"""Source terms, their blowup-time transform, and critical exponents."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from blowlab.errors import DomainError, OsgoodViolationError
from blowlab.nonlinearity import (NONLINEARITY_FAMILIES, Nonlinearity,
                                  OsgoodTransform, fujita_exponent,
                                  threshold_constant_c,
                                  threshold_constant_source)


def test_power_law_values_and_derivative():
    F = Nonlinearity.power_law(0.7, 2.6)
    u = np.array([0.0, 1.0, 3.0])
    assert_allclose(F(u), 0.7 * u ** 2.6, rtol=1e-14)
    assert_allclose(F.derivative(u), 0.7 * 2.6 * u ** 1.6, rtol=1e-14)


def test_sources_reject_negative_states():
    F = Nonlinearity.power_law(1.0, 2.0)
    with pytest.raises(DomainError):
        F(np.array([1.0, -0.1]))


def test_power_transform_closed_forms():
    c, p = 0.7, 2.6
    h = OsgoodTransform(Nonlinearity.power_law(c, p))
    w = 1.7
    assert_allclose(h.h(w), w ** (1.0 - p) / (c * (p - 1.0)), rtol=1e-13)
    T = 0.31
    assert_allclose(h.h_inverse(T), (c * (p - 1.0) * T) ** (-1.0 / (p - 1.0)),
                    rtol=1e-13)


@pytest.mark.parametrize("make", [
    lambda: Nonlinearity.power_law(0.7, 2.6),
    lambda: Nonlinearity.custom(lambda u: u ** 2 * (1.0 + u),
                                lambda u: 2.0 * u + 3.0 * u ** 2),
    lambda: Nonlinearity.power_sum(0.5, 2.0, 0.25, 3.0),
])
def test_transform_round_trip(make):
    h = OsgoodTransform(make())
    for T in np.geomspace(1e-3, 1e3, 13):
        assert abs(h.h(h.h_inverse(T)) / T - 1.0) < 1e-9


def test_exponential_transform_closed_form():
    """For F = c (e^u - 1) the time-to-detonation from level w integrates
    in closed form to -ln(1 - e^(-w)) / c."""
    c = 1.3
    h = OsgoodTransform(Nonlinearity.exponential(c))
    for w in (0.2, 1.0, 4.0):
        assert_allclose(h.h(w), -math.log(1.0 - math.exp(-w)) / c, rtol=1e-10)


def test_transform_domain():
    h = OsgoodTransform(Nonlinearity.power_law(1.0, 2.0))
    with pytest.raises(DomainError):
        h.h(0.0)
    with pytest.raises(DomainError):
        h.h_inverse(-1.0)


def test_zero_source_evaluates_to_zero_and_fails_osgood():
    F = Nonlinearity.zero()
    assert np.all(F(np.array([0.0, 2.0, 5.0])) == 0.0)
    with pytest.raises(OsgoodViolationError):
        F.check_osgood()


def test_linear_tail_is_rejected_at_construction():
    # int^inf du/u diverges, so a linear source can never detonate
    with pytest.raises(OsgoodViolationError):
        Nonlinearity.custom(lambda u: u, lambda u: np.ones_like(u))


def test_concave_source_is_rejected():
    with pytest.raises(DomainError):
        Nonlinearity.custom(lambda u: np.sqrt(u), lambda u: 0.5 / np.sqrt(u))


def test_nonvanishing_source_is_rejected():
    with pytest.raises(DomainError):
        Nonlinearity.custom(lambda u: u ** 2 + 1.0, lambda u: 2.0 * u)


def test_power_sum_values():
    F = Nonlinearity.power_sum(0.5, 2.0, 0.25, 3.0)
    assert_allclose(F(2.0), 0.5 * 4.0 + 0.25 * 8.0, rtol=1e-14)


def test_family_registry_names():
    assert sorted(NONLINEARITY_FAMILIES) == ["exponential", "power",
                                             "power-sum", "zero"]


def test_fujita_exponent_values():
    assert fujita_exponent(2.0, 1) == 3.0
    assert_allclose(fujita_exponent(1.0, 3), 4.0 / 3.0, rtol=1e-15)
    with pytest.raises(DomainError):
        fujita_exponent(2.5, 1)
    with pytest.raises(DomainError):
        fujita_exponent(1.0, 0)


def test_threshold_constant_values_and_source():
    assert threshold_constant_c(2.0, 2.0) == 1.0
    assert_allclose(threshold_constant_c(2.0, 3.0), math.sqrt(0.5), rtol=1e-14)
    assert threshold_constant_c(1.5, 2.0, override=0.8) == 0.8
    assert threshold_constant_source(2.0) == "exact"
    assert threshold_constant_source(1.5) == "alpha2-default"
    assert threshold_constant_source(1.5, override=0.8) == "user"
    with pytest.raises(DomainError):
        threshold_constant_c(2.0, 1.0)
    with pytest.raises(DomainError):
        threshold_constant_c(1.0, 2.0, override=-1.0)
