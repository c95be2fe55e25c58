"""Closed-form and asymptotic checks for the gamma-function helpers."""

import math

import pytest
from numpy.testing import assert_allclose

from blowlab.errors import DomainError
from blowlab.specfun import (gamma, gamma_ratio, log_gamma, log_sphere_area,
                             sphere_area, stirling_log_gamma)

# surface measure of the unit sphere in R^d
SPHERE_AREAS = {
    1: 2.0,
    2: 2.0 * math.pi,
    3: 4.0 * math.pi,
    4: 2.0 * math.pi ** 2,
    5: 8.0 * math.pi ** 2 / 3.0,
    6: math.pi ** 3,
}


@pytest.mark.parametrize("d,expected", sorted(SPHERE_AREAS.items()))
def test_sphere_area_closed_values(d, expected):
    assert_allclose(sphere_area(d), expected, rtol=1e-13)
    assert_allclose(log_sphere_area(d), math.log(expected), rtol=1e-13)


def test_sphere_area_rejects_bad_dimension():
    with pytest.raises(DomainError):
        sphere_area(0)


@pytest.mark.parametrize("z", [0.1, 0.5, 1.0, 2.5, 7.0, 41.5, 300.0])
def test_log_gamma_matches_lgamma(z):
    assert_allclose(log_gamma(z), math.lgamma(z), rtol=1e-14, atol=1e-14)


def test_gamma_matches_math_gamma():
    assert_allclose(gamma(4.5), math.gamma(4.5), rtol=1e-13)


def test_gamma_rejects_nonpositive_argument():
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(-1.5)


def test_gamma_ratio_matches_direct_quotient():
    z, a, b = 3.0, 1.25, 0.5
    direct = math.gamma(z + a) / math.gamma(z + b)
    assert_allclose(gamma_ratio(z, a, b), direct, rtol=1e-13)


def test_gamma_ratio_survives_large_arguments():
    # Gamma(z + a) alone overflows here; the quotient grows like z^(a-b)
    z, a, b = 1e6, 1.0, 0.25
    assert_allclose(gamma_ratio(z, a, b), z ** (a - b), rtol=1e-5)


def test_gamma_ratio_domain():
    with pytest.raises(DomainError):
        gamma_ratio(0.5, -1.0, 0.0)


@pytest.mark.parametrize("z,rtol", [(5.0, 2e-2), (50.0, 2e-3), (5000.0, 2e-5)])
def test_stirling_approximates_log_factorial(z, rtol):
    # leading-order target is ln Gamma(z + 1) = ln(z!), not ln Gamma(z)
    assert_allclose(stirling_log_gamma(z), log_gamma(z + 1.0), rtol=rtol)


def test_stirling_domain():
    with pytest.raises(DomainError):
        stirling_log_gamma(0.0)
