"""Moment criterion: smoothed moments, threshold crossing, classification."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from blowlab.blowup import (CriterionInput, default_horizon_grid,
                            evaluate_criterion, moment_at_zero, moment_field,
                            morrey_sufficient_condition)
from blowlab.errors import DomainError
from blowlab.kernels import Grid, GridFunction, KernelSpec
from blowlab.nonlinearity import Nonlinearity
from blowlab.norms import RadialProfile
from blowlab.numutil import log_grid, loglog_slope


def test_moment_field_matches_closed_gaussian():
    """A Gaussian smoothed by the order-two semigroup stays Gaussian with
    variance sigma^2 + 2 A T; checked pointwise across the whole box."""
    A, T, sigma, mass = 0.7, 0.9, 1.2, 3.0
    g = Grid(1, 48.0, 1024)
    u = GridFunction.gaussian(g, mass=mass, sigma=sigma)
    field = moment_field(u, KernelSpec.fractional(2.0, strength=A), T)
    var = sigma ** 2 + 2.0 * A * T
    x = g.axis()
    closed = mass / math.sqrt(2.0 * math.pi * var) * np.exp(-x * x / (2.0 * var))
    assert float(np.max(np.abs(field.values - closed))) < 1e-12


def test_moment_at_zero_radial_route():
    A, T, sigma, mass = 1.0, 0.5, 1.0, 2.0
    u = RadialProfile.from_function(
        1, lambda r: mass * np.exp(-r * r / (2.0 * sigma ** 2))
        / math.sqrt(2.0 * math.pi * sigma ** 2),
        r_min=1e-4, r_max=30.0)
    W = moment_at_zero(u, KernelSpec.fractional(2.0, strength=A), T)
    closed = mass / math.sqrt(2.0 * math.pi * (sigma ** 2 + 2.0 * A * T))
    assert abs(W / closed - 1.0) < 1e-4


def test_radial_moments_need_fractional_kernels():
    u = RadialProfile.from_function(1, lambda r: np.exp(-r * r),
                                    r_min=1e-3, r_max=20.0)
    with pytest.raises(DomainError):
        moment_at_zero(u, KernelSpec.gaussian(), 1.0)


def test_default_horizon_grid_shape():
    T = default_horizon_grid()
    assert T[0] > 0 and T[-1] > T[0]
    assert np.all(np.diff(np.log(T)) > 0)


def test_constant_data_gives_exact_ratio_but_no_verdict():
    """Spatially constant data reduces the moment to the plain ODE, so the
    ratio is exactly c*T; its support also fills the torus, which the audit
    must flag, and unreliable points never count toward the verdict."""
    g = Grid(1, 8.0, 64)
    c = 2.0
    u0 = GridFunction(g, c * np.ones(g.shape))
    verdict = evaluate_criterion(CriterionInput(
        u0=u0, kernel=KernelSpec.gaussian(),
        nonlinearity=Nonlinearity.power_law(1.0, 2.0),
        T_grid=tuple(np.geomspace(0.1, 10.0, 7))))
    for pt in verdict.curve:
        assert abs(pt.ratio - c * pt.T) < 1e-12
        assert not pt.reliable
    assert verdict.classification == "not_met_on_grid"
    assert verdict.T_star is None


def test_criterion_met_with_grid_extension():
    # the crossing sits above the supplied grid; the sweep must extend
    # while the reliable ratio keeps climbing and find it
    g = Grid(1, 48.0, 1024)
    u0 = GridFunction.gaussian(g, mass=4.0, sigma=1.0)
    verdict = evaluate_criterion(CriterionInput(
        u0=u0, kernel=KernelSpec.gaussian(),
        nonlinearity=Nonlinearity.power_law(1.0, 2.0),
        T_grid=tuple(np.geomspace(0.01, 0.1, 5))))
    assert verdict.classification == "criterion_met"
    assert verdict.T_star is not None and verdict.T_star > 0.1
    assert len(verdict.curve) > 5
    assert verdict.center is not None


def test_threshold_override_delays_crossing():
    g = Grid(1, 48.0, 1024)
    u0 = GridFunction.gaussian(g, mass=4.0, sigma=1.0)
    base = evaluate_criterion(CriterionInput(
        u0=u0, kernel=KernelSpec.gaussian(),
        nonlinearity=Nonlinearity.power_law(1.0, 2.0)))
    strict = evaluate_criterion(CriterionInput(
        u0=u0, kernel=KernelSpec.gaussian(),
        nonlinearity=Nonlinearity.power_law(1.0, 2.0), threshold=3.0))
    assert base.classification == "criterion_met"
    assert strict.T_star is None or strict.T_star >= base.T_star


def test_supercritical_small_data_classification():
    g = Grid(1, 256.0, 2048)
    u0 = GridFunction.gaussian(g, mass=0.3, sigma=1.0)
    verdict = evaluate_criterion(CriterionInput(
        u0=u0, kernel=KernelSpec.gaussian(),
        nonlinearity=Nonlinearity.power_law(1.0, 4.0)))
    assert verdict.classification == "fujita_supercritical_small_data"
    assert verdict.T_star is None
    assert verdict.morrey_value is not None and verdict.morrey_value > 0
    assert verdict.hypothesis_note == "bounded integrable data (torus truncation)"


def test_subcritical_moment_growth_exponent():
    # below the critical power the scaled moment T^(2/3) W grows like T^(1/6)
    u = RadialProfile.from_function(1, lambda r: 2.0 * np.exp(-r * r),
                                    r_min=1e-3, r_max=50.0)
    spec = KernelSpec.fractional(2.0)
    T = log_grid(10.0, 1e4, 25)
    scaled = np.array([t ** (2.0 / 3.0) * moment_at_zero(u, spec, float(t))
                       for t in T])
    assert abs(loglog_slope(T, scaled) - 1.0 / 6.0) < 0.01


def test_morrey_condition_scaling_and_flags():
    g = Grid(1, 32.0, 512)
    u = GridFunction.gaussian(g, mass=1.0, sigma=1.0)
    c1 = morrey_sufficient_condition(u, 2.0, 1, 4.0, C_threshold=1.0)
    c2 = morrey_sufficient_condition(u.scaled(2.0), 2.0, 1, 4.0,
                                     C_threshold=1.0)
    assert_allclose(c2.value, 2.0 * c1.value, rtol=1e-12)   # 1-homogeneous
    assert c1.order == 1.5                                  # d(p-1)/alpha
    assert not c1.met
    assert morrey_sufficient_condition(u, 2.0, 1, 4.0, C_threshold=0.5).met


def test_morrey_condition_needs_supercritical_power():
    g = Grid(1, 32.0, 512)
    u = GridFunction.gaussian(g, mass=1.0, sigma=1.0)
    with pytest.raises(DomainError):
        morrey_sufficient_condition(u, 2.0, 1, 2.5, C_threshold=1.0)
