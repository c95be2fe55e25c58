"""Lattice semigroup kernels, stable profiles, and the subordination bridge."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from blowlab.errors import DomainError, ResolutionError
from blowlab.kernels import (Grid, GridFunction, KernelSpec, semigroup_kernel,
                             stable_profile, subordinator_density,
                             verify_kernel_bounds)


# ---------------------------------------------------------------------------
# grids and sampled fields
# ---------------------------------------------------------------------------

def test_grid_geometry():
    g = Grid(1, 8.0, 64)
    assert g.spacing == 0.25
    assert g.cell_volume == 0.25
    assert g.shape == (64,)
    ax = g.axis()
    assert ax[0] == -8.0
    assert ax[g.n // 2] == 0.0     # origin sits at index n//2
    g2 = Grid(2, 4.0, 32)
    assert g2.cell_volume == g2.spacing ** 2
    assert g2.radius().shape == (32, 32)


@pytest.mark.parametrize("args", [(3, 8.0, 64), (1, 8.0, 100), (1, -1.0, 64),
                                  (1, 8.0, 2)])
def test_grid_validation(args):
    with pytest.raises(DomainError):
        Grid(*args)


def test_gaussian_field_mass_and_scaling():
    g = Grid(1, 32.0, 1024)
    u = GridFunction.gaussian(g, mass=4.0, sigma=1.0)
    assert_allclose(u.mass(), 4.0, rtol=1e-9)
    assert u.sup() > 0
    assert_allclose(u.scaled(2.0).mass(), 8.0, rtol=1e-9)


def test_from_function_samples_on_axis():
    g = Grid(1, 8.0, 64)
    u = GridFunction.from_function(g, lambda x: np.exp(-x * x))
    assert_allclose(u.values[g.n // 2], 1.0, rtol=1e-14)


def test_fields_must_be_nonnegative():
    g = Grid(1, 8.0, 64)
    with pytest.raises(DomainError):
        GridFunction.from_function(g, lambda x: np.cos(x))


# ---------------------------------------------------------------------------
# kernel specs
# ---------------------------------------------------------------------------

def test_effective_orders():
    assert KernelSpec.gaussian().alpha_effective(1) == 2.0
    assert KernelSpec.bump().alpha_effective(1) == 2.0
    assert KernelSpec.heavy_tail(2.5).alpha_effective(1) == 1.5
    assert KernelSpec.fractional(1.3).alpha_effective(1) == 1.3


def test_heavy_tail_order_window():
    # finite mass needs n > d, an order below two needs n < d + 2
    with pytest.raises(DomainError):
        KernelSpec.heavy_tail(3.5).alpha_effective(1)


def test_fractional_strength_is_the_diffusivity():
    assert KernelSpec.fractional(2.0, strength=0.7).coefficient(1) == 0.7


# ---------------------------------------------------------------------------
# lattice semigroup kernels
# ---------------------------------------------------------------------------

def test_kernel_mass_is_a_lattice_identity():
    g = Grid(1, 48.0, 1024)
    for spec in (KernelSpec.gaussian(), KernelSpec.bump(),
                 KernelSpec.fractional(1.2)):
        k = semigroup_kernel(spec, 0.8, g, boundary_tol=1.0)
        assert abs(k.mass() - 1.0) < 1e-12
        assert k.min_value() > -1e-9


def test_kernel_composition_law():
    g = Grid(1, 48.0, 1024)
    spec = KernelSpec.bump()
    k1 = semigroup_kernel(spec, 0.7, g, boundary_tol=1.0)
    k2 = semigroup_kernel(spec, 0.3, g, boundary_tol=1.0)
    k3 = semigroup_kernel(spec, 1.0, g, boundary_tol=1.0)
    conv = np.fft.fftshift(np.fft.ifftn(
        np.fft.fftn(np.fft.ifftshift(k1.values))
        * np.fft.fftn(np.fft.ifftshift(k2.values))).real) * g.cell_volume
    assert float(np.max(np.abs(conv - k3.values))) < 1e-10


def test_boundary_audit_rejects_small_boxes():
    with pytest.raises(ResolutionError):
        semigroup_kernel(KernelSpec.gaussian(), 25.0, Grid(1, 8.0, 256))


# ---------------------------------------------------------------------------
# one-sided stable subordinator
# ---------------------------------------------------------------------------

def test_subordinator_density_levy_closed_form():
    # beta = 1/2 is the Levy density (4 pi)^(-1/2) s^(-3/2) e^(-1/(4s))
    for s in (0.3, 0.8, 2.0):
        closed = (4.0 * math.pi) ** -0.5 * s ** -1.5 * math.exp(-1.0 / (4.0 * s))
        assert_allclose(float(subordinator_density(1.0, s)), closed, rtol=1e-12)


def test_subordinator_negative_moment_identity():
    """int s^(-q) eta_beta(s) ds = Gamma(q/beta) / (beta Gamma(q)), checked
    for beta = 0.6 by direct quadrature against the gamma-function value."""
    q, beta = 0.7, 0.6
    lhs, _ = quad(lambda s: float(subordinator_density(1.2, s)) * s ** (-q),
                  0.0, 2000.0, limit=150, points=[0.5, 2.0, 20.0, 200.0])
    rhs = math.gamma(q / beta) / (beta * math.gamma(q))
    assert abs(lhs / rhs - 1.0) < 1e-4


# ---------------------------------------------------------------------------
# stable profiles
# ---------------------------------------------------------------------------

def test_profile_gaussian_endpoint():
    prof = stable_profile(2.0, 1)
    for rho in (0.0, 0.5, 2.0):
        closed = (4.0 * math.pi) ** -0.5 * math.exp(-rho * rho / 4.0)
        assert_allclose(float(prof(rho)), closed, rtol=1e-10)


def test_profile_center_value_identity():
    # R(0) = (4 pi)^(-d/2) (2/alpha) Gamma(d/alpha) / Gamma(d/2)
    alpha, d = 1.4, 2
    prof = stable_profile(alpha, d)
    closed = (4.0 * math.pi) ** (-d / 2.0) * (2.0 / alpha) \
        * math.gamma(d / alpha) / math.gamma(d / 2.0)
    assert_allclose(float(prof(0.0)), closed, rtol=1e-10)


def test_profile_closed_and_subordination_routes_agree():
    closed = stable_profile(1.0, 3, method="closed")
    sub = stable_profile(1.0, 3, method="subordination")
    rho = np.linspace(0.0, 8.0, 33)
    assert float(np.max(np.abs(closed(rho) - sub(rho)))) < 1e-7


def test_profile_self_similar_kernel():
    prof = stable_profile(1.4, 2)
    t, r = 3.0, 1.7
    manual = t ** (-2.0 / 1.4) * float(prof(r * t ** (-1.0 / 1.4)))
    assert_allclose(prof.kernel_radial(t, r), manual, rtol=1e-12)


def test_profile_method_validation():
    with pytest.raises(DomainError):
        stable_profile(1.0, 3, method="bogus")


def test_kernel_bound_report():
    rep = verify_kernel_bounds(stable_profile(1.0, 3), np.geomspace(0.1, 30.0, 40))
    assert rep.min_value > 0
    assert rep.decay_constant > 0
    assert rep.gradient_constant is not None        # alpha = 1 has a derivative
    assert 3.5 < rep.empirical_tail_exponent < 4.5  # close to d + alpha


def test_kernel_bound_report_without_closed_derivative():
    rep = verify_kernel_bounds(stable_profile(1.4, 2), np.geomspace(0.1, 20.0, 24))
    assert rep.gradient_constant is None


def test_kernel_bound_grid_validation():
    with pytest.raises(DomainError):
        verify_kernel_bounds(stable_profile(1.0, 3), [1.0, 2.0, 3.0])
