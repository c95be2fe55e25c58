"""Integrating-factor stepper: ODE fidelity, structure laws, audits."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from blowlab.errors import DomainError
from blowlab.kernels import Grid, GridFunction, KernelSpec
from blowlab.nonlinearity import Nonlinearity
from blowlab.solver import (BlowupSignal, SimConfig, dichotomy_experiment,
                            jensen_report, run, step)


def make_cfg(**kw):
    base = dict(kernel=KernelSpec.gaussian(),
                nonlinearity=Nonlinearity.power_law(1.0, 2.0),
                dt_init=1e-3, dt_min=1e-12, t_end=0.5)
    base.update(kw)
    return SimConfig(**base)


def test_config_validation():
    with pytest.raises(DomainError):
        make_cfg(dt_min=1e-2)           # dt_min >= dt_init
    with pytest.raises(DomainError):
        make_cfg(t_end=0.0)
    with pytest.raises(DomainError):
        make_cfg(moment_targets=(0.5, -1.0))


def test_step_rejects_out_of_range_dt():
    g = Grid(1, 8.0, 64)
    u = GridFunction.gaussian(g, mass=1.0, sigma=1.0)
    with pytest.raises(DomainError):
        step(u, make_cfg(), 0.1)


def stepped_constant_error(dt):
    """Drive u' = u^2, u(0) = 1 on constant data with bare steps; the spatial
    operator vanishes there and the exact value at t = 1/2 is 2."""
    g = Grid(1, 8.0, 64)
    cfg = make_cfg(dt_init=dt)
    u = GridFunction(g, np.ones(g.shape))
    for _ in range(round(0.5 / dt)):
        u = step(u, cfg, dt)
    return abs(u.sup() - 2.0)


def test_ode_fidelity_on_constant_data():
    assert stepped_constant_error(5e-4) < 2e-6


def test_second_order_convergence():
    ratio = stepped_constant_error(2e-3) / stepped_constant_error(1e-3)
    assert 3.0 < ratio < 5.0


def test_source_free_run_matches_kernel_convolution():
    g = Grid(1, 32.0, 512)
    u0 = GridFunction.gaussian(g, mass=1.5, sigma=1.0)
    cfg = SimConfig(kernel=KernelSpec.gaussian(), nonlinearity=Nonlinearity.zero(),
                    dt_init=0.05, dt_min=1e-12, t_end=1.0)
    traj = run(u0, cfg)
    from blowlab.kernels import semigroup_kernel
    k = semigroup_kernel(KernelSpec.gaussian(), 1.0, g)
    exact = np.fft.fftshift(np.fft.ifftn(
        np.fft.fftn(np.fft.ifftshift(k.values))
        * np.fft.fftn(np.fft.ifftshift(u0.values))).real) * g.cell_volume
    assert float(np.max(np.abs(traj.final_state.values - exact))) < 1e-12
    assert traj.outcome == "reached_horizon"
    assert traj.reliable
    assert abs(traj.mass[-1] - traj.mass[0]) < 1e-9    # no source, no mass


def test_mass_production_law():
    # the recorded source integrals account for the entire mass gain
    g = Grid(1, 32.0, 512)
    u0 = GridFunction.gaussian(g, mass=1.0, sigma=1.0)
    traj = run(u0, make_cfg(t_end=0.2))
    produced = float(np.trapezoid(traj.source_integral, traj.t))
    gained = traj.mass[-1] - traj.mass[0]
    assert abs(gained - produced) / traj.mass[-1] < 1e-6


def test_comparison_principle():
    g = Grid(1, 32.0, 512)
    small = GridFunction.gaussian(g, mass=1.0, sigma=1.0)
    large = GridFunction.gaussian(g, mass=1.2, sigma=1.0)
    cfg = make_cfg(t_end=0.35, snapshot_times=(0.3,))
    lo = run(small, cfg).snapshots[0.3]
    hi = run(large, cfg).snapshots[0.3]
    assert float(np.min(hi.values - lo.values)) > -1e-12


def test_translation_equivariance():
    g = Grid(1, 32.0, 512)
    u = GridFunction.gaussian(g, mass=1.0, sigma=1.0)
    cfg = make_cfg()
    rolled_then_stepped = step(GridFunction(g, np.roll(u.values, 37)), cfg, 1e-3)
    stepped_then_rolled = np.roll(step(u, cfg, 1e-3).values, 37)
    assert float(np.max(np.abs(rolled_then_stepped.values
                               - stepped_then_rolled))) < 1e-14


def test_constant_data_blowup_time():
    # u' = 2 u^2 from 1 detonates at exactly 1/2
    g = Grid(1, 8.0, 64)
    u0 = GridFunction(g, np.ones(g.shape))
    cfg = SimConfig(kernel=KernelSpec.gaussian(),
                    nonlinearity=Nonlinearity.power_law(2.0, 2.0),
                    dt_init=1e-3, dt_min=1e-12, t_end=1.0, u_max=1e6)
    traj = run(u0, cfg)
    assert traj.outcome == "blew_up"
    assert 0.45 < traj.t_obs < 0.55
    assert not traj.reliable      # constant data always trips the support audit


def test_support_audit_grows_the_box_then_gives_up():
    """Constant data has no compact support, so the audit must double the
    box (twice at most) and then mark the run unreliable instead of looping."""
    g = Grid(1, 8.0, 64)
    u0 = GridFunction(g, np.ones(g.shape))
    traj = run(u0, make_cfg())
    assert traj.outcome == "reached_horizon"
    assert not traj.reliable
    doubled = [n for n in traj.notes if "doubled" in n]
    assert len(doubled) == 2
    assert any("boundary margin" in n for n in traj.notes)
    assert traj.grid == Grid(1, 32.0, 256)


def test_moment_inequality_report():
    g = Grid(1, 32.0, 1024)
    u0 = GridFunction.gaussian(g, mass=2.0, sigma=1.0)
    traj = run(u0, make_cfg(t_end=0.2, moment_targets=(0.5,)))
    jr = jensen_report(traj, Nonlinearity.power_law(1.0, 2.0), 0.5)
    assert jr.steps > 100
    assert jr.fraction_ok >= 0.99
    assert jr.integrated_ok
    with pytest.raises(DomainError):
        jensen_report(traj, Nonlinearity.power_law(1.0, 2.0), 0.75)


def test_step_signals_blowup_on_overflow():
    g = Grid(1, 8.0, 64)
    u = GridFunction(g, np.full(g.shape, 1e160))
    with pytest.raises(BlowupSignal):
        step(u, make_cfg(), 1e-3)


def test_dichotomy_brackets_the_threshold():
    g = Grid(1, 64.0, 512)
    base = GridFunction.gaussian(g, mass=1.0, sigma=1.0)
    cfg = SimConfig(kernel=KernelSpec.gaussian(),
                    nonlinearity=Nonlinearity.power_law(1.0, 4.0),
                    dt_init=0.05, dt_min=1e-14, t_end=30.0, u_max=1e4)
    summary = dichotomy_experiment([0.5, 4.0], base, cfg, bisection_steps=3)
    assert summary.rows[0].outcome == "global_decay"
    assert summary.rows[-1].outcome == "blowup"
    assert len(summary.rows) == 5                 # two endpoints, three cuts
    assert 0.5 < summary.lambda_lo < summary.lambda_hi < 4.0
    assert summary.monotone
    blown = [r for r in summary.rows if r.outcome == "blowup"]
    assert all(r.t_obs is not None for r in blown)


def test_dichotomy_validation():
    g = Grid(1, 64.0, 512)
    base = GridFunction.gaussian(g, mass=1.0, sigma=1.0)
    with pytest.raises(DomainError):
        dichotomy_experiment([0.5, 4.0], base, SimConfig(
            kernel=KernelSpec.gaussian(),
            nonlinearity=Nonlinearity.power_sum(),
            dt_init=0.05, dt_min=1e-14, t_end=30.0))
    with pytest.raises(DomainError):
        # p = 2 sits below the mass-driven range boundary 1 + alpha/d = 3
        dichotomy_experiment([0.5, 4.0], base, SimConfig(
            kernel=KernelSpec.gaussian(),
            nonlinearity=Nonlinearity.power_law(1.0, 2.0),
            dt_init=0.05, dt_min=1e-14, t_end=30.0))
