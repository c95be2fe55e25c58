"""The homogeneous singular steady state of the fractional reaction problem.

For exponents p above the existence threshold 1 + alpha/(d - alpha), the
profile u(x) = s |x|^(-alpha/(p-1)) solves the stationary equation
(-Delta)^(alpha/2) u = u^p with a coefficient s = s(alpha, d, p) given in
closed form by a ratio of gamma functions. This module evaluates s in log
space, its Morrey norm, its large-d growth, and a quadrature residual check
that the profile really annihilates the stationary equation: the fractional
Laplacian of |x|^(-g) is evaluated as a principal-value hypersingular
integral in radial coordinates and compared against s^(p-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, ResolutionError
from .norms import RadialProfile
from .specfun import log_gamma, log_sphere_area, sphere_area

__all__ = [
    "SingularSolution",
    "singular_constant",
    "log_singular_constant",
    "power_multiplier",
    "singular_morrey_norm",
    "singular_profile",
    "singular_asymptotics_check",
    "stationary_residual",
    "singular_table",
    "AsymptoticsCheck",
]


def _gamma_arguments(alpha: float, d: float, p: float) -> dict:
    g = alpha / (2.0 * (p - 1.0))
    return {
        "alpha/(2(p-1))": g,
        "d/2 - alpha/(2(p-1))": d / 2.0 - g,
        "p*alpha/(2(p-1))": p * g,
        "d/2 - p*alpha/(2(p-1))": d / 2.0 - p * g,
    }


def _check_region(alpha: float, d: float, p: float) -> dict:
    if not (0.0 < alpha <= 2.0):
        raise DomainError("alpha must lie in (0, 2]")
    if p <= 1.0:
        raise DomainError("p must exceed 1")
    args = _gamma_arguments(alpha, d, p)
    for name, val in args.items():
        if val <= 0.0:
            raise DomainError(
                f"outside the existence region p > 1 + alpha/(d-alpha): "
                f"gamma argument {name} = {val:g} is not positive")
    return args


def log_singular_constant(alpha: float, d: float, p: float) -> float:
    """log s(alpha, d, p); stable at dimensions far beyond float overflow."""
    a = _check_region(alpha, d, p)
    num = alpha * math.log(2.0) \
        + log_gamma(a["d/2 - alpha/(2(p-1))"]) + log_gamma(a["p*alpha/(2(p-1))"])
    den = log_gamma(a["alpha/(2(p-1))"]) + log_gamma(a["d/2 - p*alpha/(2(p-1))"])
    return (num - den) / (p - 1.0)


def singular_constant(alpha: float, d: float, p: float) -> float:
    return math.exp(log_singular_constant(alpha, d, p))


def power_multiplier(alpha: float, d: float, gamma: float) -> float:
    """Factor l with (-Delta)^(alpha/2) |x|^(-gamma) = l |x|^(-gamma-alpha).

    Valid for 0 < gamma < d - alpha. At gamma = alpha/(p-1) this equals
    s(alpha, d, p)^(p-1).
    """
    if not (0.0 < gamma < d - alpha):
        raise DomainError("need 0 < gamma < d - alpha")
    return math.exp(alpha * math.log(2.0)
                    + log_gamma((gamma + alpha) / 2.0) + log_gamma((d - gamma) / 2.0)
                    - log_gamma(gamma / 2.0) - log_gamma((d - gamma - alpha) / 2.0))


@dataclass(frozen=True)
class SingularSolution:
    """u(x) = s_value * |x|^(-alpha/(p-1)) with s_value fixed by (alpha, d, p)."""

    alpha: float
    d: int
    p: float
    s_value: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "s_value",
                           singular_constant(self.alpha, self.d, self.p))

    @property
    def decay_exponent(self) -> float:
        return self.alpha / (self.p - 1.0)

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise DomainError("the profile is singular at the origin; r must be positive")
        return self.s_value * r ** (-self.decay_exponent)


def singular_profile(sol: SingularSolution, r_min: float = 1e-3,
                     r_max: float = 1e3, per_decade: int = 800) -> RadialProfile:
    """Sampled copy of the steady state, decay hints attached."""
    g = sol.decay_exponent
    return RadialProfile.from_function(
        sol.d, sol, r_min, r_max, per_decade,
        head_exponent=g, tail_exponent=g)


def singular_morrey_norm(sol: SingularSolution, q: float = 1.0) -> float:
    """Closed-form centered Morrey norm of the steady state at the critical
    order d(p-1)/alpha: (sigma_d / (d - q*alpha/(p-1)))^(1/q) * s.

    The ball integral of u^q converges only while q*alpha/(p-1) < d.
    """
    if q < 1.0:
        raise DomainError("q must be at least 1")
    g = sol.decay_exponent
    if q * g >= sol.d:
        raise DomainError(
            f"q = {q} breaks local q-integrability: q*alpha/(p-1) = {q * g:g} >= d = {sol.d}")
    return (sphere_area(sol.d) / (sol.d - q * g)) ** (1.0 / q) * sol.s_value


@dataclass
class AsymptoticsCheck:
    alpha: float
    p: float
    d_values: list
    ratios: list           # s(alpha, d, p) / d^(alpha/(2(p-1)))
    last_relative_change: float


def singular_asymptotics_check(alpha: float, p: float,
                               d_list: Sequence[float]) -> AsymptoticsCheck:
    """Growth check s ~ const * d^(alpha/(2(p-1))) along increasing d."""
    ds = list(d_list)
    if any(b <= a for a, b in zip(ds, ds[1:])):
        raise DomainError("d_list must be increasing")
    e = alpha / (2.0 * (p - 1.0))
    ratios = [math.exp(log_singular_constant(alpha, d, p) - e * math.log(d))
              for d in ds]
    change = abs(ratios[-1] / ratios[-2] - 1.0) if len(ratios) >= 2 else math.nan
    return AsymptoticsCheck(alpha, p, ds, ratios, change)


# ---------------------------------------------------------------------------
# stationary residual via principal-value quadrature
# ---------------------------------------------------------------------------

def _log_pv_normalization(alpha: float, d: int) -> float:
    # constant in (-Delta)^(alpha/2)u(x) = c * pv-int (u(x)-u(y))/|x-y|^(d+alpha) dy
    return math.log(alpha) + (alpha - 1.0) * math.log(2.0) \
        + log_gamma((d + alpha) / 2.0) - (d / 2.0) * math.log(math.pi) \
        - log_gamma(1.0 - alpha / 2.0)


def _angular_kernel(r: float, rho: float, delta: float, d: int, alpha: float) -> float:
    """Integral over unit directions w of |r e1 - rho w|^(-d-alpha),
    restricted to |r e1 - rho w| > delta (the cap matters only when
    |r - rho| < delta)."""
    q_plus = (r + rho) ** 2
    q_star = max(delta ** 2, (r - rho) ** 2)
    if d == 3:
        ex = (1.0 + alpha) / 2.0
        return 2.0 * math.pi / ((1.0 + alpha) * r * rho) \
            * (q_star ** -ex - q_plus ** -ex)
    # general d >= 2: one-dimensional polar-angle quadrature over the
    # admissible cap [theta_star, pi]
    m_star = (r * r + rho * rho - delta * delta) / (2.0 * r * rho)
    theta_star = math.acos(min(1.0, max(-1.0, m_star))) if m_star < 1.0 else 0.0
    ex = (d + alpha) / 2.0

    def integrand(theta: float) -> float:
        q = r * r + rho * rho - 2.0 * r * rho * math.cos(theta)
        return math.sin(theta) ** (d - 2) * q ** -ex

    val, _ = quad(integrand, theta_star, math.pi, epsabs=0.0, epsrel=1e-11,
                  limit=200)
    return sphere_area(d - 1) * val


def stationary_residual(sol: SingularSolution, probe_radius: float,
                        delta_ratio: float = 0.05, quad_tol: float = 1e-10) -> float:
    """Relative defect of the steady state in the stationary equation.

    For alpha = 2 the Laplacian of r^(-g) is symbolic and the residual is
    pure arithmetic. For alpha in (0, 2) the hypersingular integral is
    evaluated with the ball |y - x| < delta excised and replaced by its
    second-order Taylor correction; delta = delta_ratio * probe_radius keeps
    the whole scheme scale covariant.
    """
    r = float(probe_radius)
    if r <= 0:
        raise DomainError("probe radius must be positive")
    g = sol.decay_exponent
    target = sol.s_value ** (sol.p - 1.0)
    if sol.alpha == 2.0:
        # -Lap r^(-g) = g (d - 2 - g) r^(-g-2)
        ell = g * (sol.d - 2.0 - g)
        return abs(ell - target) / target
    if sol.d < 2:
        raise DomainError("the radial principal-value scheme needs d >= 2")
    d, alpha = sol.d, sol.alpha
    delta = delta_ratio * r

    def outer(rho: float) -> float:
        return rho ** (d - 1) * (r ** -g - rho ** -g) \
            * _angular_kernel(r, rho, delta, d, alpha)

    scale = r ** (-g - alpha)
    pieces = []
    errs = []
    for a, b, pts in ((0.0, r - delta, None),
                      (r - delta, r + delta, None),
                      (r + delta, np.inf, [2.0 * r, 10.0 * r])):
        val, err = quad(outer, a, b, epsabs=quad_tol * scale, epsrel=quad_tol,
                        limit=400, points=pts if b != np.inf else None)
        pieces.append(val)
        errs.append(err)
    # excised ball: pv of the gradient term vanishes by symmetry, the Hessian
    # term integrates to -(Lap u / 2d) * sigma_d * delta^(2-alpha)/(2-alpha)
    lap_u = g * (g + 2.0 - d) * r ** (-g - 2.0)
    inner = -(lap_u / (2.0 * d)) * sphere_area(d) * delta ** (2.0 - alpha) / (2.0 - alpha)
    total_err = sum(errs)
    if total_err > 1e-6 * scale:
        raise ResolutionError(
            f"hypersingular quadrature achieved only {total_err:.2e} "
            f"absolute error against scale {scale:.2e}")
    c = math.exp(_log_pv_normalization(alpha, d))
    ell_num = c * (sum(pieces) + inner) / scale
    return abs(ell_num - target) / target


def singular_table(alpha: float, p: float, d_list: Sequence[float],
                   q: float = 1.0) -> list:
    """Rows (alpha, d, p, s, morrey_norm) over a dimension sweep."""
    rows = []
    for d in d_list:
        sol = SingularSolution(alpha, int(d), p)
        rows.append((alpha, int(d), p, sol.s_value, singular_morrey_norm(sol, q)))
    return rows
