"""Convex source terms and the decreasing blowup-time transform.

A source term F is convex, nondecreasing on [0, inf) with F(0) = 0 and must
satisfy the finite tail-integral condition int^inf du/F(u) < inf; the
transform h(w) = int_w^inf du/F(u) and its inverse convert moment lower
bounds into blowup-time bounds. Power laws get closed forms; everything
else goes through compactified adaptive quadrature plus bracketed root
finding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError, OsgoodViolationError

__all__ = [
    "Nonlinearity",
    "OsgoodTransform",
    "fujita_exponent",
    "threshold_constant_c",
    "NONLINEARITY_FAMILIES",
]

_CONVEXITY_FLOOR = -1e-10
# probe scales for the large-u tail exponent audit
_TAIL_PROBES = (1e4, 1e6, 1e8)


@dataclass(frozen=True)
class Nonlinearity:
    """A source term u -> F(u) on [0, inf) with one-sided derivative.

    Use the factory classmethods; ``custom`` accepts arbitrary callables and
    runs the convexity / tail audits that the named families satisfy by
    construction.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    dfn: Callable[[np.ndarray], np.ndarray]
    label: str
    kind: str = "custom"
    coeff: float = math.nan   # power kind only
    power: float = math.nan   # power kind only
    params: dict = field(default_factory=dict)

    # -- factories ---------------------------------------------------------

    @classmethod
    def power_law(cls, c: float = 1.0, p: float = 2.0) -> "Nonlinearity":
        if not (c > 0 and p > 1):
            raise DomainError("power law needs c > 0 and p > 1")

        def f(u):
            return c * np.power(u, p)

        def df(u):
            return c * p * np.power(u, p - 1.0)

        return cls(f, df, f"{c:g}*u^{p:g}", kind="power", coeff=c, power=p,
                   params={"c": c, "p": p})

    @classmethod
    def power_sum(cls, c1: float = 1.0, p1: float = 2.0,
                  c2: float = 1.0, p2: float = 3.0) -> "Nonlinearity":
        if not (c1 > 0 and c2 > 0 and p1 > 1 and p2 > 1):
            raise DomainError("power sum needs positive weights and exponents > 1")

        def f(u):
            return c1 * np.power(u, p1) + c2 * np.power(u, p2)

        def df(u):
            return c1 * p1 * np.power(u, p1 - 1.0) + c2 * p2 * np.power(u, p2 - 1.0)

        return cls(f, df, f"{c1:g}*u^{p1:g}+{c2:g}*u^{p2:g}", kind="power-sum",
                   params={"c1": c1, "p1": p1, "c2": c2, "p2": p2})

    @classmethod
    def exponential(cls, c: float = 1.0) -> "Nonlinearity":
        if not c > 0:
            raise DomainError("exponential family needs c > 0")

        def f(u):
            return c * np.expm1(u)

        def df(u):
            return c * np.exp(u)

        return cls(f, df, f"{c:g}*(e^u-1)", kind="exponential", params={"c": c})

    @classmethod
    def zero(cls) -> "Nonlinearity":
        """Source-free evolution; useful for pure-transport checks. Fails
        the detonation audits by construction, so it cannot feed the
        blow-up criterion."""

        def f(u):
            return np.zeros_like(np.asarray(u, dtype=float))

        return cls(f, f, "0", kind="zero")

    @classmethod
    def custom(cls, fn: Callable, dfn: Callable, label: str = "custom") -> "Nonlinearity":
        obj = cls(fn, dfn, label, kind="custom")
        obj._audit()
        return obj

    # -- evaluation --------------------------------------------------------

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < 0):
            raise DomainError("source terms are defined on u >= 0")
        out = self.fn(u)
        return float(out) if np.ndim(out) == 0 else out

    def derivative(self, u):
        u = np.asarray(u, dtype=float)
        if np.any(u < 0):
            raise DomainError("source terms are defined on u >= 0")
        out = self.dfn(u)
        return float(out) if np.ndim(out) == 0 else out

    # -- audits (constructor-time for custom callables) ---------------------

    def _audit(self) -> None:
        if abs(float(self.fn(np.asarray(0.0)))) > 1e-12:
            raise DomainError("F(0) must vanish")
        # sampled second differences; scale guard keeps the floor meaningful
        us = np.geomspace(1e-3, 1e3, 61)
        du = us * 1e-3
        with np.errstate(over="ignore", invalid="ignore"):
            sec = self.fn(us + du) - 2.0 * self.fn(us) + self.fn(np.maximum(us - du, 0.0))
            scale = np.maximum(1.0, np.abs(self.fn(us + du)))
            bad = sec / scale < _CONVEXITY_FLOOR
        if np.any(bad):
            raise DomainError(f"{self.label}: sampled second differences are negative")
        self.check_osgood()

    def check_osgood(self) -> None:
        """Reject tails with local exponent <= 1, where int^inf du/F diverges."""
        f = self.fn
        for lo, hi in zip(_TAIL_PROBES[:-1], _TAIL_PROBES[1:]):
            with np.errstate(over="ignore"):
                flo, fhi = float(f(np.asarray(lo))), float(f(np.asarray(hi)))
            if not (flo > 0 and fhi > 0):
                raise OsgoodViolationError(f"{self.label}: tail is not positive")
            if math.isinf(flo) or math.isinf(fhi):
                continue  # faster than any power, tail integral converges
            slope = (math.log(fhi) - math.log(flo)) / (math.log(hi) - math.log(lo))
            if slope <= 1.005:
                raise OsgoodViolationError(
                    f"{self.label}: tail exponent {slope:.3f} <= 1, "
                    "the blowup-time integral diverges")


class OsgoodTransform:
    """h(w) = int_w^inf du / F(u) and its inverse.

    Power laws use the closed forms h(w) = w^(1-p)/(c(p-1)) and
    h^{-1}(T) = (c(p-1)T)^(-1/(p-1)). Other kinds compactify the improper
    integral with u = w/s, s in (0, 1], and invert by bracketed root
    finding seeded from the local power-law behaviour of F at large u.
    """

    def __init__(self, source: Nonlinearity, quad_tol: float = 1e-12):
        source.check_osgood()
        self.source = source
        self.quad_tol = float(quad_tol)

    # closed-form fast path predicate
    @property
    def _is_power(self) -> bool:
        return self.source.kind == "power"

    def h(self, w: float) -> float:
        w = float(w)
        if not w > 0:
            raise DomainError("h is defined for w > 0")
        if self._is_power:
            c, p = self.source.coeff, self.source.power
            return w ** (1.0 - p) / (c * (p - 1.0))
        f = self.source.fn

        def integrand(s: float) -> float:
            u = w / s
            with np.errstate(over="ignore"):
                fu = float(f(np.asarray(u)))
            if math.isinf(fu):
                return 0.0
            return (w / (s * s)) / fu

        val, _ = quad(integrand, 0.0, 1.0, epsabs=0.0, epsrel=self.quad_tol,
                      limit=200)
        return val

    def h_inverse(self, T: float) -> float:
        T = float(T)
        if not T > 0:
            raise DomainError("h_inverse is defined for T > 0")
        if self._is_power:
            c, p = self.source.coeff, self.source.power
            return (c * (p - 1.0) * T) ** (-1.0 / (p - 1.0))
        # seed from the local exponent of F at large u
        u0, u1 = 1e2, 1e4
        f = self.source.fn
        p_hat = (math.log(float(f(np.asarray(u1)))) - math.log(float(f(np.asarray(u0))))) \
            / (math.log(u1) - math.log(u0))
        p_hat = max(p_hat, 1.01)
        c_hat = float(f(np.asarray(u1))) / u1 ** p_hat
        w = (c_hat * (p_hat - 1.0) * T) ** (-1.0 / (p_hat - 1.0))
        # h is decreasing; expand a bracket around the seed
        lo, hi = w, w
        for _ in range(200):
            if self.h(lo) > T:
                break
            lo /= 4.0
        else:
            raise DomainError("failed to bracket h_inverse from below")
        for _ in range(200):
            if self.h(hi) < T:
                break
            hi *= 4.0
        else:
            raise DomainError("failed to bracket h_inverse from above")
        return brentq(lambda x: self.h(x) - T, lo, hi, rtol=1e-13, maxiter=200)


def fujita_exponent(alpha: float, d: int) -> float:
    """Critical exponent 1 + alpha/d separating the mass-driven blowup range."""
    if not (0 < alpha <= 2):
        raise DomainError("order alpha must lie in (0, 2]")
    if int(d) != d or d < 1:
        raise DomainError("dimension must be a positive integer")
    return 1.0 + alpha / float(d)


def threshold_constant_c(alpha: float, p: float,
                         override: Optional[float] = None) -> float:
    """Sharp sup-criterion constant (1/(p-1))^(1/(p-1)) for alpha = 2.

    No closed form is established for alpha < 2; the alpha = 2 value is
    returned as a configurable default there (pass ``override`` to supply
    your own). Callers that report verdicts should flag the default via
    :func:`threshold_constant_source`.
    """
    if not p > 1:
        raise DomainError("threshold constant needs p > 1")
    if not (0 < alpha <= 2):
        raise DomainError("order alpha must lie in (0, 2]")
    if override is not None:
        if not override > 0:
            raise DomainError("threshold override must be positive")
        return float(override)
    return (1.0 / (p - 1.0)) ** (1.0 / (p - 1.0))


def threshold_constant_source(alpha: float, override: Optional[float] = None) -> str:
    if override is not None:
        return "user"
    return "exact" if alpha == 2 else "alpha2-default"


NONLINEARITY_FAMILIES = {
    "power": Nonlinearity.power_law,
    "power-sum": Nonlinearity.power_sum,
    "exponential": Nonlinearity.exponential,
    "zero": Nonlinearity.zero,
}
