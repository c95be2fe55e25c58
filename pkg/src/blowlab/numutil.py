"""Small numeric helpers shared across modules.

Golden-section search (used to refine sups taken first on coarse grids),
log-spaced grids, and log-log slope fits.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f: Callable[[float], float], a: float, b: float,
               tol: float = 1e-10, maxiter: int = 200) -> tuple[float, float]:
    """Golden-section maximization of a unimodal callable on [a, b].

    Returns (argmax, max). ``tol`` is absolute in the argument; endpoints
    are included so monotone functions resolve to the correct boundary.
    """
    if not b > a:
        raise ValueError("golden_max needs a < b")
    x1 = b - _INVPHI * (b - a)
    x2 = a + _INVPHI * (b - a)
    f1, f2 = f(x1), f(x2)
    lo, hi = a, b
    for _ in range(maxiter):
        if hi - lo <= tol:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = f(x1)
    candidates = [(a, f(a)), (x1, f1), (x2, f2), (b, f(b))]
    return max(candidates, key=lambda t: t[1])


def golden_min(f: Callable[[float], float], a: float, b: float,
               tol: float = 1e-10, maxiter: int = 200) -> tuple[float, float]:
    x, neg = golden_max(lambda t: -f(t), a, b, tol=tol, maxiter=maxiter)
    return x, -neg


def refine_max_on_grid(f: Callable[[float], float], xs: Sequence[float],
                       tol: float = 1e-10) -> tuple[float, float]:
    """Evaluate f on a grid, then golden-refine around the discrete argmax."""
    xs = np.asarray(xs, dtype=float)
    vals = np.array([f(x) for x in xs])
    i = int(np.argmax(vals))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, len(xs) - 1)]
    if hi <= lo:
        return float(xs[i]), float(vals[i])
    x, v = golden_max(f, float(lo), float(hi), tol=tol)
    if v < vals[i]:
        return float(xs[i]), float(vals[i])
    return x, v


def log_grid(lo: float, hi: float, n: int) -> np.ndarray:
    if not (lo > 0 and hi > lo and n >= 2):
        raise ValueError("log_grid needs 0 < lo < hi and n >= 2")
    return np.geomspace(lo, hi, n)


def loglog_slope(x: Sequence[float], y: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.asarray(y, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])
