"""Scalar special functions and root finding used by the analytic formulas."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy import special

_SQRT2 = math.sqrt(2.0)
_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)

# Q(x) underflows to zero past this point anyway; bisection bracket for the inverse.
Q_INVERSE_BRACKET = 40.0


class DomainError(ValueError):
    """Argument outside the domain of a numerical routine."""


class BracketError(ValueError):
    """Root-finding interval does not bracket a sign change."""


def check_probability(p: float, name: str = "probability") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {p!r}")
    return p


def q_function(x):
    """Gaussian tail probability Q(x) = P(N(0,1) > x).

    Accepts a float or an array. Evaluated as erfc(x / sqrt(2)) / 2, which keeps
    full relative precision in the upper tail.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("q_function requires finite arguments")
    out = 0.5 * special.erfc(arr / _SQRT2)
    if out.ndim == 0:
        return float(out)
    return out


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 400,
) -> float:
    """Root of a continuous function on [lo, hi] by plain bisection.

    Stops once the bracket width drops below ``tol * max(1, |x|)``.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"f({lo})={flo!r} and f({hi})={fhi!r} have the same sign")
    for _ in range(max_iter):
        mid = lo + 0.5 * (hi - lo)
        if hi - lo <= tol * max(1.0, abs(mid)) or mid in (lo, hi):
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            lo, flo = mid, fmid
        else:
            hi = mid
    return lo + 0.5 * (hi - lo)


def _q_upper_inverse(p: float) -> float:
    # p <= 0.5, root is >= 0 where Q is computed without cancellation
    x = bisect_root(lambda t: q_function(t) - p, 0.0, Q_INVERSE_BRACKET, tol=1e-15)
    # one Newton step polishes the last bits: Q'(x) = -phi(x)
    dens = _INV_SQRT_2PI * math.exp(-0.5 * x * x)
    if dens > 0.0:
        x += (q_function(x) - p) / dens
    return x


def q_inverse(p: float) -> float:
    """Inverse of :func:`q_function` on the open interval (0, 1)."""
    p = float(p)
    if not 0.0 < p < 1.0:
        raise DomainError(f"q_inverse requires 0 < p < 1, got {p!r}")
    if p == 0.5:
        return 0.0
    if p > 0.5:
        # 1 - p is exact for p in [0.5, 1)
        return -_q_upper_inverse(1.0 - p)
    return _q_upper_inverse(p)


def gamma_function(x: float) -> float:
    """Euler gamma function for positive real arguments."""
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma_function requires a finite x > 0, got {x!r}")
    return math.gamma(x)
