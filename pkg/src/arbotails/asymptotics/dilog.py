"""Dilogarithm, the cubic x^3 + x^2 + x - 1 and the closed-form limits built from them."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from ..errors import InvalidArgument, NoConvergence


@lru_cache(maxsize=None)
def _bernoulli(n_max: int) -> tuple[Fraction, ...]:
    # B_0..B_n_max with B_1 = -1/2, by the standard recurrence
    B = [Fraction(1)]
    for m in range(1, n_max + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / (m + 1))
    return tuple(B)


def _log(w: complex) -> complex:
    # adding 0.0 turns a -0.0 imaginary part into +0.0, so -x for real x > 0
    # lands on the upper side of the log cut like mpmath does
    return cmath.log(complex(w.real, w.imag + 0.0))


class _Float:
    log = staticmethod(_log)
    pi = math.pi
    eps = 1e-17
    zero = 0j

    @staticmethod
    def num(x):
        return complex(x)


class _Mp:
    log = staticmethod(mpmath.log)
    zero = mpmath.mpc(0)

    @property
    def pi(self):
        return mpmath.pi

    @property
    def eps(self):
        return mpmath.mpf(10) ** (-mpmath.mp.dps - 2)

    @staticmethod
    def num(x):
        return mpmath.mpc(x)


def _li2(z, ops):
    pi2_6 = ops.pi ** 2 / 6
    if z == 0:
        return ops.zero
    if z == 1:
        return ops.num(pi2_6)
    if abs(z) > 1:
        return -pi2_6 - ops.log(-z) ** 2 / 2 - _li2(1 / z, ops)
    if z.real > 0.5:
        return pi2_6 - ops.log(z) * ops.log(1 - z) - _li2(1 - z, ops)
    # Li2(z) = sum B_n u^(n+1)/(n+1)!, u = -log(1-z); here |u| < 1.8 < 2 pi
    u = -ops.log(1 - z)
    total = ops.zero
    power = u
    fact = 1
    n = 0
    while True:
        if n >= 400:
            raise NoConvergence("dilogarithm series did not converge")
        B = _bernoulli(max(64, n + 1))
        if B[n]:
            term = ops.num(B[n].numerator) / B[n].denominator * power / fact
            total += term
            if n > 2 and abs(term) < ops.eps * max(abs(total), 1):
                return total
        n += 1
        power *= u
        fact *= n + 1


def li2(z: complex, dps: int | None = None):
    """Principal-branch dilogarithm (cut along [1, inf)).

    Uses inversion for |z| > 1 and reflection for Re z > 1/2, then the
    Bernoulli series in -log(1 - z).  ``dps`` switches to mpmath arithmetic at
    that many digits and returns an ``mpc``.
    """
    if dps is None:
        z = complex(z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise InvalidArgument(f"li2 needs a finite argument, got {z}")
        return _li2(z, _Float)
    with mpmath.workdps(dps + 10):
        z = mpmath.mpc(z)
        if not mpmath.isfinite(z):
            raise InvalidArgument(f"li2 needs a finite argument, got {z}")
        out = _li2(z, _Mp())
    with mpmath.workdps(dps):
        return +out


def _cubic(x):
    return x ** 3 + x ** 2 + x - 1


_SEEDS = {"real": 0.54, "complex_lower": complex(-0.77, -1.1)}


def cubic_root(branch: str = "real", dps: int | None = None):
    """Root of x^3 + x^2 + x - 1 by Newton's method: the real one or the one with Im < 0."""
    if branch not in _SEEDS:
        raise InvalidArgument(f"branch must be one of {sorted(_SEEDS)}")
    if dps is None:
        return _newton(complex(_SEEDS[branch]), 1e-15, branch == "real")
    with mpmath.workdps(dps + 10):
        x = _newton(mpmath.mpc(_SEEDS[branch]), mpmath.mpf(10) ** (-dps - 5), branch == "real")
        return mpmath.mpf(x) if branch == "real" else x


def _newton(x, tol, real: bool):
    for _ in range(200):
        step = _cubic(x) / (3 * x ** 2 + 2 * x + 1)
        x -= step
        if abs(step) < tol:
            return x.real if real else x
    raise NoConvergence("Newton iteration for the cubic did not converge")


def reference_constants(dps: int | None = None) -> dict:
    """Closed forms of the limits discussed for 8_5 and 8_18.

    V1 and V2_85 use the real and lower complex roots of the cubic; the term
    4 pi i log(X) in V2_85 is evaluated at the complex root.
    """
    if dps is None:
        X1, X2 = cubic_root("real"), cubic_root("complex_lower")
        return _constants(X1, X2, li2, cmath.log, math.pi, 1j)
    with mpmath.workdps(dps + 10):
        X1, X2 = cubic_root("real", dps), cubic_root("complex_lower", dps)
        out = _constants(X1, X2, lambda z: li2(z, dps), mpmath.log, mpmath.pi, mpmath.mpc(0, 1))
        out["V1"] = mpmath.re(out["V1"])
        return out


def _constants(X1, X2, L, log, pi, I) -> dict:
    def V(X):
        return -4 * L(X) + L(X ** 2) - 2 * log(X) ** 2 + pi ** 2 / 6

    return {
        "V1": V(X1).real,
        "V2_85": V(X2) - 4 * pi * I * log(X2),
        "V2_818": -pi ** 2 / 2 + 4 * L(I),
        "pi2_over_3": pi ** 2 / 3,
    }
