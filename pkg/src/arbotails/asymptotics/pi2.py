"""Is a limit V plausibly a rational multiple of pi^2?"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath


@dataclass(frozen=True)
class Pi2RationalVerdict:
    is_likely: bool
    best: Fraction
    distance: float
    max_denominator: int
    tol: float

    def to_json(self) -> dict:
        return {
            "is_likely": self.is_likely,
            "best": f"{self.best.numerator}/{self.best.denominator}",
            "distance": self.distance,
            "max_denominator": self.max_denominator,
            "tol": self.tol,
        }

    def __str__(self) -> str:
        word = "likely" if self.is_likely else "not likely"
        return f"{word} {self.best} (|V/pi^2 - p/q| = {self.distance:.3g})"


def convergents(x, max_denominator: int, max_terms: int = 200):
    """Continued-fraction convergents p/q of x with q <= max_denominator."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    for _ in range(max_terms):
        a = int(mpmath.floor(x))
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        if q1 > max_denominator:
            return
        yield Fraction(p1, q1)
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def pi2_rational_test(V, Dmax: int = 1000, tol: float = 1e-8, dps: int = 40) -> Pi2RationalVerdict:
    """Heuristic: some convergent of Re(V)/pi^2 with denominator <= Dmax is within tol.

    A non-negligible imaginary part rules the verdict out.  The expansion is
    done in mpmath at ``dps`` digits so that large ``Dmax`` stays meaningful
    when V itself is given to high precision.
    """
    with mpmath.workdps(dps):
        z = mpmath.mpc(V)
        x = mpmath.re(z) / mpmath.pi ** 2
        best, dist = Fraction(0), float(abs(x))
        for c in convergents(x, Dmax):
            d = float(abs(x - mpmath.mpf(c.numerator) / c.denominator))
            if d <= dist:
                best, dist = c, d
        likely = dist <= tol and float(abs(mpmath.im(z))) <= tol
    return Pi2RationalVerdict(likely, best, dist, Dmax, tol)
