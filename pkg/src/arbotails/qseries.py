"""Exact truncated power series in q with integer coefficients.

A ``TruncatedSeries`` of order N stores the coefficients of q^0 .. q^(N-1)
and says nothing about higher powers.  Binary operations truncate to the
smaller order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientPrecision, InvalidArgument, NotInvertible


def _check_order(N: int) -> int:
    if not isinstance(N, (int, np.integer)) or N < 1:
        raise InvalidArgument(f"series order must be a positive integer, got {N!r}")
    return int(N)


@dataclass(frozen=True)
class TruncatedSeries:
    coeffs: tuple[int, ...]
    order: int

    def __post_init__(self):
        if len(self.coeffs) != self.order:
            raise InvalidArgument("coefficient count must equal the order")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], order: int | None = None) -> "TruncatedSeries":
        """Build from any integer sequence, padding with zeros or cutting to ``order``."""
        cs = [int(c) for c in coeffs]
        if order is None:
            order = len(cs)
        order = _check_order(order)
        cs = cs[:order] + [0] * (order - len(cs))
        return cls(tuple(cs), order)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls.monomial(0, order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        order = _check_order(order)
        return cls((0,) * order, order)

    @classmethod
    def monomial(cls, exponent: int, order: int, coeff: int = 1) -> "TruncatedSeries":
        order = _check_order(order)
        cs = [0] * order
        if 0 <= exponent < order:
            cs[exponent] = coeff
        return cls(tuple(cs), order)

    def __len__(self) -> int:
        return self.order

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.order:
            raise InsufficientPrecision(f"coefficient of q^{j} is unknown at order {self.order}")
        return self.coeffs[j]

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise InsufficientPrecision(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[:order], _check_order(order))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def valuation(self) -> int | None:
        """Index of the first nonzero coefficient, or None for the zero series."""
        for j, c in enumerate(self.coeffs):
            if c:
                return j
        return None

    def shift(self, k: int) -> "TruncatedSeries":
        """Multiply by q^k (k >= 0), keeping the order."""
        if k < 0:
            raise InvalidArgument("shift must be non-negative")
        cs = (0,) * min(k, self.order) + self.coeffs[: max(self.order - k, 0)]
        return TruncatedSeries(cs, self.order)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(tuple(-c for c in self.coeffs), self.order)

    def __add__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries.monomial(0, self.order, other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = TruncatedSeries.monomial(0, self.order, other)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return sub(self, other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return TruncatedSeries(tuple(int(other) * c for c in self.coeffs), self.order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TruncatedSeries":
        if n < 0:
            return invert_unit(self) ** (-n)
        result = TruncatedSeries.one(self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self) -> str:
        return to_human(self)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict | str) -> "TruncatedSeries":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_coeffs((int(c) for c in data["coeffs"]), int(data["order"]))


def to_human(s: TruncatedSeries) -> str:
    """Render as e.g. ``1 - 2*q + q^2 + O(q^10)``."""
    parts: list[str] = []
    for j, c in enumerate(s.coeffs):
        if c == 0:
            continue
        mag = abs(c)
        if j == 0:
            body = str(mag)
        else:
            power = "q" if j == 1 else f"q^{j}"
            body = power if mag == 1 else f"{mag}*{power}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    parts.append(("+ " if parts else "") + f"O(q^{s.order})")
    return " ".join(parts)


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    n = min(a.order, b.order)
    return TruncatedSeries(tuple(x + y for x, y in zip(a.coeffs[:n], b.coeffs[:n])), n)


def sub(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    n = min(a.order, b.order)
    return TruncatedSeries(tuple(x - y for x, y in zip(a.coeffs[:n], b.coeffs[:n])), n)


def neg(a: TruncatedSeries) -> TruncatedSeries:
    return -a


def _convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    # object dtype keeps Python integers exact; the loop runs in C
    full = np.convolve(np.array(a, dtype=object), np.array(b, dtype=object))
    out = [int(c) for c in full[:n]]
    return out + [0] * (n - len(out))


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    n = min(a.order, b.order)
    return TruncatedSeries(tuple(_convolve(a.coeffs, b.coeffs, n)), n)


def invert_unit(a: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a series whose constant term is +1 or -1."""
    c0 = a.coeffs[0]
    if c0 not in (1, -1):
        raise NotInvertible(f"constant term {c0} is not a unit in Z[[q]]")
    n = a.order
    support = [(k, c) for k, c in enumerate(a.coeffs) if k and c]
    inv = [0] * n
    inv[0] = c0
    for m in range(1, n):
        acc = 0
        for k, c in support:
            if k > m:
                break
            acc += c * inv[m - k]
        inv[m] = -c0 * acc
    return TruncatedSeries(tuple(inv), n)


def epsilon(b: int, n: int) -> int:
    """Sign attached to the n-th term of h_b."""
    if b % 2:
        return -1 if n % 2 else 1
    return 1 if n >= 0 else -1


def hb_exponent(b: int, n: int) -> int:
    twice = b * n * (n + 1) - 2 * n
    assert twice % 2 == 0
    return twice // 2


def hb(b: int, N: int) -> TruncatedSeries:
    """h_b = sum over n in Z of epsilon_b(n) q^(b n(n+1)/2 - n), truncated to q^N."""
    if not isinstance(b, (int, np.integer)) or b < 1:
        raise InvalidArgument(f"h_b needs b >= 1, got {b!r}")
    N = _check_order(N)
    cs = [0] * N
    for direction in (1, -1):
        n = 0 if direction == 1 else -1
        while True:
            e = hb_exponent(b, n)
            assert e >= 0
            if e >= N:
                break
            cs[e] += epsilon(b, n)
            n += direction
    return TruncatedSeries(tuple(cs), N)


def _times_one_minus_qk(cs: list[int], k: int) -> None:
    # in place: cs <- cs * (1 - q^k), truncated to len(cs)
    for j in range(len(cs) - 1, k - 1, -1):
        cs[j] -= cs[j - k]


def poch_finite(n: int, N: int) -> TruncatedSeries:
    """(q)_n = (1-q)(1-q^2)...(1-q^n) modulo q^N."""
    if n < 0:
        raise InvalidArgument("Pochhammer length must be non-negative")
    return _poch_cached(int(n), _check_order(N))


@lru_cache(maxsize=4096)
def _poch_cached(n: int, N: int) -> TruncatedSeries:
    cs = [0] * N
    cs[0] = 1
    for k in range(1, min(n, N - 1) + 1):
        _times_one_minus_qk(cs, k)
    return TruncatedSeries(tuple(cs), N)


def poch_infinite(N: int) -> TruncatedSeries:
    """(q)_infinity modulo q^N; only the factors with k < N matter."""
    N = _check_order(N)
    return _poch_cached(N, N)


@lru_cache(maxsize=4096)
def inverse_poch(n: int, N: int) -> TruncatedSeries:
    """1/(q)_n modulo q^N, cached because multisums reuse it heavily."""
    return invert_unit(poch_finite(n, N))


def qbinom(n: int, k: int, N: int) -> TruncatedSeries:
    """Gaussian binomial [n choose k]_q, truncated to q^N."""
    if k < 0 or n < 0 or k > n:
        raise InvalidArgument(f"q-binomial needs 0 <= k <= n, got n={n}, k={k}")
    N = _check_order(N)
    k = min(k, n - k)
    cs = [0] * N
    cs[0] = 1
    for i in range(k):
        if n - i < N:
            _times_one_minus_qk(cs, n - i)
    for i in range(1, k + 1):
        # exact division by (1 - q^i)
        for j in range(i, N):
            cs[j] += cs[j - i]
    return TruncatedSeries(tuple(cs), N)


def normalize_sign(s: TruncatedSeries) -> tuple[TruncatedSeries, int]:
    """Scale by +-1 so the first nonzero coefficient is positive."""
    v = s.valuation()
    if v is None or s.coeffs[v] > 0:
        return s, 1
    return -s, -1


def common_sign(a: TruncatedSeries, b: TruncatedSeries, N: int) -> int | None:
    """Return s in {+1, -1} with a == s*b mod q^N, or None."""
    if N > a.order or N > b.order:
        raise InsufficientPrecision(
            f"comparison to q^{N} needs orders >= {N}, have {a.order} and {b.order}"
        )
    ta, sa = normalize_sign(a.truncate(N))
    tb, sb = normalize_sign(b.truncate(N))
    if ta != tb:
        return None
    return sa * sb


def equal_upto_common_sign(a: TruncatedSeries, b: TruncatedSeries, N: int) -> bool:
    return common_sign(a, b, N) is not None


def first_difference(a: TruncatedSeries, b: TruncatedSeries, N: int) -> int | None:
    """Smallest j < N with a_j != b_j, or None."""
    if N > a.order or N > b.order:
        raise InsufficientPrecision(f"need order >= {N}")
    for j in range(N):
        if a.coeffs[j] != b.coeffs[j]:
            return j
    return None
