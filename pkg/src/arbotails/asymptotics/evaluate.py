"""Numerical evaluation of q-series near q = 1.

Every evaluator used by the fitting code is a callable ``h -> log f(e^{-h})``
returning *some* branch of the logarithm; the branch is fixed up later by
continuation along the sample path.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Union

import mpmath
import numpy as np

from ..errors import InvalidArgument, NoConvergence
from ..qseries import TruncatedSeries, epsilon, hb_exponent
from ..tails import MultisumLayout, MultisumSpec

LogEvaluator = Callable[[complex], complex]
SeriesSource = Union[TruncatedSeries, Callable[[int], TruncatedSeries]]


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    tail_estimate: float
    order: int


def eval_series_at(
    f: SeriesSource,
    q: complex,
    *,
    cap: float = 0.97,
    max_order: int = 4000,
    rel_tol: float = 1e-12,
    dps: int | None = None,
) -> SeriesValue:
    """Sum c_j q^j, doubling the order until the last quarter of terms is negligible.

    ``f`` is a fixed series or a function N -> series mod q^N.  With ``dps``
    the sum is carried out in mpmath at that precision, which matters when
    the terms cancel heavily (theta functions near q = 1).
    """
    if abs(q) > cap:
        raise InvalidArgument(f"|q| = {abs(q):.4g} exceeds the evaluation cap {cap}")
    if isinstance(f, TruncatedSeries):
        orders = [f.order]
    else:
        orders = []
        n = 64
        while n < max_order:
            orders.append(n)
            n *= 2
        orders.append(max_order)
    ctx = mpmath.workdps(dps) if dps else _NullCtx()
    with ctx:
        qq = mpmath.mpc(q) if dps else complex(q)
        for n in orders:
            s = f if isinstance(f, TruncatedSeries) else f(n)
            total, block = _partial(s.coeffs, qq, n - n // 4, bool(dps))
            if block <= rel_tol * abs(total) or (block == 0 and total == 0):
                return SeriesValue(total, float(block), n)
    raise NoConvergence(f"series at |q| = {abs(q):.4g} not converged by order {orders[-1]}")


class _NullCtx:
    def __enter__(self):
        return self

    def __exit__(self, *exc):
        return False


def _partial(coeffs, q, block_start: int, use_mp: bool):
    total = 0
    block = 0
    qj = mpmath.mpc(1) if use_mp else 1 + 0j
    for j, c in enumerate(coeffs):
        if c:
            t = c * qj
            total += t
            if j >= block_start:
                block += abs(t)
        qj *= q
    return total, block


def eval_hb(b: int, q: complex, dps: int | None = None):
    """h_b(q) summed directly over n; exact-enough for any |q| < 1."""
    if b < 1:
        raise InvalidArgument("h_b needs b >= 1")
    if abs(q) >= 1:
        raise InvalidArgument("h_b converges only for |q| < 1")
    ctx = mpmath.workdps(dps) if dps else _NullCtx()
    with ctx:
        q = mpmath.mpc(q) if dps else complex(q)
        eps = mpmath.mpf(10) ** (-(dps or 16) - 5)
        lq = cmath.log(complex(q)).real
        total = 0
        for direction in (1, -1):
            n = 0 if direction == 1 else -1
            while True:
                e = hb_exponent(b, n)
                if e * lq < math.log(float(eps)) and abs(n) > 2:
                    break
                total += epsilon(b, n) * q ** e
                n += direction
        return total


def _principal_log(v) -> complex:
    v = complex(v)
    if v == 0 or not (math.isfinite(v.real) and math.isfinite(v.imag)):
        raise NoConvergence(f"cannot take the logarithm of {v}")
    return cmath.log(v)


def series_log_evaluator(f: SeriesSource, **kw) -> LogEvaluator:
    def log_f(h: complex) -> complex:
        return _principal_log(eval_series_at(f, cmath.exp(-h), **kw).value)

    return log_f


def function_log_evaluator(func: Callable[[complex], complex]) -> LogEvaluator:
    """Wrap a plain function of q."""
    return lambda h: _principal_log(func(cmath.exp(-h)))


def h_log_evaluator(func: Callable[[complex], complex]) -> LogEvaluator:
    """Wrap a function already written in terms of h."""
    return lambda h: _principal_log(func(h))


def hb_log_evaluator(b: int, dps: int | None = None) -> LogEvaluator:
    def log_f(h: complex) -> complex:
        digits = dps
        if b % 2 and digits is None:
            # odd b: |h_b| ~ exp(-pi^2 Re(1/h) / 2b) arises from terms of size 1
            digits = 30 + int(math.pi ** 2 * (1 / complex(h)).real / (2 * b) / math.log(10))
        return _principal_log_mp(eval_hb(b, cmath.exp(-h), digits))

    return log_f


def _principal_log_mp(v) -> complex:
    if isinstance(v, (mpmath.mpc, mpmath.mpf)):
        if v == 0:
            raise NoConvergence("value vanished at working precision")
        return complex(mpmath.log(v))
    return _principal_log(v)


class MultisumEvaluator:
    """log of a multisum at q = e^{-h}, summed in log space.

    The index region {Re(h) * exponent <= C} is enlarged until the terms on
    its outer shell are negligible against the total.  When the terms cancel
    by more than ``cancel_limit`` the sum is redone in mpmath with enough
    digits to absorb the cancellation.
    """

    def __init__(self, spec: MultisumSpec, *, cancel_limit: float = 1e6, rel_tol: float = 1e-16,
                 max_terms: int = 2_000_000):
        self.spec = spec
        self.layout: MultisumLayout = spec.layout()
        self.cancel_limit = cancel_limit
        self.rel_tol = rel_tol
        self.max_terms = max_terms
        self.last_cancellation = 1.0
        self.last_dps: int | None = None

    def __call__(self, h: complex) -> complex:
        return self.log(h)

    def log(self, h: complex) -> complex:
        h = complex(h)
        if h.real <= 0:
            raise InvalidArgument("h must lie in the right half-plane")
        lay = self.layout
        cut, margin = 60.0, math.log(self.rel_tol)
        precise = None
        while True:
            idx = lay.indices(cut / h.real)
            if len(idx) > self.max_terms:
                raise NoConvergence(f"multisum needs more than {self.max_terms} terms at h = {h}")
            exps = lay.exponents(idx)
            logs = self._term_logs(idx, exps, h)
            peak = logs.real.max()
            shell = exps * h.real > 0.75 * cut
            edge = logs.real[shell].max() if shell.any() else -np.inf
            # the shell must be negligible against the peak term first, and
            # against the (possibly much smaller) total once that is known
            ref = peak if precise is None else precise.real
            if edge - ref >= margin:
                cut *= 1.5
                continue
            w = np.exp(logs - peak)
            s = w.sum()
            cancel = float(np.abs(w).sum() / max(abs(s), 1e-300))
            if cancel <= self.cancel_limit:
                log_s, dps = peak + cmath.log(s), None
            else:
                log_s, cancel, dps = self._mp_sum(idx, exps, h, cancel)
            if edge - log_s.real < margin:
                break
            precise = log_s
        self.last_cancellation, self.last_dps = cancel, dps
        return log_s + lay.prefactor * _log_qinf(h)

    def _term_logs(self, idx: np.ndarray, exps: np.ndarray, h: complex) -> np.ndarray:
        lay = self.layout
        nmax = max((int((idx @ np.array(f.vec)).max()) for f in lay.factors), default=0)
        lp = _log_poch_table(h, nmax)
        logs = -h * exps.astype(float) + 1j * math.pi * ((idx @ lay.parity) % 2)
        for f in lay.factors:
            logs = logs + f.power * lp[idx @ np.array(f.vec)]
        return logs

    def _mp_sum(self, idx, exps, h, cancel):
        lay = self.layout
        # merge factors acting on the same index combination
        powers: dict[tuple[int, ...], int] = {}
        for f in lay.factors:
            powers[f.vec] = powers.get(f.vec, 0) + f.power
        combos = [(np.array(v), p) for v, p in powers.items() if p]
        ns = [(idx @ v).tolist() for v, _ in combos]
        nmax = max((max(n) for n in ns), default=0)
        signs = lay.signs(idx).tolist()
        exps = exps.tolist()
        dps = int(20 + math.log10(cancel) + 5)
        while True:
            with mpmath.workdps(dps):
                num = mpmath.mpf if h.imag == 0 else mpmath.mpc
                q = mpmath.exp(-num(h.real if h.imag == 0 else h))
                P = [num(1)]
                for k in range(1, nmax + 1):
                    P.append(P[-1] * (1 - q ** k))
                tables = [[p ** e for p in P] for _, e in combos]
                qpow = [num(1)]
                for _ in range(max(exps)):
                    qpow.append(qpow[-1] * q)
                total = num(0)
                size = mpmath.mpf(0)
                for r, e in enumerate(exps):
                    t = qpow[e]
                    for tab, n in zip(tables, ns):
                        t *= tab[n[r]]
                    if signs[r] < 0:
                        t = -t
                    total += t
                    size += abs(t)
                lost = float(mpmath.log10(size / abs(total))) if total != 0 else float(dps)
                if lost + 15 < dps:
                    return complex(mpmath.log(total)), 10 ** lost, dps
            dps = int(lost + 30)


def _log_poch_table(h: complex, nmax: int) -> np.ndarray:
    """log (q)_n for n = 0..nmax, q = e^{-h}."""
    k = np.arange(1, nmax + 1)
    return np.concatenate([[0j], np.cumsum(np.log1p(-np.exp(-h * k)))])


def _log_qinf(h: complex) -> complex:
    K = int(45 / h.real) + 10
    return complex(np.log1p(-np.exp(-h * np.arange(1, K + 1))).sum())


def multisum_log_evaluator(spec: MultisumSpec, **kw) -> MultisumEvaluator:
    return MultisumEvaluator(spec, **kw)
