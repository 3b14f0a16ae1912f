"""Tails as products of h_b, and the explicit multisums they are tested against."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from . import qseries as qs
from .errors import ArboTailsError, InvalidArgument, TheoremNotApplicable
from .qseries import TruncatedSeries
from .tait import extra_bigons, link_tait, polygon_decomposition, theorem_multiset
from .trees import WeightedTree, bipartition, mirror, montesinos, require_reduced, two_bridge


@dataclass(frozen=True)
class TailProduct:
    """The series prod h_b over ``factors`` (kept in decreasing order)."""

    factors: tuple[int, ...]
    provenance: str = "theorem"

    def __post_init__(self):
        if any(b < 1 for b in self.factors):
            raise InvalidArgument("h_b factors need b >= 1")
        object.__setattr__(self, "factors", tuple(sorted(self.factors, reverse=True)))

    @property
    def is_zero(self) -> bool:
        return 1 in self.factors

    def without_trivial(self) -> "TailProduct":
        """Drop the h_2 = 1 factors."""
        return TailProduct(tuple(b for b in self.factors if b != 2), self.provenance)

    def same_factors(self, other: "TailProduct") -> bool:
        return Counter(self.factors) == Counter(other.factors)

    def series(self, N: int) -> TruncatedSeries:
        return tail_series(self, N)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        counts = Counter(self.factors)
        parts = []
        for b in sorted(counts, reverse=True):
            parts.append(f"h_{b}" + (f"^{counts[b]}" if counts[b] > 1 else ""))
        return " ".join(parts)


def tail_product(t: WeightedTree, cross_check: bool = True) -> TailProduct:
    """Tail of the alternating arborescent link of ``t`` as a product of h_b.

    Applicable exactly when no vertex on the negative side has weight 0.  With
    ``cross_check`` the answer is recomputed from the polygon decomposition of
    the positive Tait graph.
    """
    require_reduced(t)
    part = bipartition(t)
    zeros = sorted(v for v in part.minus if t.weights[v].value == 0)
    if zeros:
        where = ", ".join(map(str, zeros))
        raise TheoremNotApplicable(
            f"Theorem not applicable: 0 ∈ w(V−) at vertex {where}", tuple(zeros)
        )
    factors = theorem_multiset(t)
    if cross_check:
        _cross_check(t, factors)
    return TailProduct(factors, "theorem")


def _cross_check(t: WeightedTree, factors: Sequence[int]) -> None:
    if len(t.weights) == 1 and abs(t.weights[0]) == 1:
        return  # unknot diagram; its Tait graphs degenerate
    t_plus, _ = link_tait(t)
    dec = polygon_decomposition(t_plus)
    expected = Counter(factors)
    expected[2] += extra_bigons(t)
    if not dec.success or Counter(dec.sizes) != +expected:
        raise ArboTailsError(
            f"Tait graph decomposition {dec.sizes} disagrees with the product formula {tuple(factors)}"
        )


def two_bridge_tails(d: Sequence[int]) -> tuple[TailProduct, TailProduct]:
    """(tail of K, tail of its mirror) for the 2-bridge knot with vector d."""
    tree = two_bridge(d)
    n = len(tree.weights)
    e = [1 if j in (0, n - 1) else 2 for j in range(n)] if n > 1 else [0]
    b = [dj + ej for dj, ej in zip(d, e)]
    k_tail = TailProduct(tuple(b[j - 1] for j in range(2, n + 1, 2)), "two_bridge")
    m_tail = TailProduct(tuple(b[j - 1] for j in range(1, n + 1, 2)), "mirror")
    _agree(k_tail, tree)
    _agree(m_tail, mirror(tree))
    return k_tail, m_tail


def montesinos_tails(rays: Sequence[Sequence[int]], k: int) -> tuple[TailProduct | None, TailProduct]:
    """(tail of K or None when k = 0, tail of the mirror) for a Montesinos knot."""
    tree = montesinos(rays, k)
    odd, even = [], []
    for ray in rays:
        n = len(ray)
        for j, dj in enumerate(ray, start=1):
            bj = dj + (1 if j == n else 2)
            (odd if j % 2 else even).append(bj)
    m_tail = TailProduct(tuple([len(rays) + k] + even), "mirror")
    _agree(m_tail, mirror(tree))
    if k == 0:
        return None, m_tail
    k_tail = TailProduct(tuple(odd), "montesinos")
    _agree(k_tail, tree)
    return k_tail, m_tail


def _agree(p: TailProduct, t: WeightedTree) -> None:
    try:
        ref = tail_product(t, cross_check=False)
    except ArboTailsError:
        # reducedness may fail for tiny inputs; the closed form still stands
        return
    if not ref.same_factors(p):
        raise ArboTailsError(f"corollary gives {p}, generic formula gives {ref}")


def tail_series(p: TailProduct | Sequence[int], N: int) -> TruncatedSeries:
    factors = p.factors if isinstance(p, TailProduct) else tuple(p)
    out = TruncatedSeries.one(N)
    for b in factors:
        if b == 2:
            continue
        out = out * qs.hb(b, N)
    return out


# --- multisums -------------------------------------------------------------

@dataclass(frozen=True)
class PochFactor:
    """(q)_{vec . x} raised to ``power``."""

    vec: tuple[int, ...]
    power: int
    binomial: bool = False


@dataclass(frozen=True)
class MultisumLayout:
    """sign * (q)_inf^prefactor * q^((x.Ax + b.x)/2) * prod of Pochhammer factors."""

    quad: np.ndarray
    lin: np.ndarray
    factors: tuple[PochFactor, ...]
    parity: np.ndarray
    prefactor: int

    @property
    def dim(self) -> int:
        return len(self.lin)

    def exponents(self, x: np.ndarray) -> np.ndarray:
        """Exponents for a batch of index vectors (rows of x)."""
        twice = np.einsum("ij,jk,ik->i", x, self.quad, x) + x @ self.lin
        return twice // 2

    def signs(self, x: np.ndarray) -> np.ndarray:
        return 1 - 2 * ((x @ self.parity) % 2)

    def indices(self, emax: float) -> np.ndarray:
        """All index vectors with exponent <= emax (the exponent is monotone)."""
        rows = np.zeros((1, 0), dtype=np.int64)
        for i in range(self.dim):
            chunks = []
            v = 0
            while True:
                cand = np.hstack([rows, np.full((len(rows), 1), v, dtype=np.int64)])
                full = np.hstack([cand, np.zeros((len(rows), self.dim - i - 1), dtype=np.int64)])
                keep = self.exponents(full) <= emax
                if not keep.any():
                    break
                rows_kept = cand[keep]
                chunks.append(rows_kept)
                rows = rows[keep]
                v += 1
            rows = np.vstack(chunks)
        return rows


@dataclass(frozen=True)
class MultisumSpec:
    name: str
    params: tuple[int, ...] = ()
    include_binomial: bool = True

    @classmethod
    def five_two(cls) -> "MultisumSpec":
        return cls("five_two")

    @classmethod
    def pretzel(cls, k: int, u: int, include_binomial: bool = True) -> "MultisumSpec":
        if k < 1 or u < 1:
            raise InvalidArgument(f"pretzel multisum needs k, u >= 1, got k={k}, u={u}")
        return cls("pretzel", (int(k), int(u)), include_binomial)

    @classmethod
    def eight_eighteen(cls, include_binomial: bool = True) -> "MultisumSpec":
        return cls("eight_eighteen", (), include_binomial)

    def layout(self) -> MultisumLayout:
        builder = _LAYOUTS.get(self.name)
        if builder is None:
            raise InvalidArgument(f"unknown multisum {self.name!r}")
        quad, lin, factors, parity, pre = builder(*self.params)
        if not self.include_binomial:
            factors = [f for f in factors if not f.binomial]
        return MultisumLayout(
            np.array(quad, dtype=np.int64),
            np.array(lin, dtype=np.int64),
            tuple(factors),
            np.array(parity, dtype=np.int64),
            pre,
        )

    def __str__(self) -> str:
        tag = {"five_two": "52", "eight_eighteen": "818"}.get(self.name)
        if tag is None:
            tag = "pretzel:" + ",".join(map(str, self.params))
        return "multisum:" + tag + ("" if self.include_binomial else ":nobinom")


def _unit(d: int, *idx: int) -> tuple[int, ...]:
    v = [0] * d
    for i in idx:
        v[i] += 1
    return tuple(v)


def _five_two_layout():
    # variables a, b, c, d, e
    a, b, c, d, e = range(5)
    quad = np.zeros((5, 5), dtype=np.int64)
    quad[a, a], quad[b, b] = 4, 2
    for i, j in ((a, c), (a, d), (a, e), (b, e), (c, d), (d, e)):
        quad[i, j] = quad[j, i] = 1
    lin = [2, 0, 2, 2, 2]
    factors = [PochFactor(_unit(5, *ix), -1) for ix in
               ((a,), (a, c), (a, d), (a, e), (b,), (b, e), (c,), (d,), (e,))]
    return quad, lin, factors, [0] * 5, 5


def _pretzel_layout(k: int, u: int):
    # variables l_1..l_k, p_1..p_u; the exponent is sum L_j^2 + L_j over tail sums
    dim = k + u
    quad = np.zeros((dim, dim), dtype=np.int64)
    lin = np.zeros(dim, dtype=np.int64)
    for lo, n in ((0, k), (k, u)):
        tails = np.triu(np.ones((n, n), dtype=np.int64))  # row j sums indices j..n-1
        quad[lo:lo + n, lo:lo + n] = 2 * tails.T @ tails
        lin[lo:lo + n] = 2 * tails.sum(axis=0)
    factors = [PochFactor(_unit(dim, i), -1) for i in range(dim)]
    lk, pu = k - 1, dim - 1
    factors += [
        PochFactor(_unit(dim, lk, pu), 1, True),
        PochFactor(_unit(dim, lk), -1, True),
        PochFactor(_unit(dim, pu), -1, True),
    ]
    return quad, lin, factors, [0] * dim, 2


def _eight_eighteen_layout():
    factors = [
        PochFactor((1, 0), -1),
        PochFactor((0, 1), -1),
        PochFactor((1, 1), 1, True),
        PochFactor((1, 0), -1, True),
        PochFactor((0, 1), -1, True),
    ]
    return np.eye(2, dtype=np.int64), [1, 1], factors, [1, 1], 2


_LAYOUTS = {
    "five_two": _five_two_layout,
    "pretzel": _pretzel_layout,
    "eight_eighteen": _eight_eighteen_layout,
}


def multisum(spec: MultisumSpec, N: int) -> TruncatedSeries:
    """Exact expansion of the named multisum modulo q^N."""
    N = qs._check_order(N)
    lay = spec.layout()
    idx = lay.indices(N - 1)
    exps = lay.exponents(idx)
    signs = lay.signs(idx)
    acc = [0] * N
    for x, e, s in zip(idx.tolist(), exps.tolist(), signs.tolist()):
        m = N - e
        term = [1] + [0] * (m - 1)
        for f in lay.factors:
            n = sum(a * b for a, b in zip(f.vec, x))
            if n == 0:
                continue
            src = qs.poch_finite(n, N) if f.power > 0 else qs.inverse_poch(n, N)
            for _ in range(abs(f.power)):
                term = qs._convolve(term, src.coeffs[:m], m)
        for j, c in enumerate(term):
            acc[e + j] += s * c
    out = TruncatedSeries(tuple(acc), N)
    if lay.prefactor:
        out = out * qs.poch_infinite(N) ** lay.prefactor
    return out
