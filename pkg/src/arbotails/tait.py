"""Tait graphs of arborescent tangles and links.

The Tait graphs of a rooted tree are assembled from the leaves up with a
two-terminal series/parallel algebra: at a vertex of sign eps the eps-graph
chains the children's eps-graphs in series, with a path of |w| edges at the
vertex's twist slot, while the (-eps)-graph puts the children's (-eps)-graphs
in parallel together with |w| extra terminal-to-terminal edges.  The twist
slot is fixed by the planar order (see ``WeightedTree``), so every choice of
root yields the same link diagram.  Closing the tangle unmarks the
vertical graph and glues the two terminals of the horizontal one.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DegenerateLink, InvalidArgument
from .trees import WeightedTree, bipartition, degree, require_reduced

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class TwoTerminalGraph:
    n: int
    edges: tuple[Edge, ...]
    s: int
    t: int

    def __post_init__(self):
        if self.s == self.t:
            raise InvalidArgument("terminals of a two-terminal graph must differ")

    @property
    def vertex_count(self) -> int:
        return self.n

    def to_json(self) -> dict:
        return {
            "vertices": list(range(self.n)),
            "edges": [list(e) for e in self.edges],
            "terminals": [self.s, self.t],
        }

    def reversed(self) -> "TwoTerminalGraph":
        """Same graph with the roles of s and t exchanged."""
        return TwoTerminalGraph(self.n, self.edges, self.t, self.s)


def path(k: int) -> TwoTerminalGraph:
    if k < 1:
        raise InvalidArgument("a path between distinct terminals needs >= 1 edge")
    return TwoTerminalGraph(k + 1, tuple((i, i + 1) for i in range(k)), 0, k)


def bond(k: int) -> TwoTerminalGraph:
    if k < 1:
        raise InvalidArgument("a bond needs >= 1 edge")
    return TwoTerminalGraph(2, ((0, 1),) * k, 0, 1)


def _glue(a: TwoTerminalGraph, b: TwoTerminalGraph, fixed: dict[int, int]) -> tuple[dict[int, int], int]:
    # relabel b into a's vertex space; ``fixed`` pins some of b's vertices
    mapping = dict(fixed)
    nxt = a.n
    for v in range(b.n):
        if v not in mapping:
            mapping[v] = nxt
            nxt += 1
    return mapping, nxt


def series(graphs: Sequence[TwoTerminalGraph]) -> TwoTerminalGraph:
    """Chain graphs so that each graph's t is the next graph's s."""
    if not graphs:
        raise InvalidArgument("series of nothing")
    acc = graphs[0]
    for g in graphs[1:]:
        m, n = _glue(acc, g, {g.s: acc.t})
        edges = acc.edges + tuple(_norm(m[u], m[v]) for u, v in g.edges)
        acc = TwoTerminalGraph(n, edges, acc.s, m[g.t])
    return acc


def parallel(graphs: Sequence[TwoTerminalGraph]) -> TwoTerminalGraph:
    """Identify all s terminals with each other, and all t terminals."""
    if not graphs:
        raise InvalidArgument("parallel of nothing")
    acc = graphs[0]
    for g in graphs[1:]:
        m, n = _glue(acc, g, {g.s: acc.s, g.t: acc.t})
        edges = acc.edges + tuple(_norm(m[u], m[v]) for u, v in g.edges)
        acc = TwoTerminalGraph(n, edges, acc.s, acc.t)
    return acc


@dataclass(frozen=True)
class TaitPair:
    g_plus: TwoTerminalGraph
    g_minus: TwoTerminalGraph
    root_sign: int

    def graph(self, sign: int) -> TwoTerminalGraph:
        return self.g_plus if sign > 0 else self.g_minus

    @property
    def horizontal(self) -> TwoTerminalGraph:
        return self.graph(self.root_sign)

    @property
    def vertical(self) -> TwoTerminalGraph:
        return self.graph(-self.root_sign)


@dataclass(frozen=True)
class LinkTaitGraph:
    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if any(u == v for u, v in self.edges):
            raise InvalidArgument("link Tait graph contains a loop")
        if self.n > 1 and len(_component(self.n, self.edges, 0)) != self.n:
            raise InvalidArgument("link Tait graph is disconnected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Edge]) -> "LinkTaitGraph":
        return cls(n, tuple(sorted(_norm(u, v) for u, v in edges)))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def multiplicities(self) -> Counter:
        return Counter(self.edges)

    def to_json(self) -> dict:
        return {"vertices": list(range(self.n)), "edges": [list(e) for e in self.edges]}

    def to_dot(self, name: str = "T") -> str:
        lines = [f"graph {name} {{"]
        lines += [f"  {v};" for v in range(self.n)]
        lines += [f"  {u} -- {v};" for u, v in self.edges]
        lines.append("}")
        return "\n".join(lines)


def _component(n: int, edges: Iterable[Edge], start: int) -> set[int]:
    adj: dict[int, set[int]] = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        for y in adj[x] - seen:
            seen.add(y)
            todo.append(y)
    return seen


def tangle_tait(t: WeightedTree, root: int | None = None) -> TaitPair:
    """Tait graphs of the tangle obtained by cutting the tree open at ``root``."""
    require_reduced(t)
    bipartition(t)  # raises when not alternating
    if root is None:
        root = t.root if t.root is not None else 0
    if not 0 <= root < len(t.weights):
        raise InvalidArgument(f"unknown root {root}")

    def build(v: int, parent: int | None) -> dict[int, TwoTerminalGraph]:
        eps = t.weights[v].sign
        w = abs(t.weights[v])
        # the twists of v sit between the last and first entries of its
        # cyclic neighbour list; read the cycle starting after the parent
        slots: list[int | None] = list(t.adjacency[v]) + [None]
        if parent is not None:
            i = slots.index(parent)
            slots = slots[i + 1:] + slots[:i]
        horiz, vert = [], []
        for c in slots:
            if c is None:
                if w:
                    horiz.append(path(w))
                    vert.append(bond(w))
                continue
            sub = build(c, v)
            # a child tangle enters rotated by a quarter turn: its N, S become
            # our W, E, while its W, E land on our S, N
            horiz.append(sub[eps])
            vert.append(sub[-eps].reversed())
        return {eps: series(horiz), -eps: parallel(vert)}

    g = build(root, None)
    return TaitPair(g[1], g[-1], t.weights[root].sign)


def close(p: TaitPair) -> tuple[LinkTaitGraph, LinkTaitGraph]:
    """Return (T_plus, T_minus) of the closed link."""
    h = p.horizontal
    if any(_norm(h.s, h.t) == e for e in h.edges):
        raise DegenerateLink("closing the tangle glues an edge into a loop")
    keep = [v for v in range(h.n) if v != h.t]
    relabel = {v: i for i, v in enumerate(keep)}
    relabel[h.t] = relabel[h.s]
    glued = LinkTaitGraph.from_edges(len(keep), ((relabel[u], relabel[v]) for u, v in h.edges))
    v = p.vertical
    unmarked = LinkTaitGraph.from_edges(v.n, v.edges)
    if p.root_sign > 0:
        return glued, unmarked
    return unmarked, glued


def link_tait(t: WeightedTree, root: int | None = None) -> tuple[LinkTaitGraph, LinkTaitGraph]:
    """(T_plus, T_minus) of the arborescent link of ``t``."""
    return close(tangle_tait(t, root))


def reduce(g: LinkTaitGraph) -> LinkTaitGraph:
    """Collapse every family of parallel edges to one edge and drop loops."""
    return LinkTaitGraph.from_edges(g.n, {e for e in g.edges if e[0] != e[1]})


@dataclass(frozen=True)
class PolygonDecomposition:
    sizes: tuple[int, ...] | None
    stuck: LinkTaitGraph | None = None
    peeled: tuple[int, ...] = ()

    @property
    def success(self) -> bool:
        return self.sizes is not None


def _ears(mult: Counter, deg: Counter) -> list[tuple[int, int, tuple[int, ...]]]:
    out = []
    for (u, v), m in mult.items():
        if m >= 2:
            out.append((u, v, ()))
    nbrs: dict[int, list[int]] = {}
    for (u, v), m in mult.items():
        nbrs.setdefault(u, []).extend([v] * m)
        nbrs.setdefault(v, []).extend([u] * m)
    seen: set[int] = set()
    for x in sorted(deg):
        if deg[x] != 2 or x in seen:
            continue
        ends, arms = [], []
        for start in nbrs[x]:
            prev, cur, arm = x, start, []
            while deg[cur] == 2 and cur != x:
                arm.append(cur)
                p, q = nbrs[cur]
                prev, cur = cur, (q if p == prev else p)
            ends.append(cur)
            arms.append(arm)
        chain = arms[0][::-1] + [x] + arms[1]
        seen.update(chain)
        a, b = ends
        if a != b and deg[a] != 2 and mult.get(_norm(a, b), 0) >= 1:
            if a > b:
                a, b, chain = b, a, chain[::-1]
            out.append((a, b, tuple(chain)))
    return out


def polygon_decomposition(g: LinkTaitGraph, rng: random.Random | None = None) -> PolygonDecomposition:
    """Peel polygons glued along single edges; fail if the graph is not such a sum.

    Works on the multigraph, so each extra parallel edge is reported as a
    polygon of size 2.  Ears are taken in lexicographic order unless ``rng`` is
    given, in which case a random ear is peeled at every step.
    """
    if any(u == v for u, v in g.edges):
        raise InvalidArgument("polygon decomposition needs a loop-free graph")
    mult = Counter(g.edges)
    if g.n == 2 and len(g.edges) == 1:
        # a single bridge: the empty sum of polygons
        return PolygonDecomposition(())
    sizes: list[int] = []
    while True:
        deg: Counter = Counter()
        for (u, v), m in mult.items():
            deg[u] += m
            deg[v] += m
        if all(d == 2 for d in deg.values()):
            sizes.append(sum(mult.values()))
            return PolygonDecomposition(tuple(sorted(sizes, reverse=True)), peeled=tuple(sizes))
        ears = [] if min(deg.values()) < 2 else _ears(mult, deg)
        if not ears:
            stuck = _compact(mult)
            return PolygonDecomposition(None, stuck, tuple(sizes))
        u, v, interior = rng.choice(ears) if rng is not None else min(ears)
        if not interior:
            mult[(u, v)] -= 1
            sizes.append(2)
            continue
        walk = (u,) + interior + (v,)
        for a, b in zip(walk, walk[1:]):
            e = _norm(a, b)
            mult[e] -= 1
            if not mult[e]:
                del mult[e]
        sizes.append(len(interior) + 2)


def _compact(mult: Counter) -> LinkTaitGraph:
    verts = sorted({x for e in mult for x in e})
    idx = {v: i for i, v in enumerate(verts)}
    return LinkTaitGraph.from_edges(len(verts), [(idx[u], idx[v]) for (u, v), m in mult.items() for _ in range(m)])


def euler_counts_hold(sizes: Sequence[int], g: LinkTaitGraph) -> bool:
    m = len(sizes)
    return sum(sizes) - (m - 1) == len(g.edges) and sum(sizes) - 2 * (m - 1) == g.n


def theorem_multiset(t: WeightedTree) -> tuple[int, ...]:
    """{w(v) + e(v) : v positive}, sorted in decreasing order."""
    require_reduced(t)
    part = bipartition(t)
    return tuple(sorted((t.weights[v].value + degree(t, v) for v in part.plus), reverse=True))


def extra_bigons(t: WeightedTree) -> int:
    """Bigons the unreduced T_plus carries beyond the theorem multiset.

    Each negative vertex v contributes |w(v)| parallel edges, i.e. |w(v)| - 1
    bigons stacked on one edge.
    """
    part = bipartition(t)
    return sum(max(abs(t.weights[v]) - 1, 0) for v in part.minus)
