"""Weighted planar trees describing arborescent links.

Trees are written in a small parenthesised language::

    tree   := ["root"] node
    node   := "(" weight { node } ")"
    weight := ["+" | "-"] digits

Children are listed counterclockwise starting from the parent edge.  A zero
weight must carry an explicit sign ("-0" or "+0"), since the side of the
bipartition it lands on is part of the data.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import AmbiguousZero, InvalidArgument, NotAlternating, NotReduced, TreeSyntaxError


@dataclass(frozen=True)
class Weight:
    value: int
    zero_sign: int | None = None

    def __post_init__(self):
        if self.value == 0:
            if self.zero_sign not in (1, -1):
                raise InvalidArgument("a zero weight needs zero_sign +1 or -1")
        elif self.zero_sign is not None:
            raise InvalidArgument("zero_sign is only allowed on zero weights")

    @property
    def sign(self) -> int:
        if self.value:
            return 1 if self.value > 0 else -1
        return self.zero_sign

    def __neg__(self) -> "Weight":
        if self.value == 0:
            return Weight(0, -self.zero_sign)
        return Weight(-self.value)

    def __abs__(self) -> int:
        return abs(self.value)

    def __str__(self) -> str:
        if self.value == 0:
            return "+0" if self.zero_sign > 0 else "-0"
        return str(self.value)


def W(x: int | str) -> Weight:
    """Shorthand: ``W(3)``, ``W("-0")``."""
    if isinstance(x, str):
        x = x.strip()
        if int(x) == 0:
            if x[0] not in "+-":
                raise InvalidArgument("weight 0 needs an explicit sign (+0 or -0)")
            return Weight(0, 1 if x[0] == "+" else -1)
        x = int(x)
    return Weight(int(x))


@dataclass(frozen=True)
class WeightedTree:
    """Planar tree with signed weights.

    ``adjacency[v]`` lists the neighbours of v counterclockwise.  The |w(v)|
    half-twists of v sit between the last and the first entry, which for a
    parsed tree means just before the parent edge (or, at the top node,
    between its last and first child).
    """

    weights: tuple[Weight, ...]
    adjacency: tuple[tuple[int, ...], ...]
    root: int | None = None

    def __post_init__(self):
        n = len(self.weights)
        if n == 0:
            raise InvalidArgument("a tree needs at least one vertex")
        if len(self.adjacency) != n:
            raise InvalidArgument("adjacency must list every vertex")
        edges = 0
        for v, nbrs in enumerate(self.adjacency):
            if len(set(nbrs)) != len(nbrs) or v in nbrs:
                raise InvalidArgument(f"vertex {v} has a repeated neighbour or a loop")
            for u in nbrs:
                if not 0 <= u < n or v not in self.adjacency[u]:
                    raise InvalidArgument(f"adjacency of {v} and {u} is inconsistent")
            edges += len(nbrs)
        if edges // 2 != n - 1 or len(self._reachable(0)) != n:
            raise InvalidArgument("underlying graph is not a tree")
        if self.root is not None and not 0 <= self.root < n:
            raise InvalidArgument(f"root {self.root} is not a vertex")

    def _reachable(self, start: int) -> set[int]:
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for u in self.adjacency[v]:
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
        return seen

    @property
    def vertices(self) -> range:
        return range(len(self.weights))

    def edges(self) -> list[tuple[int, int]]:
        return [(v, u) for v in self.vertices for u in self.adjacency[v] if v < u]

    def children(self, v: int, parent: int | None) -> tuple[int, ...]:
        """Neighbours of v in counterclockwise order, starting after ``parent``."""
        nbrs = self.adjacency[v]
        if parent is None:
            return nbrs
        i = nbrs.index(parent)
        return nbrs[i + 1:] + nbrs[:i]

    def __str__(self) -> str:
        return to_dsl(self)


@dataclass(frozen=True)
class Bipartition:
    plus: frozenset[int]
    minus: frozenset[int]


# --- construction -----------------------------------------------------------

Nested = tuple  # (Weight, [Nested, ...])


def from_nested(node: Nested, rooted: bool = False) -> WeightedTree:
    """Build a tree from (weight, children) pairs, numbering vertices in preorder."""
    weights: list[Weight] = []
    adj: list[list[int]] = []

    def visit(nd: Nested, parent: int | None) -> int:
        w, kids = nd
        v = len(weights)
        weights.append(w)
        adj.append([] if parent is None else [parent])
        for kid in kids:
            adj[v].append(visit(kid, v))
        return v

    visit(node, None)
    return WeightedTree(tuple(weights), tuple(tuple(a) for a in adj), 0 if rooted else None)


def to_nested(t: WeightedTree, start: int | None = None) -> Nested:
    start = (t.root if t.root is not None else 0) if start is None else start

    def build(v: int, parent: int | None) -> Nested:
        return (t.weights[v], [build(c, v) for c in t.children(v, parent)])

    return build(start, None)


_TOKEN = re.compile(r"\s*(?:(root)|(\()|(\))|([+-]?\d+))")


def _tokens(text: str) -> Iterator[tuple[str, str, int]]:
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            while text[pos].isspace():
                pos += 1
            raise TreeSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        kind = ("root", "(", ")", "weight")[m.lastindex - 1]
        yield kind, m.group(m.lastindex), start
        pos = m.end()


def parse_tree(text: str) -> WeightedTree:
    """Parse the tree DSL; e.g. ``"(-2 (3))"`` is the tree for 5_2."""
    toks = list(_tokens(text))
    i = 0

    def expect(kind: str) -> tuple[str, str, int]:
        nonlocal i
        if i >= len(toks):
            raise TreeSyntaxError(f"expected {kind!r} but input ended", len(text))
        tok = toks[i]
        if tok[0] != kind:
            raise TreeSyntaxError(f"expected {kind!r}, found {tok[1]!r}", tok[2])
        i += 1
        return tok

    def node() -> Nested:
        nonlocal i
        expect("(")
        _, raw, pos = expect("weight")
        if int(raw) == 0 and raw[0] not in "+-":
            raise AmbiguousZero("weight 0 needs an explicit sign (+0 or -0)", pos)
        kids = []
        while i < len(toks) and toks[i][0] == "(":
            kids.append(node())
        expect(")")
        return (W(raw), kids)

    rooted = bool(toks) and toks[0][0] == "root"
    if rooted:
        i += 1
    tree = node()
    if i != len(toks):
        raise TreeSyntaxError(f"trailing input {toks[i][1]!r}", toks[i][2])
    return from_nested(tree, rooted)


def to_dsl(t: WeightedTree) -> str:
    def fmt(nd: Nested) -> str:
        w, kids = nd
        inner = " ".join([str(w)] + [fmt(k) for k in kids])
        return f"({inner})"

    prefix = "root " if t.root is not None else ""
    return prefix + fmt(to_nested(t))


# --- queries ---------------------------------------------------------------

def degree(t: WeightedTree, v: int) -> int:
    if not 0 <= v < len(t.weights):
        raise InvalidArgument(f"unknown vertex {v}")
    return len(t.adjacency[v])


def bipartition(t: WeightedTree) -> Bipartition:
    """Split the vertices by weight sign and check that every edge crosses sides."""
    color = {0: 0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in t.adjacency[v]:
            if u not in color:
                color[u] = 1 - color[v]
                queue.append(u)
    for plus_color in (0, 1):
        if all((t.weights[v].sign > 0) == (color[v] == plus_color) for v in t.vertices):
            plus = frozenset(v for v in t.vertices if color[v] == plus_color)
            return Bipartition(plus, frozenset(t.vertices) - plus)
    bad = sorted(
        v for v, u in t.edges() if t.weights[v].sign == t.weights[u].sign
    )
    raise NotAlternating("tree is not alternating: adjacent vertices share a sign", tuple(bad))


def validate_reduced(t: WeightedTree) -> list[int]:
    """Vertices of weight 0 and degree <= 2; an empty list means reduced."""
    return [v for v in t.vertices if t.weights[v].value == 0 and degree(t, v) <= 2]


def require_reduced(t: WeightedTree) -> None:
    bad = validate_reduced(t)
    if bad:
        listed = ", ".join(map(str, bad))
        raise NotReduced(f"tree is not reduced: weight-0 vertex of degree <= 2 at {listed}", tuple(bad))


def mirror(t: WeightedTree) -> WeightedTree:
    return WeightedTree(tuple(-w for w in t.weights), t.adjacency, t.root)


# --- families --------------------------------------------------------------

def _chain(weights: Sequence[Weight]) -> Nested:
    node: Nested | None = None
    for w in reversed(weights):
        node = (w, [] if node is None else [node])
    return node


def _positive_ints(ds: Sequence[int], what: str) -> list[int]:
    ds = list(ds)
    if not ds:
        raise InvalidArgument(f"{what} must be non-empty")
    if any(int(d) != d or d < 1 for d in ds):
        raise InvalidArgument(f"{what} must contain positive integers, got {ds}")
    return [int(d) for d in ds]


def two_bridge(d: Sequence[int]) -> WeightedTree:
    """Path with weights -d1, d2, -d3, ...; Conway notation [d_n ... d_1]."""
    d = _positive_ints(d, "two-bridge vector")
    return from_nested(_chain([Weight((-1) ** j * dj) for j, dj in enumerate(d, start=1)]))


def montesinos(rays: Sequence[Sequence[int]], k: int) -> WeightedTree:
    """Star with center -k and rays d1, -d2, d3, ... read outward from the center."""
    if not rays:
        raise InvalidArgument("a Montesinos tree needs at least one ray")
    if k < 0:
        raise InvalidArgument("k must be non-negative")
    center = Weight(-k) if k else Weight(0, -1)
    kids = []
    for ray in rays:
        ray = _positive_ints(ray, "Montesinos ray")
        kids.append(_chain([Weight((-1) ** (j + 1) * dj) for j, dj in enumerate(ray, start=1)]))
    return from_nested((center, kids))


def pretzel(d: Sequence[int]) -> WeightedTree:
    """P(d1, ..., dn): center -0 with n leaves of weight d_i."""
    d = list(d)
    if any(x < 2 for x in d):
        raise InvalidArgument(f"pretzel parameters must be >= 2, got {d}")
    if len(d) < 3:
        raise NotReduced("pretzel tree with fewer than 3 strands has a weight-0 center of degree <= 2", (0,))
    return montesinos([[x] for x in d], 0)


KNOWN_TREES = {
    "5_2": "(-2 (3))",
    "7_4": "(-3 (1 (-3)))",
    "8_5": "(-0 (3) (3) (2))",
    "9_16": "(-1 (3) (3) (2))",
    "11a_250": "(-0 (2) (3) (1 (-0 (2) (3))))",
}
