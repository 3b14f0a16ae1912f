"""Random reduced alternating trees for cross-validation."""
from __future__ import annotations

import random

from .trees import Weight, WeightedTree


def random_alternating_tree(
    rng: random.Random,
    max_vertices: int = 12,
    zero_prob: float = 0.35,
    max_weight: int = 4,
) -> WeightedTree:
    """Uniform-ish random planar tree with weights making it reduced and alternating.

    Vertices of degree >= 3 get weight 0 with probability ``zero_prob`` (with
    the sign of their side); everything else gets 1..max_weight.  A single
    vertex always gets |w| >= 2 so the link is not a trivial diagram.
    """
    n = rng.randint(1, max_vertices)
    adj: list[list[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        p = rng.randrange(v)
        adj[v].append(p)
        adj[p].append(v)
    for v, nbrs in enumerate(adj):
        rng.shuffle(nbrs)
        if v:
            # parent first, so the twist slot is the one the tree language encodes
            i = nbrs.index(min(nbrs))
            nbrs[:] = nbrs[i:] + nbrs[:i]
    side = [0] * n
    order = [0]
    seen = {0}
    for v in order:
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                side[u] = 1 - side[v]
                order.append(u)
    flip = rng.choice((1, -1))
    weights = []
    for v in range(n):
        sign = flip if side[v] == 0 else -flip
        if len(adj[v]) >= 3 and rng.random() < zero_prob:
            weights.append(Weight(0, sign))
            continue
        lo = 2 if n == 1 else 1
        weights.append(Weight(sign * rng.randint(lo, max_weight)))
    return WeightedTree(tuple(weights), tuple(tuple(a) for a in adj))
