"""Seeded random connected graph generation for tests and benchmarks."""
from __future__ import annotations

import random

from .graph import Graph, GraphError


def gen_gnm(n: int, m: int, wmax: int, seed: int) -> Graph:
    """Random connected simple graph: a random spanning tree plus extra edges.

    Weights are uniform integers in [1, wmax].  Everything is driven by one
    seeded generator, so (n, m, wmax, seed) fully determines the result.
    """
    if n < 1:
        raise GraphError(f"vertex count must be positive, got {n}")
    if wmax < 1:
        raise GraphError(f"maximum weight must be positive, got {wmax}")
    max_m = n * (n - 1) // 2
    if not (n - 1 <= m <= max_m):
        raise GraphError(
            f"edge count {m} infeasible for n={n}: need {n - 1} <= m <= {max_m}")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    pairs: list[tuple[int, int]] = []
    used: set[tuple[int, int]] = set()
    for i in range(1, n):
        a, b = order[rng.randrange(i)], order[i]
        pairs.append((a, b))
        used.add((min(a, b), max(a, b)))
    spare = [(a, b) for a in range(n) for b in range(a + 1, n)
             if (a, b) not in used]
    pairs.extend(rng.sample(spare, m - (n - 1)))
    edges = [(a, b, rng.randint(1, wmax)) for a, b in pairs]
    g = Graph(n, edges)
    g.validate()
    return g
