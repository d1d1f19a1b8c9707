"""Build and query cost measurements across a range of failure budgets."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass
from math import comb

from .graph import Graph
from .hitset import QueryStats
from .oraclefile import oracle_file_bytes
from .query import Oracle, build_oracle


@dataclass
class BenchRow:
    d: int
    subset_count: int
    build_seconds: float
    entry_count: int
    file_bytes: int
    queries: int
    mean_lookups: float
    max_lookups: int
    mean_hits: float
    max_hits: int


def _sample_queries(oracle: Oracle, queries: int, seed: int):
    """Random (u, v, failures) triples, plus one guaranteed damaged query.

    The probe takes root 0's first tree edge and queries across it, so the
    lookup counters are exercised even when every random draw misses.
    """
    graph = oracle.graph
    index = oracle.index
    out = []
    if graph.m:
        for v in range(1, graph.n):
            if index.parent(0, v) == 0:
                out.append((0, v, (index.parent_edge(0, v),)))
                break
    rng = random.Random(seed)
    while len(out) < queries:
        u = rng.randrange(graph.n)
        v = rng.randrange(graph.n - 1)
        if v >= u:
            v += 1
        size = rng.randint(1, min(oracle.d, graph.m)) if graph.m else 0
        failed = tuple(sorted(rng.sample(range(graph.m), size)))
        out.append((u, v, failed))
    return out[:max(queries, 1)]


def run_bench(graph: Graph, dmin: int, dmax: int, queries: int,
              seed: int) -> list[BenchRow]:
    rows = []
    for d in range(dmin, dmax + 1):
        t0 = time.perf_counter()
        oracle = build_oracle(graph, d, seed=1)
        build_s = time.perf_counter() - t0
        size = len(oracle_file_bytes(oracle))
        lookups = []
        hits = []
        for u, v, failed in _sample_queries(oracle, queries, seed):
            stats = QueryStats()
            oracle.query_composite(u, v, failed, stats=stats)
            lookups.append(stats.lookups)
            hits.append(stats.max_hits)
        rows.append(BenchRow(
            d=d,
            subset_count=sum(comb(graph.m, k)
                             for k in range(min(d, graph.m) + 1)),
            build_seconds=build_s,
            entry_count=oracle.tables.entry_count,
            file_bytes=size,
            queries=len(lookups),
            mean_lookups=sum(lookups) / len(lookups),
            max_lookups=max(lookups),
            mean_hits=sum(hits) / len(hits),
            max_hits=max(hits)))
    return rows


def format_rows(rows: list[BenchRow]) -> str:
    head = (f"{'d':>2} {'subsets':>9} {'build_s':>9} {'entries':>10} "
            f"{'bytes':>10} {'queries':>7} {'lookups(mean/max)':>18} "
            f"{'hits(mean/max)':>15}")
    lines = [head]
    for r in rows:
        lines.append(
            f"{r.d:>2} {r.subset_count:>9} {r.build_seconds:>9.3f} "
            f"{r.entry_count:>10} {r.file_bytes:>10} {r.queries:>7} "
            f"{r.mean_lookups:>10.1f}/{r.max_lookups:<7} "
            f"{r.mean_hits:>8.1f}/{r.max_hits:<6}")
    return "\n".join(lines)
