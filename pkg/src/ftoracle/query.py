"""Query engine: exact failed-graph distances from the precomputed tables.

A query with failure set D either sees an undamaged shortest path (answered
from the base distance table) or recurses: the hitting-set engine returns a
sound upper bound plus pivot vertices known to sit on the true replacement
path, and the answer is the minimum of the bound and pivot-split subqueries
with a decremented budget.  The budget argument makes the recursion finite;
exactness at budget |D| follows from the pivot contract.
"""
from __future__ import annotations

from typing import Iterable, Sequence

from .graph import (CompositeLength, Graph, GraphError, UNREACHABLE,
                    canonical_failures)
from .hitset import HitSetEngine, Observer, QueryStats
from .spindex import ShortestPathIndex, build_index_auto
from .tables import OracleTables, build_tables


class QueryError(ValueError):
    """Invalid query arguments (vertex range, edge ids, budget)."""


class Oracle:
    """Bundles the graph, tie assignment, tree index and lookup tables."""

    def __init__(self, index: ShortestPathIndex, tables: OracleTables):
        self.graph = index.graph
        self.index = index
        self.tables = tables
        self.engine = HitSetEngine(index, tables)

    @property
    def d(self) -> int:
        return self.tables.d

    def query(self, u: int, v: int, failures: Iterable[int] = ()) -> int | None:
        """Exact u-v distance avoiding the failed edges; None if disconnected."""
        length = self.query_composite(u, v, failures)
        return None if length.is_unreachable else length.true_len

    def query_composite(self, u: int, v: int, failures: Iterable[int] = (),
                        stats: QueryStats | None = None,
                        observer: Observer | None = None,
                        memo: bool = True) -> CompositeLength:
        n = self.graph.n
        if not (0 <= u < n and 0 <= v < n):
            raise QueryError(f"vertex out of range: {u}, {v}")
        try:
            failed = canonical_failures(self.graph, failures)
        except GraphError as exc:
            raise QueryError(str(exc)) from None
        if len(failed) > self.d:
            raise QueryError(
                f"{len(failed)} failures exceed the oracle budget d={self.d}")
        return self._query_canonical(u, v, failed, stats, observer, memo)

    def _query_canonical(self, u: int, v: int, failed: tuple[int, ...],
                         stats: QueryStats | None = None,
                         observer: Observer | None = None,
                         memo: bool = True) -> CompositeLength:
        table: dict[tuple[int, int, int], CompositeLength] | None = \
            {} if memo else None
        return self._query_r(u, v, failed, len(failed), table, stats, observer)

    def _query_r(self, a: int, b: int, failed: tuple[int, ...], r: int,
                 memo: dict | None, stats: QueryStats | None,
                 observer: Observer | None) -> CompositeLength:
        index = self.index
        if stats is not None:
            depth = len(failed) - r + 1
            if depth > stats.max_depth:
                stats.max_depth = depth
        if not index.path_intersects(a, b, failed):
            return index.distance(a, b)
        if r == 0:
            return UNREACHABLE
        if memo is not None:
            cached = memo.get((a, b, r))
            if cached is not None:
                return cached
        bound, hits = self.engine.case_three(a, b, failed, stats, observer)
        best = bound
        for w in sorted(hits):
            left = self._query_r(a, w, failed, r - 1, memo, stats, observer)
            if left.is_unreachable:
                continue
            right = self._query_r(w, b, failed, r - 1, memo, stats, observer)
            cand = left + right
            if cand < best:
                best = cand
        if memo is not None:
            memo[(a, b, r)] = best
        return best


def build_oracle(graph: Graph, d: int, seed: int = 1,
                 progress=None) -> Oracle:
    """Validate, pick a tie assignment with unique paths, build all tables."""
    graph.validate()
    index, _, used_seed = build_index_auto(graph, seed)
    tables = build_tables(index, d, used_seed, progress)
    return Oracle(index, tables)
