"""All-roots shortest-path trees with O(1) ancestor and damage predicates.

For every root r we run Dijkstra under the composite (length, tie-key)
order, keep the unique parent tree, and number vertices with Euler-tour
entry/exit indices so that subtree membership is an interval test.  The
index also precomputes, per root, the child-side endpoint of every edge
that happens to be a tree edge, which makes "does this failed edge lie on
the tree path root->x" a constant-time check per failed edge.
"""
from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from .graph import CompositeLength, Graph, GraphError, tie_break_values

MAX_TIE_RETRIES = 64


class TieBreakError(RuntimeError):
    """Composite lengths failed to make shortest paths unique for some root."""


class ShortestPathIndex:
    """Per-root tree arrays plus the predicate surface used everywhere else."""

    def __init__(self, graph: Graph, tie: Sequence[int]):
        if len(tie) != graph.m:
            raise GraphError(f"expected {graph.m} tie values, got {len(tie)}")
        self.graph = graph
        self.tie = list(tie)
        n = graph.n
        self._dist: list[list[CompositeLength]] = []
        self._parent: list[list[int]] = []
        self._parent_eid: list[list[int]] = []
        self._depth: list[list[int]] = []
        self._in: list[list[int]] = []
        self._out: list[list[int]] = []
        self._order: list[list[int]] = []
        self._tree_child: list[list[int]] = []
        self._lift: list[list[list[int]]] = []
        for r in range(n):
            dist, parent, parent_eid = _dijkstra(graph, self.tie, r)
            _check_unique(graph, self.tie, r, dist)
            self._dist.append(dist)
            self._parent.append(parent)
            self._parent_eid.append(parent_eid)
            self._finish_root(r)

    @classmethod
    def from_arrays(cls, graph: Graph, tie: Sequence[int],
                    dist: list[list[CompositeLength]],
                    parent: list[list[int]],
                    parent_eid: list[list[int]]) -> "ShortestPathIndex":
        """Rebuild from stored arrays (oracle file load); skips Dijkstra."""
        index = cls.__new__(cls)
        index.graph = graph
        index.tie = list(tie)
        index._dist = dist
        index._parent = parent
        index._parent_eid = parent_eid
        index._depth = []
        index._in = []
        index._out = []
        index._order = []
        index._tree_child = []
        index._lift = []
        for r in range(graph.n):
            index._finish_root(r)
        return index

    def _finish_root(self, r: int) -> None:
        """Derive DFS numbering, per-edge child map and lifting table for root r."""
        graph = self.graph
        n = graph.n
        parent = self._parent[r]
        parent_eid = self._parent_eid[r]

        children: list[list[int]] = [[] for _ in range(n)]
        for v in range(n):
            if parent[v] >= 0:
                children[parent[v]].append(v)
        for c in children:
            c.sort()

        tin = [0] * n
        tout = [0] * n
        depth = [0] * n
        order = [0] * n
        clock = 0
        stack: list[tuple[int, bool]] = [(r, False)]
        while stack:
            v, done = stack.pop()
            if done:
                tout[v] = clock - 1
                continue
            tin[v] = clock
            order[clock] = v
            clock += 1
            stack.append((v, True))
            for c in reversed(children[v]):
                depth[c] = depth[v] + 1
                stack.append((c, False))

        tree_child = [-1] * graph.m
        for v in range(n):
            if parent_eid[v] >= 0:
                tree_child[parent_eid[v]] = v

        logn = max(1, (n - 1).bit_length())
        lift = [[parent[v] if parent[v] >= 0 else r for v in range(n)]]
        for k in range(1, logn):
            prev = lift[k - 1]
            lift.append([prev[prev[v]] for v in range(n)])

        self._depth.append(depth)
        self._in.append(tin)
        self._out.append(tout)
        self._order.append(order)
        self._tree_child.append(tree_child)
        self._lift.append(lift)

    # -- distances ---------------------------------------------------------

    def distance(self, u: int, v: int) -> CompositeLength:
        return self._dist[u][v]

    def parent(self, root: int, v: int) -> int:
        return self._parent[root][v]

    def parent_edge(self, root: int, v: int) -> int:
        return self._parent_eid[root][v]

    def depth(self, root: int, v: int) -> int:
        return self._depth[root][v]

    def tree_path(self, root: int, v: int) -> list[int]:
        """Vertices of the tree path root -> v (both inclusive)."""
        path = [v]
        parent = self._parent[root]
        while path[-1] != root:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    # -- predicates --------------------------------------------------------

    def is_ancestor(self, root: int, x: int, y: int) -> bool:
        """True iff x is an ancestor of y (or equal) in the tree rooted at root."""
        tin = self._in[root]
        return tin[x] <= tin[y] <= self._out[root][x]

    def lca(self, root: int, x: int, y: int) -> int:
        if self.is_ancestor(root, x, y):
            return x
        if self.is_ancestor(root, y, x):
            return y
        lift = self._lift[root]
        for k in range(len(lift) - 1, -1, -1):
            if not self.is_ancestor(root, lift[k][x], y):
                x = lift[k][x]
        return self._parent[root][x]

    def path_intersects(self, root: int, x: int, failed: Iterable[int]) -> bool:
        """True iff some failed edge lies on the tree path root -> x."""
        tin = self._in[root]
        tout = self._out[root]
        child = self._tree_child[root]
        tx = tin[x]
        for eid in failed:
            c = child[eid]
            if c >= 0 and tin[c] <= tx <= tout[c]:
                return True
        return False

    def subtree_touches(self, root: int, w: int, failed: Iterable[int]) -> bool:
        """True iff the subtree of w (rooted at root) contains a failed endpoint."""
        tin = self._in[root]
        lo = tin[w]
        hi = self._out[root][w]
        edges = self.graph.edges
        for eid in failed:
            a, b, _ = edges[eid]
            if lo <= tin[a] <= hi or lo <= tin[b] <= hi:
                return True
        return False

    def is_clean(self, root: int, w: int, failed: Iterable[int]) -> bool:
        """No failure on the path root -> w and none hanging below w."""
        return not self.path_intersects(root, w, failed) and \
            not self.subtree_touches(root, w, failed)


def _dijkstra(graph: Graph, tie: Sequence[int], r: int):
    """Single-root composite-order Dijkstra; graph is connected by contract."""
    n = graph.n
    adj = graph.adj
    dist: list[CompositeLength | None] = [None] * n
    parent = [-1] * n
    parent_eid = [-1] * n
    dist[r] = CompositeLength(0, 0)
    done = [False] * n
    heap: list[tuple[int, int, int]] = [(0, 0, r)]
    while heap:
        tl, tk, v = heapq.heappop(heap)
        if done[v]:
            continue
        done[v] = True
        for nb, eid, w in adj[v]:
            if done[nb]:
                continue
            cand = CompositeLength(tl + w, tk + tie[eid])
            if dist[nb] is None or cand < dist[nb]:
                dist[nb] = cand
                parent[nb] = v
                parent_eid[nb] = eid
                heapq.heappush(heap, (cand.true_len, cand.tie_key, nb))
    return dist, parent, parent_eid  # type: ignore[return-value]


def _check_unique(graph: Graph, tie: Sequence[int], r: int,
                  dist: list[CompositeLength]) -> None:
    """Every non-root vertex must have exactly one optimal predecessor."""
    for v in range(graph.n):
        if v == r:
            continue
        dv = dist[v]
        count = 0
        for nb, eid, w in graph.adj[v]:
            dn = dist[nb]
            if dn.true_len + w == dv.true_len and dn.tie_key + tie[eid] == dv.tie_key:
                count += 1
        if count != 1:
            raise TieBreakError(
                f"root {r}: vertex {v} has {count} optimal predecessors")


def build_index(graph: Graph, tie: Sequence[int]) -> ShortestPathIndex:
    """Index for a fixed tie assignment; raises TieBreakError on a tie."""
    return ShortestPathIndex(graph, tie)


def build_index_auto(graph: Graph, seed: int,
                     max_retries: int = MAX_TIE_RETRIES):
    """Draw tie values from seed, bump the seed until shortest paths are unique.

    Returns (index, tie_values, used_seed).  Gives up after max_retries
    consecutive seeds, which at the documented tie range has vanishing
    probability on any real input.
    """
    last: TieBreakError | None = None
    for attempt in range(max_retries):
        used = seed + attempt
        tie = tie_break_values(graph, used)
        try:
            return ShortestPathIndex(graph, tie), tie, used
        except TieBreakError as exc:
            last = exc
    raise TieBreakError(
        f"no tie-free assignment after {max_retries} seeds starting at {seed}: {last}")
