"""Ground-truth maximum matching and simple dynamic baselines."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import ConfigError
from .graph import DynamicGraph, Edge, edge
from .matching import Matching
from .streams import Event

ORACLE_MAX_VERTICES = 5000


@dataclass
class OracleResult:
    size: int
    matching: Matching
    elapsed_work: int


def exact_matching(edges: Iterable[Edge], n: int) -> OracleResult:
    """Maximum-cardinality matching of a general graph (Edmonds' blossoms).

    Starts from a greedy matching and grows it by one augmenting path per
    free vertex; a vertex with no augmenting path never gains one later, so
    a single pass over the free vertices suffices.  ``elapsed_work`` counts
    adjacency entries scanned.  O(n^3) worst case.
    """
    if n > ORACLE_MAX_VERTICES:
        raise ConfigError(f"oracle is capped at n={ORACLE_MAX_VERTICES}, got {n}")
    adj: list[list[int]] = [[] for _ in range(n)]
    edge_list = sorted({edge(u, v) for u, v in edges})
    for u, v in edge_list:
        adj[u].append(v)
        adj[v].append(u)

    match = [-1] * n
    for u, v in edge_list:
        if match[u] == -1 and match[v] == -1:
            match[u] = v
            match[v] = u

    work = len(edge_list)
    for root in range(n):
        if match[root] != -1 or not adj[root]:
            continue
        end, parent, scanned = _find_augmenting_path(root, adj, match)
        work += scanned
        if end == -1:
            continue
        v = end
        while v != -1:
            pv = parent[v]
            nxt = match[pv]
            match[v] = pv
            match[pv] = v
            v = nxt

    result = Matching((v, match[v]) for v in range(n) if match[v] > v)
    return OracleResult(len(result), result, work)


def _find_augmenting_path(root: int, adj: list[list[int]], match: list[int]) -> tuple[int, list[int], int]:
    n = len(adj)
    used = [False] * n
    parent = [-1] * n
    base = list(range(n))
    used[root] = True
    queue = deque([root])
    scanned = 0

    def lca(a: int, b: int) -> int:
        seen = [False] * n
        while True:
            a = base[a]
            seen[a] = True
            if match[a] == -1:
                break
            a = parent[match[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[match[b]]

    def mark_path(v: int, b: int, child: int, blossom: list[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            parent[v] = child
            child = match[v]
            v = parent[match[v]]

    while queue:
        v = queue.popleft()
        for to in adj[v]:
            scanned += 1
            if base[v] == base[to] or match[v] == to:
                continue
            if to == root or (match[to] != -1 and parent[match[to]] != -1):
                cur = lca(v, to)
                blossom = [False] * n
                mark_path(v, cur, to, blossom)
                mark_path(to, cur, v, blossom)
                for i in range(n):
                    if blossom[base[i]]:
                        base[i] = cur
                        if not used[i]:
                            used[i] = True
                            queue.append(i)
            elif parent[to] == -1:
                parent[to] = v
                if match[to] == -1:
                    return to, parent, scanned
                used[match[to]] = True
                queue.append(match[to])
    return -1, parent, scanned


def greedy_maximal(edges: Iterable[Edge]) -> Matching:
    m = Matching()
    for u, v in edges:
        if not m.is_matched(u) and not m.is_matched(v):
            m.add(u, v)
    return m


class MaximalBaseline:
    """Maintains a maximal matching; repairs freed vertices by list scans."""

    kind = "maximal"

    def __init__(self, n: int) -> None:
        self.graph = DynamicGraph(n)
        self.matching = Matching()
        self.rebuilds = 0

    def update(self, event: Event) -> bool:
        u, v = event.u, event.v
        if event.is_insert:
            if not self.graph.insert(u, v):
                return False
            if not self.matching.is_matched(u) and not self.matching.is_matched(v):
                self.matching.add(u, v)
            return True
        if not self.graph.delete(u, v):
            return False
        if self.matching.discard(u, v):
            for w in (u, v):
                self._repair(w)
        return True

    def _repair(self, w: int) -> None:
        if self.matching.is_matched(w):
            return
        for x in self.graph.neighbors(w):
            if not self.matching.is_matched(x):
                self.matching.add(w, x)
                return

    def work(self) -> dict[str, int]:
        return {"matrix_probes": self.graph.matrix_probe_count, "list_reads": self.graph.list_read_count}


class RebuildBaseline:
    """Recomputes a greedy maximal matching from scratch every ``period`` updates."""

    kind = "rebuild"

    def __init__(self, n: int, period: int) -> None:
        if period < 1:
            raise ConfigError("rebuild period must be >= 1")
        self.graph = DynamicGraph(n)
        self.period = period
        self.matching = Matching()
        self.count = 0
        self.rebuilds = 0

    def update(self, event: Event) -> bool:
        u, v = event.u, event.v
        if event.is_insert:
            changed = self.graph.insert(u, v)
        else:
            changed = self.graph.delete(u, v)
            self.matching.discard(u, v)
        if not changed:
            return False
        self.count += 1
        if self.count % self.period == 0:
            self.matching = greedy_maximal(self.graph.edges())
            self.rebuilds += 1
        return True

    def work(self) -> dict[str, int]:
        return {"matrix_probes": self.graph.matrix_probe_count, "list_reads": self.graph.list_read_count}


def maximal_baseline_update(state: MaximalBaseline, event: Event) -> None:
    state.update(event)


def rebuild_baseline_update(state: RebuildBaseline, event: Event, period: int | None = None) -> None:
    if period is not None and period != state.period:
        raise ConfigError("period is fixed at construction")
    state.update(event)
