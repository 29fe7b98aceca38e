"""Dynamic graph storage with adjacency-matrix and adjacency-list access.

Every :class:`DynamicGraph` keeps two synchronized representations: a
packed bit matrix for O(1) pair queries and per-vertex neighbor sets for
list access.  Both access paths are instrumented: single pair queries bump
``matrix_probe_count`` and list enumeration bumps ``list_read_count``.
Bulk helpers (:meth:`DynamicGraph.lookup`, :meth:`DynamicGraph.row_bits`)
do not charge anything themselves; callers that use them to emulate a
sequence of pair queries charge the exact count through
:meth:`DynamicGraph.charge_probes`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import ConfigError, InvalidEdge, InvalidVertex

MAX_VERTICES = 20000

Edge = tuple[int, int]


def edge(u: int, v: int) -> Edge:
    """Return the canonical ``(min, max)`` form of an undirected edge."""
    if u == v:
        raise InvalidEdge(f"self-loop ({u}, {v})")
    return (u, v) if u < v else (v, u)


class DynamicGraph:
    """An ``n``-vertex simple undirected graph under edge insertions/deletions."""

    def __init__(self, n: int) -> None:
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise ConfigError(f"vertex count must be a non-negative integer, got {n!r}")
        if n > MAX_VERTICES:
            raise ConfigError(f"n={n} exceeds the desk-scale cap of {MAX_VERTICES}")
        self.n = int(n)
        self._bits = np.zeros((self.n, (self.n + 7) // 8), dtype=np.uint8)
        self._adj: list[set[int]] = [set() for _ in range(self.n)]
        self._edges: set[Edge] = set()
        self.matrix_probe_count = 0
        self.list_read_count = 0

    def __repr__(self) -> str:
        return f"<DynamicGraph n={self.n} m={len(self._edges)}>"

    def __len__(self) -> int:
        return len(self._edges)

    def __contains__(self, e: Edge) -> bool:
        # index lookup used for bookkeeping; not an algorithmic probe
        return e in self._edges

    def _check(self, u: int, v: int) -> Edge:
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InvalidVertex(f"vertex out of range for n={self.n}: ({u}, {v})")
        return edge(u, v)

    def _set_bit(self, u: int, v: int, value: bool) -> None:
        if value:
            self._bits[u, v >> 3] |= np.uint8(1 << (v & 7))
            self._bits[v, u >> 3] |= np.uint8(1 << (u & 7))
        else:
            self._bits[u, v >> 3] &= np.uint8(~(1 << (v & 7)) & 0xFF)
            self._bits[v, u >> 3] &= np.uint8(~(1 << (u & 7)) & 0xFF)

    def insert(self, u: int, v: int) -> bool:
        """Insert ``(u, v)``; returns False (and changes nothing) if present."""
        e = self._check(u, v)
        if e in self._edges:
            return False
        self._edges.add(e)
        self._adj[u].add(v)
        self._adj[v].add(u)
        self._set_bit(u, v, True)
        return True

    def delete(self, u: int, v: int) -> bool:
        """Delete ``(u, v)``; returns False (and changes nothing) if absent."""
        e = self._check(u, v)
        if e not in self._edges:
            return False
        self._edges.discard(e)
        self._adj[u].discard(v)
        self._adj[v].discard(u)
        self._set_bit(u, v, False)
        return True

    def has_edge(self, u: int, v: int) -> bool:
        """Adjacency-matrix query; costs one probe."""
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InvalidVertex(f"vertex out of range for n={self.n}: ({u}, {v})")
        if u == v:
            raise InvalidEdge(f"self-loop ({u}, {v})")
        self.matrix_probe_count += 1
        return bool((self._bits[u, v >> 3] >> (v & 7)) & 1)

    def charge_probes(self, count: int) -> None:
        self.matrix_probe_count += int(count)

    def row_bits(self, u: int) -> int:
        """Row ``u`` of the matrix as a Python int (bit ``v`` set iff edge)."""
        return int.from_bytes(self._bits[u].tobytes(), "little")

    def lookup(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        """Vectorized matrix lookup for broadcastable index arrays (uncharged)."""
        return ((self._bits[us, vs >> 3] >> (vs & 7)) & 1).astype(bool)

    def neighbors(self, u: int) -> list[int]:
        """Adjacency-list access in ascending vertex order."""
        if not 0 <= u < self.n:
            raise InvalidVertex(f"vertex {u} out of range for n={self.n}")
        out = sorted(self._adj[u])
        self.list_read_count += len(out)
        return out

    def degree(self, u: int) -> int:
        return len(self._adj[u])

    def edges(self) -> list[Edge]:
        """All edges in lexicographic order; reads every list entry once."""
        self.list_read_count += len(self._edges)
        return sorted(self._edges)

    def edge_set(self) -> frozenset[Edge]:
        """Uncharged snapshot of the edge set (for checks and oracles)."""
        return frozenset(self._edges)

    def clear(self) -> None:
        """Remove every edge in time proportional to the current edge count."""
        for u, v in self._edges:
            self._set_bit(u, v, False)
            self._adj[u].clear()
            self._adj[v].clear()
        self._edges.clear()

    def update_all(self, edges: Iterable[Edge]) -> None:
        for u, v in edges:
            self.insert(u, v)


class DifferenceView:
    """Matrix access to ``base - minus`` answered with one probe on each.

    The view snapshots the difference at construction, so it must not
    outlive updates to either graph.  Bulk helpers read the snapshot and,
    like their :class:`DynamicGraph` counterparts, charge nothing.
    """

    def __init__(self, base: DynamicGraph, minus: DynamicGraph) -> None:
        if base.n != minus.n:
            raise ConfigError("graphs in a difference view must share n")
        self.base = base
        self.minus = minus
        self.n = base.n
        self._bits = base._bits & ~minus._bits
        raw, width = self._bits.tobytes(), self._bits.shape[1] if self.n else 0
        self._rows = [int.from_bytes(raw[u * width : (u + 1) * width], "little") for u in range(self.n)]

    def has_edge(self, u: int, v: int) -> bool:
        return difference_matrix_probe(self.base, self.minus, u, v)

    def charge_probes(self, count: int) -> None:
        self.base.charge_probes(count)
        self.minus.charge_probes(count)

    def row_bits(self, u: int) -> int:
        return self._rows[u]

    def lookup(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray:
        return ((self._bits[us, vs >> 3] >> (vs & 7)) & 1).astype(bool)

    @property
    def probe_count(self) -> int:
        return self.base.matrix_probe_count + self.minus.matrix_probe_count


def difference_matrix_probe(base: DynamicGraph, minus: DynamicGraph, u: int, v: int) -> bool:
    """``(u, v) in base and (u, v) not in minus``, always costing two probes."""
    in_base = base.has_edge(u, v)
    in_minus = minus.has_edge(u, v)
    return in_base and not in_minus


def materialize_sparse(g_add: DynamicGraph, h_cert: DynamicGraph, g_del: DynamicGraph) -> list[Edge]:
    """Edges of ``(g_add | h_cert) - g_del`` in lexicographic order.

    Reads each overlay list once, so the work is proportional to the total
    overlay size rather than to ``n``.
    """
    removed = set(g_del.edges())
    out = set(g_add.edges())
    out.update(h_cert.edges())
    out.difference_update(removed)
    return sorted(out)


@dataclass
class OverlaySet:
    """The three phase-scoped edge sets maintained by the dynamic engine."""

    n: int
    g_add: DynamicGraph = field(init=False)
    g_del: DynamicGraph = field(init=False)
    h_cert: DynamicGraph = field(init=False)

    def __post_init__(self) -> None:
        self.g_add = DynamicGraph(self.n)
        self.g_del = DynamicGraph(self.n)
        self.h_cert = DynamicGraph(self.n)

    def graphs(self) -> tuple[DynamicGraph, DynamicGraph, DynamicGraph]:
        return self.g_add, self.g_del, self.h_cert

    def clear(self) -> None:
        for g in self.graphs():
            g.clear()

    def is_empty(self) -> bool:
        return not (len(self.g_add) or len(self.g_del) or len(self.h_cert))
