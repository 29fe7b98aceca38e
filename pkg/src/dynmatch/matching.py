"""Vertex-disjoint edge sets with O(1) partner lookup."""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import InvalidArgument
from .graph import Edge, edge


class Matching:
    """A set of pairwise vertex-disjoint edges.

    ``partner[u] == v`` iff ``partner[v] == u`` iff ``(min(u,v), max(u,v))``
    is one of the edges.
    """

    __slots__ = ("partner",)

    def __init__(self, edges: Iterable[Edge] = ()) -> None:
        self.partner: dict[int, int] = {}
        for u, v in edges:
            self.add(u, v)

    def __len__(self) -> int:
        return len(self.partner) // 2

    def __bool__(self) -> bool:
        return bool(self.partner)

    def __iter__(self) -> Iterator[Edge]:
        return iter(self.edges())

    def __contains__(self, e: Edge) -> bool:
        u, v = e
        return self.partner.get(u) == v

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self.partner == other.partner

    def __repr__(self) -> str:
        return f"Matching({self.edges()!r})"

    def copy(self) -> Matching:
        m = Matching()
        m.partner = dict(self.partner)
        return m

    def mate(self, u: int) -> int | None:
        return self.partner.get(u)

    def is_matched(self, u: int) -> bool:
        return u in self.partner

    def add(self, u: int, v: int) -> None:
        u, v = edge(u, v)
        if u in self.partner or v in self.partner:
            raise InvalidArgument(f"edge ({u}, {v}) conflicts with the matching")
        self.partner[u] = v
        self.partner[v] = u

    def discard(self, u: int, v: int) -> bool:
        """Remove ``(u, v)`` if it is a matched edge; returns whether it was."""
        if self.partner.get(u) != v:
            return False
        del self.partner[u]
        del self.partner[v]
        return True

    def edges(self) -> list[Edge]:
        return sorted((u, v) for u, v in self.partner.items() if u < v)

    def vertices(self) -> set[int]:
        return set(self.partner)

    def is_valid_in(self, edges: set[Edge] | frozenset[Edge]) -> bool:
        """True iff every matched edge belongs to ``edges``."""
        return all(e in edges for e in self.edges())


def is_matching(edges: Iterable[Edge]) -> bool:
    seen: set[int] = set()
    for u, v in edges:
        if u == v or u in seen or v in seen:
            return False
        seen.add(u)
        seen.add(v)
    return True
