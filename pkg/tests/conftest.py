from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
import pytest

from dynmatch.graph import DynamicGraph


def brute_force_mu(edges, n: int) -> int:
    """Maximum matching size by exhaustive branching on the lowest vertex."""
    adj = [0] * n
    for u, v in edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u

    @lru_cache(maxsize=None)
    def best(alive: int) -> int:
        # drop isolated vertices, then branch on the lowest remaining one
        while alive:
            low = alive & -alive
            u = low.bit_length() - 1
            nbrs = adj[u] & alive
            if nbrs:
                break
            alive ^= low
        else:
            return 0
        rest = alive & ~(1 << u)
        top = best(rest)
        while nbrs:
            b = nbrs & -nbrs
            nbrs ^= b
            top = max(top, 1 + best(rest & ~b))
        return top

    return best((1 << n) - 1)


def brute_force_verify(matchings, r: int, rs: bool):
    """Returns None when valid, else (kind, i, j, witness); same scan order as the library."""
    for i, mi in enumerate(matchings, start=1):
        mi = sorted(mi)
        if len(mi) < r:
            return ("TooSmall", i, i, mi[0] if mi else None)
        for e in mi:
            for j in range(1, i):
                if e in matchings[j - 1]:
                    return ("NotDisjoint", i, j, e)
        verts = [x for e in mi for x in e]
        for j in range(1, (len(matchings) if rs else i) + 1):
            if j == i:
                continue
            for e in sorted(matchings[j - 1]):
                if e[0] in verts and e[1] in verts and e not in mi:
                    return ("NotInduced", i, j, e)
    return None


def random_edges(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    return [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]


def graph_of(n: int, edges) -> DynamicGraph:
    g = DynamicGraph(n)
    g.update_all(edges)
    return g


PETERSEN = [(i, (i + 1) % 5) for i in range(5)] + [(i, i + 5) for i in range(5)] + [
    (5 + i, 5 + (i + 2) % 5) for i in range(5)
]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
