"""Ordered induced-matching instances, their verification, and workload generators.

An instance is an ordered list of edge-disjoint matchings ``M_1..M_t``.
It is *ordered-induced* (ORS) when every ``M_i`` is an induced matching of
``M_1 | ... | M_i`` and *induced* (RS) when every ``M_i`` is an induced
matching of the union of all of them.

Instance text format::

    n r t
    matching 1 <size>
    u v
    ...
    matching 2 <size>
    ...
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidArgument, MalformedInstance
from .graph import Edge
from .streams import Event, Stream

NOT_INDUCED = "NotInduced"
NOT_DISJOINT = "NotDisjoint"
TOO_SMALL = "TooSmall"


@dataclass
class OrderedMatchingInstance:
    n: int
    r: int
    matchings: list[list[Edge]]

    def __post_init__(self) -> None:
        self.matchings = [sorted((u, v) if u < v else (v, u) for u, v in m) for m in self.matchings]

    @property
    def t(self) -> int:
        return len(self.matchings)

    def edges(self) -> list[Edge]:
        return [e for m in self.matchings for e in m]


@dataclass(frozen=True)
class OrsViolation:
    kind: str
    i: int  # 1-based index of the matching being checked
    j: int  # 1-based index of the matching that holds the witness
    witness: Edge | None


def _check_well_formed(inst: OrderedMatchingInstance) -> None:
    for idx, m in enumerate(inst.matchings, start=1):
        seen: set[int] = set()
        for u, v in m:
            if u == v:
                raise MalformedInstance(f"matching {idx} has a self-loop at {u}")
            if not (0 <= u < inst.n and 0 <= v < inst.n):
                raise MalformedInstance(f"matching {idx} has an out-of-range edge ({u}, {v})")
            if u in seen or v in seen:
                raise MalformedInstance(f"matching {idx} is not a matching (vertex reused in ({u}, {v}))")
            seen.add(u)
            seen.add(v)


def _verify(inst: OrderedMatchingInstance, induced_in_all: bool) -> OrsViolation | None:
    _check_well_formed(inst)
    owner: dict[Edge, int] = {}
    for idx, m in enumerate(inst.matchings, start=1):
        for e in m:
            owner.setdefault(e, idx)
    for i, m in enumerate(inst.matchings, start=1):
        if len(m) < inst.r:
            return OrsViolation(TOO_SMALL, i, i, m[0] if m else None)
        for e in m:
            if owner[e] < i:
                return OrsViolation(NOT_DISJOINT, i, owner[e], e)
        covered = {x for e in m for x in e}
        own = set(m)
        last = inst.t if induced_in_all else i
        for j in range(1, last + 1):
            if j == i:
                continue
            for e in inst.matchings[j - 1]:
                if e[0] in covered and e[1] in covered and e not in own:
                    return OrsViolation(NOT_INDUCED, i, j, e)
    return None


def verify_ors(inst: OrderedMatchingInstance) -> OrsViolation | None:
    """None if the instance is ordered-induced, else the first violation.

    Scan order: ascending ``i``; for each, size, then disjointness from
    earlier matchings, then inducedness against ``M_1..M_{i-1}`` with edges
    in lexicographic order.
    """
    return _verify(inst, induced_in_all=False)


def verify_rs(inst: OrderedMatchingInstance) -> OrsViolation | None:
    """As :func:`verify_ors`, but every ``M_i`` must be induced in the whole union."""
    return _verify(inst, induced_in_all=True)


def greedy_ors_pack(n: int, r: int, attempts: int, rng: np.random.Generator) -> OrderedMatchingInstance:
    """Append random size-``r`` matchings while the instance stays ordered-induced.

    Each candidate is a random perfect matching on a random ``2r``-subset.
    Only the new matching has to be checked: it must avoid all earlier edges
    and no earlier edge may join two of its vertices.  Stops after
    ``attempts`` consecutive rejections.
    """
    if r < 1 or 2 * r > n:
        raise InvalidArgument(f"need 1 <= r and 2r <= n, got n={n}, r={r}")
    if attempts < 1:
        raise InvalidArgument("attempts must be >= 1")
    union: set[Edge] = set()
    matchings: list[list[Edge]] = []
    rejected = 0
    while rejected < attempts:
        verts = rng.choice(n, size=2 * r, replace=False).tolist()
        cand = sorted((min(a, b), max(a, b)) for a, b in zip(verts[::2], verts[1::2]))
        cover = set(verts)
        ok = not any(e in union for e in cand) and not any(
            u in cover and v in cover for u, v in union
        )
        if ok:
            matchings.append(cand)
            union.update(cand)
            rejected = 0
        else:
            rejected += 1
    return OrderedMatchingInstance(n, r, matchings)


def pairwise_overlap_max(inst: OrderedMatchingInstance) -> int:
    """Largest ``|V(M_i) & V(M_j)|`` over ``i != j`` (0 when ``t < 2``)."""
    covers = [{x for e in m for x in e} for m in inst.matchings]
    best = 0
    for a in range(len(covers)):
        for b in range(a + 1, len(covers)):
            best = max(best, len(covers[a] & covers[b]))
    return best


@dataclass
class HardSequence:
    stream: Stream
    epsilon: float
    singletons: list[int]
    boundaries: list[int] = field(default_factory=list)  # event counts after each loop iteration
    isolation_points: list[int] = field(default_factory=list)  # event counts right after V_S is cleared


def hard_sequence_gen(inst: OrderedMatchingInstance) -> HardSequence:
    """Adversarial stream forcing the matching to move onto ``M_t, M_{t-1}, ..., M_1``.

    Vertices ``0..m-1`` carry the instance and ``m..m+s-1`` are singletons,
    ``s = m - 2r``.  After all instance edges are inserted, iteration
    ``i = t..1`` clears the singleton edges, deletes ``M_{i+1}`` (if any) and
    pairs the instance vertices missed by ``M_i`` with the singletons, so a
    perfect matching exists at the end of each iteration.
    """
    _check_well_formed(inst)
    bad = verify_ors(inst)
    if bad is not None:
        raise MalformedInstance(f"instance is not ordered-induced: {bad}")
    m, r = inst.n, inst.r
    if any(len(mi) != r for mi in inst.matchings):
        raise MalformedInstance("every matching must have exactly r edges")
    s = m - 2 * r
    singletons = list(range(m, m + s))
    events: list[Event] = []
    for mi in inst.matchings:
        events.extend(Event("+", u, v) for u, v in mi)

    seq = HardSequence(Stream(m + s, events), r / m if m else 0.0, singletons)
    side: list[Edge] = []
    for i in range(inst.t, 0, -1):
        events.extend(Event("-", u, v) for u, v in side)
        seq.isolation_points.append(len(events))
        if i != inst.t:
            events.extend(Event("-", u, v) for u, v in inst.matchings[i])
        covered = {x for e in inst.matchings[i - 1] for x in e}
        free = [v for v in range(m) if v not in covered]
        side = list(zip(free, singletons))
        events.extend(Event("+", u, v) for u, v in side)
        seq.boundaries.append(len(events))
    seq.stream.markers = list(seq.boundaries)
    return seq


class _EdgePool:
    """Present edges with O(1) uniform removal."""

    def __init__(self) -> None:
        self.items: list[Edge] = []
        self.index: dict[Edge, int] = {}

    def __len__(self) -> int:
        return len(self.items)

    def __contains__(self, e: Edge) -> bool:
        return e in self.index

    def add(self, e: Edge) -> None:
        self.index[e] = len(self.items)
        self.items.append(e)

    def pop_at(self, k: int) -> Edge:
        e = self.items[k]
        last = self.items.pop()
        del self.index[e]
        if k < len(self.items):
            self.items[k] = last
            self.index[last] = k
        return e


def _random_absent(n: int, pool: _EdgePool, rng: np.random.Generator, touch: Sequence[int] | None = None) -> Edge:
    while True:
        if touch is None:
            u, v = rng.choice(n, size=2, replace=False).tolist()
        else:
            u = int(touch[rng.integers(len(touch))])
            v = int(rng.integers(n))
            if u == v:
                continue
        e = (u, v) if u < v else (v, u)
        if e not in pool:
            return e


def random_stream_gen(n: int, steps: int, insert_bias: float, rng: np.random.Generator) -> Stream:
    """Insert a fresh random edge with probability ``insert_bias``, else delete a random present one."""
    return _biased_stream(n, steps, insert_bias, rng, None)


def core_stream_gen(n: int, core: int, steps: int, insert_bias: float, rng: np.random.Generator) -> Stream:
    """Random stream whose edges all touch vertices ``0..core-1``, so ``mu <= core``."""
    if not 1 <= core <= n:
        raise InvalidArgument(f"core must lie in [1, n], got {core}")
    return _biased_stream(n, steps, insert_bias, rng, list(range(core)))


def _biased_stream(
    n: int, steps: int, insert_bias: float, rng: np.random.Generator, touch: list[int] | None
) -> Stream:
    if not 0 <= insert_bias <= 1:
        raise InvalidArgument(f"insert_bias must lie in [0, 1], got {insert_bias}")
    if steps < 0:
        raise InvalidArgument("steps must be non-negative")
    if steps and n < 2:
        raise InvalidArgument("need at least two vertices to emit events")
    if touch is None:
        capacity = n * (n - 1) // 2
    else:
        c = len(touch)
        capacity = c * (c - 1) // 2 + c * (n - c)
    pool = _EdgePool()
    events: list[Event] = []
    for _ in range(steps):
        want_insert = rng.random() < insert_bias
        if len(pool) and (not want_insert or len(pool) == capacity):
            u, v = pool.pop_at(int(rng.integers(len(pool))))
            events.append(Event("-", u, v))
        else:
            e = _random_absent(n, pool, rng, touch)
            pool.add(e)
            events.append(Event("+", *e))
    return Stream(n, events)


def churn_stream_gen(n: int, steps: int, window: int, rng: np.random.Generator) -> Stream:
    """Sliding window: insert random edges, deleting the oldest once ``window`` are live."""
    if window < 1:
        raise InvalidArgument("window must be >= 1")
    if steps < 0:
        raise InvalidArgument("steps must be non-negative")
    if steps and n < 2:
        raise InvalidArgument("need at least two vertices to emit events")
    window = min(window, n * (n - 1) // 2)
    pool = _EdgePool()
    order: list[Edge] = []
    head = 0
    events: list[Event] = []
    for _ in range(steps):
        if len(pool) >= window:
            e = order[head]
            head += 1
            pool.pop_at(pool.index[e])
            events.append(Event("-", *e))
        else:
            e = _random_absent(n, pool, rng)
            pool.add(e)
            order.append(e)
            events.append(Event("+", *e))
    return Stream(n, events)


def format_instance(inst: OrderedMatchingInstance) -> str:
    lines = [f"{inst.n} {inst.r} {inst.t}"]
    for i, m in enumerate(inst.matchings, start=1):
        lines.append(f"matching {i} {len(m)}")
        lines.extend(f"{u} {v}" for u, v in m)
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> OrderedMatchingInstance:
    rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    try:
        n, r, t = (int(x) for x in rows[0])
        matchings: list[list[Edge]] = []
        k = 1
        for idx in range(1, t + 1):
            tag, num, size = rows[k]
            if tag != "matching" or int(num) != idx:
                raise MalformedInstance(f"expected 'matching {idx} <size>', got {' '.join(rows[k])!r}")
            size = int(size)
            block = [(int(a), int(b)) for a, b in rows[k + 1 : k + 1 + size]]
            if len(block) != size:
                raise MalformedInstance(f"matching {idx} is truncated")
            matchings.append(block)
            k += 1 + size
    except (ValueError, IndexError) as exc:
        raise MalformedInstance(f"unreadable instance: {exc}") from None
    if k != len(rows):
        raise MalformedInstance("trailing lines after the last matching")
    inst = OrderedMatchingInstance(n, r, matchings)
    _check_well_formed(inst)
    return inst


def read_instance(path: str | os.PathLike) -> OrderedMatchingInstance:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def write_instance(inst: OrderedMatchingInstance, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(inst))
