"""Multiplicative approximation via random vertex contraction.

For a guess ``g`` of the maximum matching size, vertices are hashed into
``k = min(n, ceil(16 g / eps))`` buckets and a dynamic engine runs on the
bucket graph.  Its additive loss ``eps' k`` is then a small fraction of
``g``.  A ladder of guesses ``1, 2, 4, ...`` runs side by side and the
answer comes from the largest guess whose engine reports at least ``g / 2``
edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import DynamicMatchingEngine, EngineConfig, RebuildInfo
from .errors import ConfigError, InvalidVertex
from .graph import Edge, edge
from .matching import Matching
from .streams import Event


@dataclass
class ContractionMap:
    n: int
    k: int
    bucket_of: list[int]
    seed: int | None = None

    @classmethod
    def identity(cls, n: int) -> ContractionMap:
        return cls(n, n, list(range(n)))

    @classmethod
    def random(cls, n: int, k: int, seed: int) -> ContractionMap:
        if not 1 <= k <= max(n, 1):
            raise ConfigError(f"bucket count must lie in [1, n], got k={k}, n={n}")
        if k == n:
            return cls(n, k, list(range(n)), seed)
        rng = np.random.default_rng(seed)
        return cls(n, k, rng.integers(0, k, size=n).tolist(), seed)


def contract_edge(cmap: ContractionMap, e: Edge) -> Edge | None:
    """Bucket-level image of ``e``, or None when both ends share a bucket."""
    u, v = e
    if not (0 <= u < cmap.n and 0 <= v < cmap.n):
        raise InvalidVertex(f"edge ({u}, {v}) out of range for n={cmap.n}")
    bu, bv = cmap.bucket_of[u], cmap.bucket_of[v]
    if bu == bv:
        return None
    return (bu, bv) if bu < bv else (bv, bu)


@dataclass
class LadderInstance:
    guess: int
    cmap: ContractionMap
    engine: DynamicMatchingEngine
    preimages: dict[Edge, set[Edge]] = field(default_factory=dict)

    @property
    def reported(self) -> int:
        return len(self.engine.matching)

    def lift(self) -> Matching:
        """Map each bucket edge of the engine matching to its lowest surviving preimage."""
        out = Matching()
        for be in self.engine.matching.edges():
            out.add(*min(self.preimages[be]))
        return out


class MultiplicativeWrapper:
    """Maintains a matching of size ``>= (1 - eps) mu`` by running a ladder of contracted engines."""

    kind = "ors-multiplicative"

    def __init__(
        self,
        n: int,
        epsilon: float,
        *,
        seed: int = 0,
        guesses: list[int] | None = None,
        inner_epsilon: float | None = None,
        threshold: int | None = None,
        check: bool = False,
    ) -> None:
        if not 0 < epsilon < 1:
            raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}")
        self.n = n
        self.epsilon = epsilon
        self.inner_epsilon = epsilon * epsilon / 32 if inner_epsilon is None else inner_epsilon
        if guesses is None:
            count = max(1, math.ceil(math.log2(n))) if n > 1 else 1
            guesses = [2**i for i in range(count)]
            # guesses past the first identity contraction would rerun the same engine
            cut = next((i for i, g in enumerate(guesses) if math.ceil(16 * g / epsilon) >= n), len(guesses) - 1)
            guesses = guesses[: cut + 1]
        seeds = np.random.SeedSequence(seed).spawn(len(guesses))
        self.instances: list[LadderInstance] = []
        for g, ss in zip(guesses, seeds):
            map_seed, engine_seed = (int(x) for x in ss.generate_state(2))
            k = min(n, math.ceil(16 * g / epsilon))
            cmap = ContractionMap.random(n, k, map_seed) if n else ContractionMap.identity(0)
            config = EngineConfig(cmap.k, self.inner_epsilon, threshold, engine_seed)
            engine = DynamicMatchingEngine(config, check=check)
            self.instances.append(LadderInstance(g, cmap, engine))
        self.edges: set[Edge] = set()
        self.active = 0
        for inst in self.instances:
            inst.engine.hooks.append(self._on_rebuild)
        self._refresh()

    def _on_rebuild(self, info: RebuildInfo) -> None:
        self._dirty = True

    def _refresh(self) -> None:
        best = None
        for idx, inst in enumerate(self.instances):
            if inst.reported >= inst.guess / 2:
                best = idx
        if best is None:
            best = max(range(len(self.instances)), key=lambda i: self.instances[i].reported)
        self.active = best
        self._dirty = False

    def update(self, event: Event) -> bool:
        e = edge(event.u, event.v)
        if event.is_insert:
            if e in self.edges:
                return False
            self.edges.add(e)
        else:
            if e not in self.edges:
                return False
            self.edges.discard(e)
        self._dirty = False
        for inst in self.instances:
            be = contract_edge(inst.cmap, e)
            if be is None:
                continue
            pre = inst.preimages.setdefault(be, set())
            if event.is_insert:
                pre.add(e)
                if len(pre) == 1:
                    inst.engine.update(Event("+", *be))
            else:
                pre.discard(e)
                if not pre:
                    del inst.preimages[be]
                    inst.engine.update(Event("-", *be))
        if self._dirty:
            self._refresh()
        return True

    def current_matching(self) -> Matching:
        if not self.instances:
            return Matching()
        return self.instances[self.active].lift()

    @property
    def matching(self) -> Matching:
        return self.current_matching()

    @property
    def rebuilds(self) -> int:
        return sum(inst.engine.rebuilds for inst in self.instances)

    def instance_summary(self) -> list[dict]:
        return [
            {"guess": inst.guess, "k": inst.cmap.k, "reported": inst.reported, "active": idx == self.active}
            for idx, inst in enumerate(self.instances)
        ]

    def work(self) -> dict[str, int]:
        totals = {"matrix_probes": 0, "list_reads": 0}
        for inst in self.instances:
            for key, val in inst.engine.work().items():
                totals[key] += val
        return totals
