"""Fully dynamic approximate matching with phase-scoped overlays.

The engine keeps the live graph ``G`` plus three overlay graphs that are
emptied at every phase boundary (every ``threshold`` updates):

* ``g_add``: edges inserted during the phase,
* ``g_del``: edges deleted during the phase that the sparse side still
  needs to subtract,
* ``h_cert``: certificate matchings emitted by rebuilds in this phase.

Every ``rebuild_period`` updates the static solver is called with
``G - g_add`` as the matrix-accessed part and ``(g_add | h_cert) - g_del``
as the list-accessed part; together they are exactly ``G``.  Between
rebuilds the output matching only loses edges that get deleted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import ConfigError, InvariantViolation
from .graph import DifferenceView, DynamicGraph, OverlaySet, materialize_sparse
from .matching import Matching
from .static import SolveOutcome, SparseEdges, match_and_certify
from .streams import Event


@dataclass(frozen=True)
class EngineConfig:
    n: int
    epsilon: float
    threshold: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 0:
            raise ConfigError(f"n must be a non-negative integer, got {self.n!r}")
        if not 0 < self.epsilon < 1:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.threshold is None:
            object.__setattr__(self, "threshold", max(1, math.ceil(self.n**1.5)))
        elif self.threshold < 1:
            raise ConfigError(f"threshold must be >= 1, got {self.threshold}")

    @property
    def rebuild_period(self) -> int:
        return max(1, math.floor(self.epsilon * self.n / 2 + 1e-9))


@dataclass
class CertificateRecord:
    phase: int
    rebuild: int
    size: int
    degree_proxy: float
    iteration: int
    measured_degree: float | None = None


@dataclass
class Metrics:
    matrix_probes: int = 0
    list_reads: int = 0
    rebuilds: int = 0
    phase_resets: int = 0
    updates: int = 0
    certificate_log: list[CertificateRecord] = field(default_factory=list)
    sum_inverse_d: dict[int, float] = field(default_factory=dict)
    sampled_rebuilds: int = 0


@dataclass
class RebuildInfo:
    """What a rebuild saw and produced; passed to rebuild hooks."""

    index: int
    phase: int
    update_index: int
    outcome: SolveOutcome
    sparse_edges: frozenset
    cert_before: frozenset
    overlay_ok: bool | None = None


class DynamicMatchingEngine:
    """Maintains a matching within ``epsilon * n`` of maximum under edge updates.

    With ``check=True`` the engine verifies the overlay algebra at every
    rebuild and the validity of its matching after every update, raising
    :class:`~dynmatch.errors.InvariantViolation` on failure.
    """

    kind = "ors"

    def __init__(
        self,
        config: EngineConfig,
        *,
        check: bool = False,
        measure_d: bool = False,
        on_rebuild: Callable[[RebuildInfo], None] | None = None,
    ) -> None:
        self.config = config
        self.n = config.n
        self.check = check
        self.measure_d = measure_d
        self.graph = DynamicGraph(config.n)
        self.overlays = OverlaySet(config.n)
        self.c_updates = 0
        self.matching = Matching()
        self.rebuild_index = 0
        self.phase_index = 0
        self.rng = np.random.default_rng(config.seed)
        self._metrics = Metrics()
        self._sparse_reads = 0
        self.hooks: list[Callable[[RebuildInfo], None]] = [on_rebuild] if on_rebuild else []
        # The graph starts empty, so an initial rebuild could only return the
        # empty matching; it is skipped rather than spending probes on it.
        self.last_rebuild: RebuildInfo | None = None

    @property
    def rebuilds(self) -> int:
        return self._metrics.rebuilds

    def insert(self, u: int, v: int) -> bool:
        return self.update(Event("+", u, v))

    def delete(self, u: int, v: int) -> bool:
        return self.update(Event("-", u, v))

    def update(self, event: Event) -> bool:
        """Apply one update; returns False for a no-op (duplicate insert, absent delete).

        No-op events leave every counter untouched.
        """
        u, v = event.u, event.v
        g_add, g_del, h_cert = self.overlays.graphs()
        if event.is_insert:
            if not self.graph.insert(u, v):
                return False
            g_add.insert(u, v)
            g_del.delete(u, v)
        else:
            if not self.graph.delete(u, v):
                return False
            self.matching.discard(u, v)
            e = (u, v) if u < v else (v, u)
            # an edge both inserted and deleted this phase only needs a g_del
            # entry when a certificate still lists it
            if not g_add.delete(u, v) or e in h_cert:
                g_del.insert(u, v)

        self._metrics.updates += 1
        self.c_updates += 1
        if self.c_updates == self.config.threshold:
            self.overlays.clear()
            self.c_updates = 0
            self.phase_index += 1
            self._metrics.phase_resets += 1
        if self.c_updates % self.config.rebuild_period == 0:
            self._rebuild()
        if self.check:
            self._check_matching()
        return True

    def _rebuild(self) -> None:
        g_add, g_del, h_cert = self.overlays.graphs()
        sparse = SparseEdges(materialize_sparse(g_add, h_cert, g_del))
        dense = DifferenceView(self.graph, g_add)
        overlay_ok = self.overlay_algebra_holds(sparse.edge_set) if self.check else None
        if overlay_ok is False:
            raise InvariantViolation(f"overlay algebra broken at rebuild {self.rebuild_index}")

        cert_before = h_cert.edge_set()
        outcome = match_and_certify(dense, sparse, self.config.epsilon / 2, self.rng, measure_d=self.measure_d)
        self._sparse_reads += sparse.list_reads
        m = self._metrics
        m.rebuilds += 1
        m.sampled_rebuilds += outcome.sampled
        cert = outcome.certificate
        if cert is not None:
            cert.rebuild_index = self.rebuild_index
            cert.phase_index = self.phase_index
            clash = [e for e in cert.matching.edges() if e in cert_before]
            if clash:
                raise InvariantViolation(f"certificate edge {clash[0]} already in h_cert")
            for u, v in cert.matching.edges():
                h_cert.insert(u, v)
            m.certificate_log.append(
                CertificateRecord(
                    self.phase_index,
                    self.rebuild_index,
                    len(cert.matching),
                    cert.degree_proxy,
                    cert.return_iteration,
                    cert.measured_degree,
                )
            )
            m.sum_inverse_d[self.phase_index] = m.sum_inverse_d.get(self.phase_index, 0.0) + 1.0 / cert.degree_proxy
        self.matching = outcome.matching
        info = RebuildInfo(
            self.rebuild_index, self.phase_index, m.updates, outcome, sparse.edge_set, cert_before, overlay_ok
        )
        self.last_rebuild = info
        self.rebuild_index += 1
        for hook in self.hooks:
            hook(info)

    def overlay_algebra_holds(self, sparse_edges: frozenset | None = None) -> bool:
        """``(G - g_add) | ((g_add | h_cert) - g_del) == G`` by full edge comparison."""
        g_add, g_del, h_cert = self.overlays.graphs()
        live = self.graph.edge_set()
        if sparse_edges is None:
            sparse_edges = (g_add.edge_set() | h_cert.edge_set()) - g_del.edge_set()
        return ((live - g_add.edge_set()) | sparse_edges) == live

    def _check_matching(self) -> None:
        live = self.graph.edge_set()
        for e in self.matching.edges():
            if e not in live:
                raise InvariantViolation(f"matched edge {e} is not in the graph")
        g_add, g_del, _ = self.overlays.graphs()
        if g_add.edge_set() & g_del.edge_set():
            raise InvariantViolation("g_add and g_del overlap")

    def current_matching(self) -> Matching:
        return self.matching.copy()

    def metrics_snapshot(self) -> Metrics:
        m = self._metrics
        graphs = (self.graph, *self.overlays.graphs())
        return replace(
            m,
            matrix_probes=sum(g.matrix_probe_count for g in graphs),
            list_reads=sum(g.list_read_count for g in graphs) + self._sparse_reads,
            certificate_log=list(m.certificate_log),
            sum_inverse_d=dict(m.sum_inverse_d),
        )

    def work(self) -> dict[str, int]:
        snap = self.metrics_snapshot()
        return {"matrix_probes": snap.matrix_probes, "list_reads": snap.list_reads}
