"""Static solvers over a split edge set.

The edge set of the graph is given in two parts: a *dense* part reachable
only through adjacency-matrix queries (any object with ``n``,
``row_bits``, ``lookup`` and ``charge_probes``, e.g.
:class:`~dynmatch.graph.DynamicGraph` or
:class:`~dynmatch.graph.DifferenceView`) and a *sparse* part given as an
explicit edge list.  The two parts may overlap.

The pieces, bottom-up:

* :func:`greedy_matching` scans an edge list once.
* :func:`random_sampling` finds a matching inside ``dense[U]`` by
  letting every vertex sample a growing budget of partners.
* :func:`solve_induced` is the induced-subgraph solver: greedy on the sparse
  part first, random sampling on the dense part only if that falls short.
  Sampling runs emit certificate candidates.
* :func:`boosted_matching` turns the induced solver into an additive
  approximation by harvesting free edges and then growing vertex-disjoint
  alternating paths one layer per solver call.
* :func:`match_and_certify` picks the certificate among the candidates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Protocol, Sequence

import numpy as np

from .errors import ConfigError, InvalidArgument
from .graph import Edge, edge
from .matching import Matching

# Sampling never runs more than this many budget rounds before its full scan.
MAX_SAMPLING_ROUNDS = 2
# Augmentation rounds stop after this many consecutive rounds with no gain.
BOOST_PATIENCE = 3


class MatrixAccess(Protocol):
    n: int

    def row_bits(self, u: int) -> int: ...

    def lookup(self, us: np.ndarray, vs: np.ndarray) -> np.ndarray: ...

    def charge_probes(self, count: int) -> None: ...


class SparseEdges:
    """List access to the sparse edge part, with induced-subgraph filtering."""

    def __init__(self, edges: Iterable[Edge]) -> None:
        self.edges = sorted({edge(u, v) for u, v in edges})
        self.edge_set = frozenset(self.edges)
        self._degree: dict[int, int] = {}
        self._forward: dict[int, int] = {}  # u -> bitmask of neighbours v > u
        self._lower = 0  # bitmask of vertices with a forward neighbour
        for u, v in self.edges:
            self._forward[u] = self._forward.get(u, 0) | (1 << v)
            self._degree[u] = self._degree.get(u, 0) + 1
            self._lower |= 1 << u
        self.list_reads = 0

    def __len__(self) -> int:
        return len(self.edges)

    def induced(self, members: Sequence[int]) -> list[Edge]:
        """Edges with both endpoints in ``members``, lexicographically ordered."""
        mask = 0
        for v in members:
            mask |= 1 << v
        out = []
        forward, degree = self._forward, self._degree
        reads = 0
        starts = mask & self._lower
        while starts:
            low_u = starts & -starts
            starts ^= low_u
            u = low_u.bit_length() - 1
            reads += degree[u]
            hits = forward[u] & mask
            while hits:
                low = hits & -hits
                out.append((u, low.bit_length() - 1))
                hits ^= low
        self.list_reads += reads
        return out


def _as_sparse(sparse: SparseEdges | Iterable[Edge]) -> SparseEdges:
    return sparse if isinstance(sparse, SparseEdges) else SparseEdges(sparse)


@dataclass
class Certificate:
    matching: Matching
    degree_proxy: float
    return_iteration: int
    rebuild_index: int = -1
    phase_index: int = -1
    measured_degree: float | None = None


@dataclass
class Candidate:
    """A sampling-path output offered for certificate selection."""

    matching: Matching
    degree_proxy: float
    iteration: int
    delta: float
    universe: int
    greedy_size: int


@dataclass
class SamplingRun:
    matching: Matching
    iteration: int
    union: Matching
    round_sizes: list[int] = field(default_factory=list)
    full_scan: bool = False


@dataclass
class InducedResult:
    matching: Matching
    candidate: Candidate | None
    sampled: bool
    greedy_size: int


@dataclass
class BoostResult:
    matching: Matching
    candidates: list[Candidate]
    calls: int
    sampled: bool


@dataclass
class SolveOutcome:
    matching: Matching
    certificate: Certificate | None
    condition: str
    sampled: bool = False
    candidates: list[Candidate] = field(default_factory=list)
    calls: int = 0

    def __post_init__(self) -> None:
        if (self.condition == "C1") != (self.certificate is None):
            raise InvalidArgument("C1 iff no certificate")


def greedy_matching(edges: Iterable[Edge]) -> Matching:
    """Maximal matching obtained by scanning ``edges`` in the given order."""
    m = Matching()
    partner = m.partner
    for u, v in edges:
        if u not in partner and v not in partner:
            m.add(u, v)
    return m


def degree_proxy_of(iteration: int, delta: float, n: int) -> float:
    """Bound on the induced degree of a matching built in sampling round ``iteration``.

    Vertices still unmatched after round ``i - 1`` keep at most about
    ``n / b_{i-1} * ln n`` neighbours, with ``b_{i-1} = n^(2 delta (i-2))``.
    """
    if iteration < 1:
        raise InvalidArgument(f"iteration must be >= 1, got {iteration}")
    if n < 2:
        return 1.0
    return max(1.0, n ** (1.0 - 2.0 * delta * (iteration - 2)) * math.log(n))


def _budget_exponent(delta: float, max_rounds: int) -> float:
    return max(delta, 1.0 / (2 * max_rounds))


def random_sampling(
    dense: MatrixAccess,
    vertices: Iterable[int],
    delta: float,
    rng: np.random.Generator,
    *,
    max_rounds: int = MAX_SAMPLING_ROUNDS,
) -> SamplingRun:
    """Budget-doubling sampler for a matching inside ``dense[vertices]``.

    Round ``i`` gives every still-unmatched vertex ``b_i = n^(2 delta (i-1))``
    uniform samples from the round's pool (with replacement).  The final
    round's budget covers the whole pool and is done as a deterministic scan,
    which makes the union of all round matchings maximal.  Returns the first
    round matching of size at least ``delta^2 n``; failing that, the union if
    it is that large; otherwise the largest round matching.
    """
    if not 0 < delta <= 1:
        raise InvalidArgument(f"delta must lie in (0, 1], got {delta}")
    pool = sorted(set(vertices))
    union = Matching()
    if not pool:
        return SamplingRun(Matching(), 0, union)
    n = dense.n
    step = _budget_exponent(delta, max_rounds)
    rounds = math.ceil(1.0 / (2.0 * step) - 1e-9) + 1
    target = delta * delta * n

    best, best_iter = Matching(), 0
    sizes: list[int] = []
    remaining = pool
    for i in range(1, rounds + 1):
        s = len(remaining)
        if s < 2:
            return _finish(best, best_iter, union, sizes, target, full_scan=True)
        if i == rounds:
            budget = s
        else:
            budget = min(math.ceil(n ** (2.0 * step * (i - 1)) - 1e-9), s)
        full = budget >= s
        pairs = _scan_round(dense, remaining) if full else _sample_round(dense, remaining, budget, rng)
        m_i = Matching(pairs)
        sizes.append(len(m_i))
        for u, v in pairs:
            union.add(u, v)
        if pairs:
            remaining = [v for v in remaining if v not in m_i.partner]
        if len(m_i) >= target:
            return SamplingRun(m_i, i, union, sizes, full_scan=full)
        if len(m_i) > len(best):
            best, best_iter = m_i, i
        if full:
            # the union is maximal now; later rounds would find nothing
            return _finish(best, best_iter, union, sizes, target, full_scan=True)
    return _finish(best, best_iter, union, sizes, target, full_scan=False)


def _finish(best: Matching, best_iter: int, union: Matching, sizes: list[int], target: float, full_scan: bool) -> SamplingRun:
    # No single round reached the target.  The union may still do so; it is
    # tagged with its earliest round so the degree proxy stays an upper bound.
    if len(union) >= target:
        first = next(i for i, size in enumerate(sizes, start=1) if size)
        return SamplingRun(union.copy(), first, union, sizes, full_scan)
    return SamplingRun(best, best_iter, union, sizes, full_scan)


def _scan_round(dense: MatrixAccess, pool: list[int]) -> list[Edge]:
    # Each vertex scans the current pool in ascending order and stops at the
    # first neighbour; probes are charged as that sequential scan would.
    present = 0
    for v in pool:
        present |= 1 << v
    pairs: list[Edge] = []
    probes = 0
    row_bits = dense.row_bits
    for v in pool:
        vb = 1 << v
        if not present & vb:
            continue
        others = present & ~vb
        hits = row_bits(v) & others
        if hits:
            low = hits & -hits
            u = low.bit_length() - 1
            probes += (others & (low - 1)).bit_count() + 1
            present &= ~(vb | low)
            pairs.append((v, u) if v < u else (u, v))
        else:
            probes += others.bit_count()
    dense.charge_probes(probes)
    return pairs


def _sample_round(dense: MatrixAccess, pool: list[int], budget: int, rng: np.random.Generator) -> list[Edge]:
    # Samples are drawn from the round-start pool; a sample already matched in
    # this round fails the availability test.  A vertex stops probing at its
    # first available neighbour.
    s = len(pool)
    draws = rng.integers(0, s, size=(s, budget)).tolist()
    taken = bytearray(s)
    free_mask = 0
    for v in pool:
        free_mask |= 1 << v
    pairs: list[Edge] = []
    probes = 0
    row_bits = dense.row_bits
    for r in range(s):
        if taken[r]:
            continue
        row = row_bits(pool[r])
        if not row & free_mask:
            probes += budget
            continue
        for j, t in enumerate(draws[r]):
            if not taken[t] and (row >> pool[t]) & 1:
                probes += j + 1
                taken[r] = taken[t] = 1
                u, v = pool[r], pool[t]
                free_mask &= ~((1 << u) | (1 << v))
                pairs.append((u, v) if u < v else (v, u))
                break
        else:
            probes += budget
    dense.charge_probes(probes)
    return pairs


def solve_induced(
    dense: MatrixAccess,
    sparse: SparseEdges | Iterable[Edge],
    vertices: Iterable[int],
    delta: float,
    rng: np.random.Generator,
) -> InducedResult:
    """Find a matching in ``G[U]``, preferring the sparse part.

    The greedy result on ``sparse[U]`` is returned as is when it has at least
    ``delta^2 n / 8`` edges.  Otherwise random sampling on ``dense[U]`` runs
    and its output doubles as a certificate candidate.
    """
    if not 0 < delta <= 1:
        raise InvalidArgument(f"delta must lie in (0, 1], got {delta}")
    sparse = _as_sparse(sparse)
    members = sorted(set(vertices))
    if not members:
        return InducedResult(Matching(), None, False, 0)
    n = dense.n
    greedy = greedy_matching(sparse.induced(members))
    if len(greedy) >= delta * delta * n / 8:
        return InducedResult(greedy, None, False, len(greedy))
    run = random_sampling(dense, members, delta, rng)
    candidate = None
    if run.matching:
        step = _budget_exponent(delta, MAX_SAMPLING_ROUNDS)
        candidate = Candidate(
            run.matching,
            degree_proxy_of(run.iteration, step, n),
            run.iteration,
            delta,
            len(members),
            len(greedy),
        )
    return InducedResult(run.matching, candidate, True, len(greedy))


class _SolverCalls:
    """Counts calls to the induced solver and collects candidates."""

    def __init__(self, dense: MatrixAccess, sparse: SparseEdges, delta: float, rng: np.random.Generator) -> None:
        self.dense = dense
        self.sparse = sparse
        self.delta = delta
        self.rng = rng
        self.calls = 0
        self.sampled = False
        self.candidates: list[Candidate] = []

    def __call__(self, vertices: Iterable[int]) -> Matching:
        self.calls += 1
        res = solve_induced(self.dense, self.sparse, vertices, self.delta, self.rng)
        self.sampled |= res.sampled
        if res.candidate is not None:
            self.candidates.append(res.candidate)
        return res.matching


def boosted_matching(
    dense: MatrixAccess,
    sparse: SparseEdges | Iterable[Edge],
    eps: float,
    rng: np.random.Generator,
    *,
    patience: int = BOOST_PATIENCE,
) -> BoostResult:
    """Matching within ``eps * n`` of maximum via adaptive induced-solver calls.

    First the solver is called on the free vertices until it returns nothing,
    leaving a maximal matching.  Then rounds of layered augmentation run
    until ``patience`` consecutive rounds gain nothing.  Each call uses
    ``delta = eps / 2``.
    """
    if not 0 < eps < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {eps}")
    n = dense.n
    solver = _SolverCalls(dense, _as_sparse(sparse), eps / 2, rng)
    matching = Matching()

    while True:
        found = solver([v for v in range(n) if v not in matching.partner])
        if not found:
            break
        for u, v in found.edges():
            matching.add(u, v)

    # a maximal matching already has at least mu/2 >= mu - n/4 edges
    if eps < 0.25:
        max_layers = math.ceil(1.0 / eps)
        max_rounds = math.ceil((2.0 / eps) * math.log(4.0 / eps))
        stale = 0
        for _ in range(max_rounds):
            # mu <= |M| + free/2, so the target is already met
            if n - 2 * len(matching) <= 2 * eps * n:
                break
            if _augment_round(solver, matching, n, max_layers, rng):
                stale = 0
            else:
                stale += 1
                if stale >= patience:
                    break
    return BoostResult(matching, solver.candidates, solver.calls, solver.sampled)


def _augment_round(
    solver: _SolverCalls, matching: Matching, n: int, max_layers: int, rng: np.random.Generator
) -> int:
    """Grow vertex-disjoint alternating paths from all free vertices.

    Every matched edge gets a random orientation (entry, exit).  A layer
    calls the solver on the current path endpoints plus the unused entry
    vertices.  Endpoint-entry edges extend a path through the matched edge;
    endpoint-endpoint edges close two paths into one augmenting path.
    Returns the number of augmentations applied.
    """
    partner = matching.partner
    free = [v for v in range(n) if v not in partner]
    if len(free) < 2:
        return 0
    matched = matching.edges()
    flips = rng.random(len(matched)) < 0.5
    exit_of: dict[int, int] = {}
    for (a, b), flip in zip(matched, flips.tolist()):
        if flip:
            exit_of[b] = a
        else:
            exit_of[a] = b

    paths: dict[int, list[int]] = {v: [v] for v in free}
    used: set[int] = set(free)
    frontier: dict[int, int] = {v: v for v in free}  # endpoint -> root
    closed: list[list[int]] = []

    for _ in range(max_layers):
        advanced: dict[int, int] = {}
        blocked: set[int] = set()
        while len(frontier) + len(advanced) >= 2 and frontier:
            entries = [a for a in exit_of if a not in used and a not in blocked]
            found = solver(list(frontier) + entries)
            if not found:
                break
            for x, y in found.edges():
                if x in frontier and y in frontier:
                    rx, ry = frontier.pop(x), frontier.pop(y)
                    closed.append(paths[rx] + paths[ry][::-1])
                elif x in frontier or y in frontier:
                    end, entry = (x, y) if x in frontier else (y, x)
                    root = frontier.pop(end)
                    out = exit_of[entry]
                    paths[root] += [entry, out]
                    used.add(entry)
                    used.add(out)
                    advanced[out] = root
                else:
                    blocked.add(x)
                    blocked.add(y)
        if not advanced:
            break
        frontier.update(advanced)

    for path in closed:
        for i in range(1, len(path) - 1, 2):
            matching.discard(path[i], path[i + 1])
        for i in range(0, len(path), 2):
            matching.add(path[i], path[i + 1])
    return len(closed)


def match_and_certify(
    dense: MatrixAccess,
    sparse: SparseEdges | Iterable[Edge],
    eps: float,
    rng: np.random.Generator,
    *,
    measure_d: bool = False,
) -> SolveOutcome:
    """Additive ``eps * n`` matching plus an optional dense-side certificate.

    Condition C1: the sampler never ran, so no matrix probe was made and no
    certificate is returned.  Condition C2: the candidate with the smallest
    degree proxy is chosen and stripped of sparse edges.  If stripping leaves
    nothing (possible at tiny ``n``) the outcome is reported as C1 with
    ``sampled=True``.
    """
    if not 0 < eps < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {eps}")
    sparse = _as_sparse(sparse)
    boost = boosted_matching(dense, sparse, eps, rng)
    common = dict(sampled=boost.sampled, candidates=boost.candidates, calls=boost.calls)
    if not boost.candidates:
        return SolveOutcome(boost.matching, None, "C1", **common)
    best = min(boost.candidates, key=lambda c: c.degree_proxy)
    kept = Matching(e for e in best.matching.edges() if e not in sparse.edge_set)
    if not kept:
        return SolveOutcome(boost.matching, None, "C1", **common)
    cert = Certificate(kept, best.degree_proxy, best.iteration)
    if measure_d:
        cert.measured_degree = measure_induced_degree(dense, kept)
    return SolveOutcome(boost.matching, cert, "C2", **common)


def measure_induced_degree(dense: MatrixAccess, m: Matching) -> float:
    """``|dense ∩ V(M)^2| / |M|`` by probing every vertex pair of ``V(M)``."""
    verts = sorted(m.vertices())
    if not verts:
        return 0.0
    mask = 0
    for v in verts:
        mask |= 1 << v
    total = sum((dense.row_bits(v) & mask).bit_count() for v in verts) // 2
    k = len(verts)
    dense.charge_probes(k * (k - 1) // 2)
    return total / len(m)
