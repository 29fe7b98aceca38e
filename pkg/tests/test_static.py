from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynmatch import static
from dynmatch.errors import ConfigError, InvalidArgument
from dynmatch.graph import DifferenceView, DynamicGraph
from dynmatch.matching import Matching
from dynmatch.oracle import exact_matching
from dynmatch.static import (
    SparseEdges,
    _sample_round,
    _scan_round,
    boosted_matching,
    degree_proxy_of,
    greedy_matching,
    match_and_certify,
    measure_induced_degree,
    random_sampling,
    solve_induced,
)

from .conftest import graph_of, random_edges


def complete(n):
    return list(itertools.combinations(range(n), 2))


# greedy -------------------------------------------------------------------


def test_greedy_examples():
    assert greedy_matching([(1, 2), (2, 3), (3, 4)]).edges() == [(1, 2), (3, 4)]
    assert len(greedy_matching([])) == 0
    assert greedy_matching([(0, 1), (0, 2), (0, 3)]).edges() == [(0, 1)]


@settings(max_examples=60)
@given(st.integers(2, 64), st.floats(0.0, 0.5), st.integers(0, 2**32 - 1))
def test_greedy_is_maximal(n, p, seed):
    edges = random_edges(n, p, np.random.default_rng(seed))
    m = greedy_matching(edges)
    assert m.is_valid_in(set(edges))
    assert all(m.is_matched(u) or m.is_matched(v) for u, v in edges)


# probe accounting against single-probe reference versions -------------------


def reference_scan(g: DynamicGraph, pool):
    alive = set(pool)
    pairs, probes = [], 0
    for v in pool:
        if v not in alive:
            continue
        for u in pool:
            if u == v or u not in alive:
                continue
            probes += 1
            if g.has_edge(v, u):
                alive -= {u, v}
                pairs.append((min(u, v), max(u, v)))
                break
    return pairs, probes


def reference_sample(g: DynamicGraph, pool, budget, rng):
    s = len(pool)
    draws = rng.integers(0, s, size=(s, budget))
    taken = set()
    pairs, probes = [], 0
    for r in range(s):
        if r in taken:
            continue
        for t in draws[r]:
            t = int(t)
            probes += 1
            if t != r and t not in taken and g.has_edge(pool[r], pool[t]):
                taken |= {r, t}
                u, v = pool[r], pool[t]
                pairs.append((min(u, v), max(u, v)))
                break
    return pairs, probes


@settings(max_examples=60)
@given(st.integers(2, 40), st.floats(0.0, 0.6), st.integers(0, 2**32 - 1), st.integers(1, 12))
def test_round_probe_accounting(n, p, seed, budget):
    rng = np.random.default_rng(seed)
    edges = random_edges(n, p, rng)
    pool = sorted(rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False).tolist())

    g = graph_of(n, edges)
    ref_pairs, ref_probes = reference_scan(g, pool)
    g2 = graph_of(n, edges)
    assert _scan_round(g2, pool) == ref_pairs
    assert g2.matrix_probe_count == ref_probes

    g3 = graph_of(n, edges)
    ref_pairs, ref_probes = reference_sample(g3, pool, budget, np.random.default_rng(seed + 1))
    g4 = graph_of(n, edges)
    assert _sample_round(g4, pool, budget, np.random.default_rng(seed + 1)) == ref_pairs
    assert g4.matrix_probe_count == ref_probes


def test_difference_view_charges_both_graphs():
    base, minus = graph_of(6, complete(6)), graph_of(6, [(0, 1)])
    view = DifferenceView(base, minus)
    _scan_round(view, list(range(6)))
    assert base.matrix_probe_count == minus.matrix_probe_count > 0


# random sampling ----------------------------------------------------------


def test_sampling_k8_reaches_target_for_every_seed():
    g = graph_of(8, complete(8))
    for seed in range(300):
        run = random_sampling(g, range(8), 0.5, np.random.default_rng(seed))
        assert len(run.matching) >= 2
        assert run.iteration >= 1


def test_sampling_on_induced_matching():
    g = graph_of(8, [(0, 1), (2, 3), (4, 5), (6, 7)])
    for seed in range(300):
        run = random_sampling(g, range(8), 0.5, np.random.default_rng(seed))
        assert len(run.matching) >= 2
        assert run.matching.is_valid_in(g.edge_set())


def test_sampling_empty_pool():
    run = random_sampling(DynamicGraph(5), [], 0.3, np.random.default_rng(0))
    assert len(run.matching) == 0 and run.iteration == 0


@pytest.mark.parametrize("delta", [0, -0.1, 1.5])
def test_sampling_rejects_bad_delta(delta):
    with pytest.raises(InvalidArgument):
        random_sampling(DynamicGraph(4), range(4), delta, np.random.default_rng(0))


@settings(max_examples=80)
@given(st.integers(2, 48), st.floats(0.0, 0.5), st.sampled_from([0.05, 0.25, 0.5, 1.0]), st.integers(0, 2**32 - 1))
def test_union_is_maximal_after_full_scan(n, p, delta, seed):
    rng = np.random.default_rng(seed)
    edges = random_edges(n, p, rng)
    members = sorted(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False).tolist())
    g = graph_of(n, edges)
    run = random_sampling(g, members, delta, rng)
    inside = set(members)
    induced = {(u, v) for u, v in edges if u in inside and v in inside}
    assert run.matching.is_valid_in(induced)
    assert run.union.is_valid_in(induced)
    assert all(e in run.union for e in run.matching.edges())
    if run.full_scan:
        assert all(run.union.is_matched(u) or run.union.is_matched(v) for u, v in induced)


# degree proxy -------------------------------------------------------------


def test_degree_proxy_values():
    assert degree_proxy_of(2, 0.3, 100) == pytest.approx(100 * math.log(100))
    assert degree_proxy_of(2, 0.3, 100) == pytest.approx(460.517, abs=1e-3)
    assert degree_proxy_of(4, 0.25, 100) == pytest.approx(4.60517, abs=1e-5)
    assert degree_proxy_of(20, 0.5, 100) == 1.0
    with pytest.raises(InvalidArgument):
        degree_proxy_of(0, 0.25, 100)


# induced solver -----------------------------------------------------------


def test_solve_induced_prefers_sparse():
    n, delta = 64, 0.5
    size = 2 * math.ceil(delta * delta * n / 8) + 2
    members = list(range(size))
    sparse = [(2 * i, 2 * i + 1) for i in range(size // 2)]
    dense = graph_of(n, complete(n))
    res = solve_induced(dense, sparse, members, delta, np.random.default_rng(0))
    assert res.candidate is None and not res.sampled
    assert len(res.matching) >= delta * delta * n / 8
    assert dense.matrix_probe_count == 0


def test_solve_induced_falls_back_to_sampling():
    n = 12
    dense = graph_of(n, complete(n))
    res = solve_induced(dense, [], range(n), 0.5, np.random.default_rng(0))
    assert res.sampled and res.candidate is not None
    assert res.candidate.degree_proxy >= 1
    assert res.matching.is_valid_in(dense.edge_set())


def test_solve_induced_empty_universe():
    res = solve_induced(DynamicGraph(4), [(0, 1)], [], 0.5, np.random.default_rng(0))
    assert len(res.matching) == 0 and res.candidate is None


def test_sparse_edges_induced_filter():
    sp = SparseEdges([(3, 1), (0, 2), (2, 3), (1, 2)])
    assert sp.induced([1, 2, 3]) == [(1, 2), (1, 3), (2, 3)]
    assert sp.list_reads == 3


# match and certify --------------------------------------------------------


def test_mac_sparse_only_perfect_matching():
    n = 20
    sparse = [(2 * i, 2 * i + 1) for i in range(10)]
    dense = DynamicGraph(n)
    out = match_and_certify(dense, sparse, 0.2, np.random.default_rng(0))
    assert len(out.matching) >= 10 - 4
    assert out.condition == "C1" and out.certificate is None


def test_mac_dense_clique():
    n = 20
    dense = graph_of(n, complete(n))
    out = match_and_certify(dense, [], 0.2, np.random.default_rng(0))
    assert len(out.matching) >= 10 - 4
    assert out.condition == "C2"
    assert len(out.certificate.matching) > 0
    assert out.certificate.matching.is_valid_in(dense.edge_set())


def test_mac_empty():
    out = match_and_certify(DynamicGraph(10), [], 0.2, np.random.default_rng(0))
    assert len(out.matching) == 0 and out.condition == "C1"


@pytest.mark.parametrize("eps", [0, 1, -0.5, 2])
def test_mac_rejects_bad_epsilon(eps):
    with pytest.raises(ConfigError):
        match_and_certify(DynamicGraph(4), [], eps, np.random.default_rng(0))


def test_boosting_finds_length_three_augmentations():
    paths = [(4 * k + i, 4 * k + i + 1) for k in range(5) for i in range(3)]
    dense = graph_of(20, paths)
    for seed in range(20):
        res = boosted_matching(dense, [], 0.2, np.random.default_rng(seed))
        assert len(res.matching) >= 6
        assert res.matching.is_valid_in(set(paths))


def test_boosting_with_large_epsilon_is_maximal():
    rng = np.random.default_rng(3)
    edges = random_edges(30, 0.1, rng)
    res = boosted_matching(graph_of(30, edges), [], 0.6, rng)
    assert all(res.matching.is_matched(u) or res.matching.is_matched(v) for u, v in edges)


def test_boosting_empty_graph():
    res = boosted_matching(DynamicGraph(8), [], 0.3, np.random.default_rng(0))
    assert len(res.matching) == 0


def _split(edges, rng):
    dense, sparse = [], []
    for e in edges:
        x = rng.random()
        if x < 0.45:
            dense.append(e)
        elif x < 0.9:
            sparse.append(e)
        else:
            dense.append(e)
            sparse.append(e)
    return dense, sparse


@settings(max_examples=60, deadline=None)
@given(st.integers(4, 60), st.floats(0.0, 0.3), st.floats(0.05, 0.6), st.integers(0, 2**32 - 1))
def test_mac_contract(n, p, eps, seed):
    rng = np.random.default_rng(seed)
    edges = random_edges(n, p, rng)
    dense_edges, sparse_edges = _split(edges, rng)
    dense = graph_of(n, dense_edges)
    out = match_and_certify(dense, sparse_edges, eps, rng)
    union = set(dense_edges) | set(sparse_edges)
    assert out.matching.is_valid_in(union)
    assert (out.condition == "C1") == (out.certificate is None)
    if not out.sampled:
        assert dense.matrix_probe_count == 0
    if out.certificate is not None:
        cert = out.certificate.matching
        assert len(cert) > 0
        assert not set(cert.edges()) & set(sparse_edges)
        assert cert.is_valid_in(set(dense_edges))
        assert out.certificate.degree_proxy == min(c.degree_proxy for c in out.candidates)


@pytest.mark.parametrize("n", [40, 100, 200])
@pytest.mark.parametrize("eps", [0.1, 0.2])
def test_mac_additive_guarantee(n, eps):
    for trial in range(50):
        rng = np.random.default_rng([n, int(eps * 100), trial % 10, trial])
        p = float(rng.uniform(0.5, 6.0)) / n
        edges = random_edges(n, p, rng)
        dense_edges, sparse_edges = _split(edges, rng)
        out = match_and_certify(graph_of(n, dense_edges), sparse_edges, eps, rng)
        mu = exact_matching(edges, n).size
        assert len(out.matching) >= mu - eps * n


def test_measured_degree():
    dense = graph_of(6, complete(6))
    m = Matching([(0, 1), (2, 3)])
    # K4 on the matched vertices has 6 edges over 2 matched edges
    assert measure_induced_degree(dense, m) == 3.0
    assert dense.matrix_probe_count == 6
    out = match_and_certify(graph_of(20, complete(20)), [], 0.2, np.random.default_rng(1), measure_d=True)
    assert out.certificate.measured_degree is not None


def _planted(n, p, rng):
    perm = rng.permutation(n).tolist()
    edges = {edge_of(perm[2 * i], perm[2 * i + 1]) for i in range(n // 2)}
    return sorted(edges | set(random_edges(n, p, rng)))


def edge_of(u, v):
    return (u, v) if u < v else (v, u)


@settings(max_examples=80)
@given(st.sampled_from([32, 64]), st.sampled_from([0.0, 0.05, 0.2]), st.sampled_from([0.25, 0.5]), st.integers(0, 2**32 - 1))
def test_sampling_reaches_target_when_union_does(n, p, delta, seed):
    rng = np.random.default_rng(seed)
    g = graph_of(n, _planted(n, p, rng))
    run = random_sampling(g, range(n), delta, rng)
    if len(run.union) >= delta * delta * n:
        assert len(run.matching) >= delta * delta * n
    assert 1 <= run.iteration <= len(run.round_sizes)
    assert run.round_sizes[run.iteration - 1] > 0


def test_candidate_size_floor_at_large_delta():
    # the ceiling 9 delta^2 n / 16 is 9 here, unlike the engine's own calls
    n, delta = 64, 0.5
    floor = math.floor(9 * delta * delta * n / 16)
    short = 0
    for seed in range(200):
        rng = np.random.default_rng(seed)
        g = graph_of(n, _planted(n, [0.0, 0.05, 0.2, 0.4][seed % 4], rng))
        res = solve_induced(g, [], range(n), delta, rng)
        assert res.candidate is not None and res.candidate.greedy_size == 0
        short += len(res.candidate.matching) < floor
    assert short <= 2


def test_boosting_skips_augmentation_when_free_vertices_are_few(monkeypatch):
    def boom(*args):
        raise AssertionError("augmentation round should not run")

    monkeypatch.setattr(static, "_augment_round", boom)
    # K21 leaves one free vertex after harvesting, well inside eps * n
    res = boosted_matching(graph_of(21, complete(21)), [], 0.1, np.random.default_rng(0))
    assert len(res.matching) == 10
