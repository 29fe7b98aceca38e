from __future__ import annotations

import numpy as np
import pytest

from dynmatch.errors import InvalidArgument, MalformedInstance
from dynmatch.oracle import exact_matching
from dynmatch.ors import (
    NOT_DISJOINT,
    NOT_INDUCED,
    TOO_SMALL,
    OrderedMatchingInstance,
    churn_stream_gen,
    core_stream_gen,
    format_instance,
    greedy_ors_pack,
    hard_sequence_gen,
    pairwise_overlap_max,
    parse_instance,
    random_stream_gen,
    read_instance,
    verify_ors,
    verify_rs,
    write_instance,
)

from .conftest import brute_force_verify


def inst(n, r, *ms):
    return OrderedMatchingInstance(n, r, [list(m) for m in ms])


def as_tuple(v):
    return None if v is None else (v.kind, v.i, v.j, v.witness)


def test_ordered_example_valid():
    assert verify_ors(inst(5, 1, [(1, 2), (3, 4)], [(1, 3)])) is None


def test_reversed_order_not_induced():
    bad = verify_ors(inst(5, 1, [(1, 3)], [(1, 2), (3, 4)]))
    assert (bad.kind, bad.i, bad.witness) == (NOT_INDUCED, 2, (1, 3))


def test_single_matching_always_valid():
    one = inst(6, 3, [(0, 1), (2, 3), (4, 5)])
    assert verify_ors(one) is None and verify_rs(one) is None


def test_ordered_example_fails_rs():
    bad = verify_rs(inst(5, 1, [(1, 2), (3, 4)], [(1, 3)]))
    assert (bad.kind, bad.i, bad.j, bad.witness) == (NOT_INDUCED, 1, 2, (1, 3))


def test_too_small_and_not_disjoint():
    assert verify_ors(inst(6, 2, [(0, 1)])).kind == TOO_SMALL
    bad = verify_ors(inst(6, 1, [(0, 1), (2, 3)], [(4, 5), (2, 3)]))
    assert (bad.kind, bad.i, bad.j, bad.witness) == (NOT_DISJOINT, 2, 1, (2, 3))


def test_malformed():
    with pytest.raises(MalformedInstance):
        verify_ors(inst(5, 1, [(0, 1), (1, 2)]))
    with pytest.raises(MalformedInstance):
        verify_rs(inst(3, 1, [(0, 3)]))


def _enumerate_matchings(n, max_size):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    out = [[]]

    def grow(start, cur, used):
        for k in range(start, len(pairs)):
            u, v = pairs[k]
            if u in used or v in used:
                continue
            nxt = cur + [pairs[k]]
            out.append(nxt)
            if len(nxt) < max_size:
                grow(k + 1, nxt, used | {u, v})

    grow(0, [], frozenset())
    return [m for m in out if m]


def _agree(ms, n, r):
    i = OrderedMatchingInstance(n, r, ms)
    assert as_tuple(verify_ors(i)) == brute_force_verify(i.matchings, r, rs=False)
    assert as_tuple(verify_rs(i)) == brute_force_verify(i.matchings, r, rs=True)


def test_agrees_with_brute_force_exhaustive_n4():
    ms = _enumerate_matchings(4, 2)
    for r in (1, 2):
        for a in ms:
            _agree([a], 4, r)
            for b in ms:
                _agree([a, b], 4, r)
                for c in ms:
                    _agree([a, b, c], 4, r)


def test_agrees_with_brute_force_random():
    rng = np.random.default_rng(5)
    for _ in range(2000):
        n = int(rng.integers(2, 13))
        t = int(rng.integers(1, 5))
        r = int(rng.integers(1, 3))
        ms = []
        for _ in range(t):
            k = int(rng.integers(1, min(2, n // 2) + 1))
            verts = rng.choice(n, size=2 * k, replace=False).tolist()
            ms.append(list(zip(verts[::2], verts[1::2])))
        _agree(ms, n, r)


def test_rs_implies_ors_on_random_instances():
    rng = np.random.default_rng(6)
    for _ in range(500):
        ms = []
        for _ in range(int(rng.integers(1, 5))):
            verts = rng.choice(12, size=4, replace=False).tolist()
            ms.append(list(zip(verts[::2], verts[1::2])))
        i = OrderedMatchingInstance(12, 2, ms)
        if verify_rs(i) is None:
            assert verify_ors(i) is None


def test_pack_perfect_matchings_stops_at_one():
    for seed in range(10):
        out = greedy_ors_pack(8, 4, 50, np.random.default_rng(seed))
        assert out.t == 1


def test_pack_single_edges_reaches_eight():
    out = greedy_ors_pack(16, 1, 200, np.random.default_rng(0))
    assert out.t >= 8


@pytest.mark.parametrize("n,r", [(20, 3), (50, 10), (30, 5)])
def test_pack_output_is_valid(n, r):
    out = greedy_ors_pack(n, r, 200, np.random.default_rng(n + r))
    assert verify_ors(out) is None
    assert all(len(m) == r for m in out.matchings)
    edges = out.edges()
    assert len(edges) == len(set(edges))


def test_pack_rejects_oversized():
    with pytest.raises(InvalidArgument):
        greedy_ors_pack(7, 4, 10, np.random.default_rng(0))


def test_overlap():
    assert pairwise_overlap_max(inst(8, 1, [(0, 1)], [(2, 3)])) == 0
    assert pairwise_overlap_max(inst(5, 1, [(1, 2), (3, 4)], [(1, 3)])) == 2
    assert pairwise_overlap_max(inst(4, 1, [(0, 1)])) == 0


def test_overlap_bounded_by_r_on_packed_instances():
    # for valid ordered instances with r > n/4 the overlap never exceeds r
    for seed in range(5):
        out = greedy_ors_pack(12, 4, 200, np.random.default_rng(seed))
        assert pairwise_overlap_max(out) <= out.r


def _replay(stream):
    live = set()
    for ev in stream.events:
        e = (min(ev.u, ev.v), max(ev.u, ev.v))
        if ev.is_insert:
            assert e not in live
            live.add(e)
        else:
            assert e in live
            live.remove(e)
        yield live


def test_hard_sequence_perfect_matching_at_every_boundary():
    packed = greedy_ors_pack(30, 6, 300, np.random.default_rng(1))
    seq = hard_sequence_gen(packed)
    n = seq.stream.n
    assert n == 30 + (30 - 12)
    assert seq.epsilon == pytest.approx(6 / 30)
    boundaries, isolations = set(seq.boundaries), set(seq.isolation_points)
    assert len(seq.boundaries) == packed.t
    for k, live in enumerate(_replay(seq.stream), start=1):
        if k in boundaries:
            assert exact_matching(live, n).size == n // 2
        if k in isolations:
            assert not any(u in seq.singletons or v in seq.singletons for u, v in live)


def test_hard_sequence_single_iteration():
    one = inst(8, 2, [(0, 1), (2, 3)])
    seq = hard_sequence_gen(one)
    assert seq.boundaries == [len(seq.stream.events)]
    assert len(seq.isolation_points) == 1


def test_hard_sequence_rejects_bad_instances():
    with pytest.raises(MalformedInstance):
        hard_sequence_gen(inst(6, 1, [(0, 1), (1, 2)]))
    with pytest.raises(MalformedInstance):
        hard_sequence_gen(inst(6, 1, [(1, 3)], [(1, 2), (3, 4)]))


def test_stream_generators():
    rng = np.random.default_rng(0)
    pure = random_stream_gen(10, 30, 1.0, rng)
    assert all(ev.is_insert for ev in pure.events)
    assert len(random_stream_gen(10, 0, 0.5, rng).events) == 0
    for stream in (
        random_stream_gen(12, 500, 0.5, rng),
        churn_stream_gen(12, 500, 20, rng),
        core_stream_gen(40, 4, 500, 0.6, rng),
        random_stream_gen(4, 200, 0.9, rng),
    ):
        assert len(stream.events) in (500, 200)
        for _ in _replay(stream):
            pass


def test_core_stream_bounds_matching():
    stream = core_stream_gen(64, 4, 400, 0.7, np.random.default_rng(2))
    assert all(min(ev.u, ev.v) < 4 for ev in stream.events)


def test_churn_window():
    stream = churn_stream_gen(20, 300, 15, np.random.default_rng(3))
    for live in _replay(stream):
        assert len(live) <= 15


def test_instance_round_trip(tmp_path):
    packed = greedy_ors_pack(20, 3, 100, np.random.default_rng(4))
    path = tmp_path / "inst.txt"
    write_instance(packed, path)
    back = read_instance(path)
    assert back.matchings == packed.matchings and (back.n, back.r) == (20, 3)
    assert parse_instance(format_instance(packed)).t == packed.t


@pytest.mark.parametrize(
    "text",
    ["", "4 1 1\nmatching 2 1\n0 1\n", "4 1 1\nmatching 1 2\n0 1\n", "4 1 1\nmatching 1 1\n0 1\n2 3\n", "4 1 1\nmatching 1 1\n0 0\n"],
)
def test_instance_parse_errors(text):
    with pytest.raises(MalformedInstance):
        parse_instance(text)
