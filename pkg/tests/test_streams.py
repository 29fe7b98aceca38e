from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dynmatch.errors import StreamParseError
from dynmatch.streams import (
    CHECKPOINT_MARK,
    Event,
    Stream,
    format_stream,
    load_graph,
    parse_stream,
    parse_stream_text,
    write_stream,
)


def test_parse_basic():
    s = parse_stream_text("# comment\nn 4\n+ 0 1\n+ 2 3\n#@checkpoint\n- 0 1\n")
    assert s.n == 4
    assert s.events == [Event("+", 0, 1), Event("+", 2, 3), Event("-", 0, 1)]
    assert s.markers == [2]
    assert s.events[0].is_insert and not s.events[2].is_insert


@pytest.mark.parametrize(
    "text,line",
    [
        ("+ 0 1\n", 1),
        ("n 3\n+ 0 3\n", 2),
        ("n 3\n+ 1 1\n", 2),
        ("n 3\n+ 0 1\n* 0 1\n", 3),
        ("n 3\n\n+ 0 x\n", 3),
        ("n 3\n+ 0\n", 2),
    ],
)
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(StreamParseError, match=f"line {line}:") as info:
        parse_stream_text(text)
    assert info.value.lineno == line


def test_missing_header():
    with pytest.raises(StreamParseError):
        parse_stream_text("# nothing here\n")


events = st.lists(
    st.tuples(st.sampled_from("+-"), st.integers(0, 7), st.integers(0, 7)).filter(lambda t: t[1] != t[2]),
    max_size=30,
)


@given(events, st.lists(st.integers(0, 30), max_size=4))
def test_format_parse_round_trip(evs, marks):
    stream = Stream(8, [Event(*t) for t in evs], sorted(m for m in marks if m <= len(evs)))
    back = parse_stream_text(format_stream(stream))
    assert back == stream


def test_file_round_trip(tmp_path):
    stream = Stream(5, [Event("+", 0, 4), Event("-", 0, 4)], [1])
    path = tmp_path / "s.txt"
    write_stream(stream, path)
    assert CHECKPOINT_MARK in path.read_text()
    assert parse_stream(path) == stream
    with open(path) as fh:
        assert parse_stream(fh) == stream


def test_load_graph_from_stream_and_edge_list(tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("n 6\n+ 0 1\n+ 2 3\n- 0 1\n+ 4 5\n")
    assert load_graph(p) == (6, {(2, 3), (4, 5)})
    q = tmp_path / "e.txt"
    q.write_text("0 1\n3 2\n")
    assert load_graph(q) == (4, {(0, 1), (2, 3)})
    q.write_text("n 10\n0 1\n")
    assert load_graph(q) == (10, {(0, 1)})
    q.write_text("n 2\n0 5\n")
    with pytest.raises(StreamParseError):
        load_graph(q)
