"""Update-stream text format.

A stream file starts with a header line ``n <N>`` followed by one event per
line, ``+ u v`` for an insertion or ``- u v`` for a deletion (0-indexed).
Lines starting with ``#`` are comments; the special comment ``#@checkpoint``
marks a position at which the bench runner takes an extra snapshot.
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, TextIO

from .errors import StreamParseError

CHECKPOINT_MARK = "#@checkpoint"


class Event(NamedTuple):
    op: str  # "+" or "-"
    u: int
    v: int

    @property
    def is_insert(self) -> bool:
        return self.op == "+"


def insert(u: int, v: int) -> Event:
    return Event("+", u, v)


def delete(u: int, v: int) -> Event:
    return Event("-", u, v)


@dataclass
class Stream:
    n: int
    events: list[Event]
    markers: list[int] = field(default_factory=list)  # event counts at #@checkpoint lines

    def __len__(self) -> int:
        return len(self.events)


def parse_stream(source: str | os.PathLike | TextIO) -> Stream:
    """Parse a stream from a file path or an open text file."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            return _parse_lines(fh)
    return _parse_lines(source)


def parse_stream_text(text: str) -> Stream:
    return _parse_lines(io.StringIO(text))


def _parse_lines(lines: Iterable[str]) -> Stream:
    n: int | None = None
    events: list[Event] = []
    markers: list[int] = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.startswith(CHECKPOINT_MARK):
                markers.append(len(events))
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise StreamParseError(lineno, f"expected header 'n <N>', got {line!r}")
            n = _parse_int(parts[1], lineno)
            if n < 0:
                raise StreamParseError(lineno, "vertex count must be non-negative")
            continue
        if len(parts) != 3 or parts[0] not in ("+", "-"):
            raise StreamParseError(lineno, f"expected '+ u v' or '- u v', got {line!r}")
        u = _parse_int(parts[1], lineno)
        v = _parse_int(parts[2], lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise StreamParseError(lineno, f"vertex out of range for n={n}")
        if u == v:
            raise StreamParseError(lineno, "self-loop")
        events.append(Event(parts[0], u, v))
    if n is None:
        raise StreamParseError(0, "missing header 'n <N>'")
    return Stream(n, events, markers)


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise StreamParseError(lineno, f"not an integer: {token!r}") from None


def format_stream(stream: Stream) -> str:
    out = [f"n {stream.n}"]
    marks = sorted(stream.markers)
    k = 0
    for i, ev in enumerate(stream.events):
        while k < len(marks) and marks[k] == i:
            out.append(CHECKPOINT_MARK)
            k += 1
        out.append(f"{ev.op} {ev.u} {ev.v}")
    while k < len(marks):
        out.append(CHECKPOINT_MARK)
        k += 1
    return "\n".join(out) + "\n"


def write_stream(stream: Stream, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_stream(stream))


def load_graph(path: str | os.PathLike) -> tuple[int, set[tuple[int, int]]]:
    """Final edge set of a stream file, or of a plain ``u v`` edge list.

    A plain edge list may start with an ``n <N>`` header; without one, ``n``
    is one more than the largest vertex id.
    """
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    body = [
        (lineno, ln.split())
        for lineno, ln in enumerate(text.splitlines(), start=1)
        if ln.strip() and not ln.lstrip().startswith("#")
    ]
    if any(len(parts) == 3 for _, parts in body):
        stream = parse_stream_text(text)
        edges: set[tuple[int, int]] = set()
        for ev in stream.events:
            e = (min(ev.u, ev.v), max(ev.u, ev.v))
            if ev.is_insert:
                edges.add(e)
            else:
                edges.discard(e)
        return stream.n, edges
    n = None
    edges = set()
    for lineno, parts in body:
        if parts[0] == "n" and len(parts) == 2 and n is None and not edges:
            n = _parse_int(parts[1], lineno)
            continue
        if len(parts) != 2:
            raise StreamParseError(lineno, f"expected 'u v', got {' '.join(parts)!r}")
        u, v = _parse_int(parts[0], lineno), _parse_int(parts[1], lineno)
        if u == v or u < 0 or v < 0:
            raise StreamParseError(lineno, f"invalid edge ({u}, {v})")
        edges.add((min(u, v), max(u, v)))
    top = max((v for e in edges for v in e), default=-1) + 1
    if n is None:
        n = top
    elif top > n:
        raise StreamParseError(0, f"vertex id {top - 1} out of range for n={n}")
    return n, edges
