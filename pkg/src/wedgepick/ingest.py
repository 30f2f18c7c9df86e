"""Edge-event file parsing and cleaning.

Accepted lines are whitespace separated ``u v [t] [op]`` with op one of
``+``/``-`` (also ``1``/``-1`` in the KONECT weight position).  Four-token
lines whose last token is not an op are read as KONECT ``u v w t``, where a
weight of -1 marks a removal.  Lines starting with ``#`` or ``%`` are
comments.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable

from .events import ADD, REMOVE, EdgeEvent, write_events
from .graph import DynamicGraph

_OPS = {"+": ADD, "-": REMOVE}


class IngestError(ValueError):
    pass


@dataclass
class CleaningReport:
    raw_lines: int = 0
    comments: int = 0
    blank: int = 0
    self_loops: int = 0
    duplicate_adds: int = 0
    absent_removes: int = 0
    kept: int = 0

    def balanced(self) -> bool:
        dropped = self.comments + self.blank + self.self_loops + self.duplicate_adds + self.absent_removes
        return self.kept + dropped == self.raw_lines

    def as_dict(self) -> dict[str, int]:
        return dict(self.__dict__)


@dataclass
class Ingested:
    graph: DynamicGraph
    cleaned: list[EdgeEvent]
    split: int
    labels: list[str]
    report: CleaningReport
    ids: dict[str, int] = field(default_factory=dict)

    @property
    def events(self) -> list[EdgeEvent]:
        """The stream after the initial-graph prefix."""
        return self.cleaned[self.split :]

    @property
    def n(self) -> int:
        return self.graph.n


def parse_line(line: str, lineno: int) -> tuple[str, str, int, str]:
    tok = line.split()
    if len(tok) < 2 or len(tok) > 4:
        raise IngestError(f"line {lineno}: expected 'u v [t] [op]', got {line.rstrip()!r}")
    u, v = tok[0], tok[1]
    t = lineno
    op = ADD
    try:
        if len(tok) == 3:
            if tok[2] in _OPS:
                op = _OPS[tok[2]]
            else:
                t = int(tok[2])
        elif len(tok) == 4:
            if tok[3] in _OPS:
                t = int(tok[2])
                op = _OPS[tok[3]]
            else:
                w = float(tok[2])
                t = int(tok[3])
                op = REMOVE if w < 0 else ADD
    except ValueError:
        raise IngestError(f"line {lineno}: bad timestamp or weight in {line.rstrip()!r}") from None
    if t < 0:
        raise IngestError(f"line {lineno}: negative timestamp")
    return u, v, t, op


def _open_lines(source) -> Iterable[str]:
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8") as fh:
            yield from fh
    else:
        yield from source  # open file or any iterable of lines


def _id_key(label: str):
    return (0, int(label), "") if label.lstrip("-").isdigit() else (1, 0, label)


def ingest(
    source,
    initial_count: int | None = None,
    initial_until: int | None = None,
) -> Ingested:
    """Parse, clean and split an edge-event file.

    The first ``initial_count`` cleaned events (or all events with
    ``t <= initial_until``) are folded into the returned graph; the rest are
    returned as the event stream.  Vertex ids are remapped to 0..n-1 in
    sorted order of the external ids (numeric ids numerically).
    """
    if initial_count is not None and initial_until is not None:
        raise ValueError("split by count or by time, not both")
    rep = CleaningReport()
    raw: list[tuple[int, int, str, str, str]] = []
    for lineno, line in enumerate(_open_lines(source), 1):
        rep.raw_lines += 1
        s = line.strip()
        if not s:
            rep.blank += 1
            continue
        if s[0] in "#%":
            rep.comments += 1
            continue
        u, v, t, op = parse_line(s, lineno)
        raw.append((t, lineno, u, v, op))
    if not raw:
        raise IngestError("no edge events in input")
    raw.sort(key=lambda x: (x[0], x[1]))  # stable by timestamp, then file order

    labels = sorted({x for r in raw for x in (r[2], r[3])}, key=_id_key)
    ids = {lab: i for i, lab in enumerate(labels)}
    live: set[tuple[int, int]] = set()
    cleaned: list[EdgeEvent] = []
    for t, _, a, b, op in raw:
        u, v = ids[a], ids[b]
        if u == v:
            rep.self_loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if op == ADD:
            if key in live:
                rep.duplicate_adds += 1
                continue
            live.add(key)
        else:
            if key not in live:
                rep.absent_removes += 1
                continue
            live.discard(key)
        cleaned.append(EdgeEvent(t, u, v, op))
    rep.kept = len(cleaned)

    g = DynamicGraph(len(labels))
    if initial_count is not None:
        split = min(max(initial_count, 0), len(cleaned))
    elif initial_until is not None:
        split = 0
        while split < len(cleaned) and cleaned[split].t <= initial_until:
            split += 1
    else:
        split = 0
    for e in cleaned[:split]:
        if e.op == ADD:
            g.add_edge(e.u, e.v)
        else:
            g.remove_edge(e.u, e.v)
    return Ingested(g, cleaned, split, labels, rep, ids)


def write_cleaned(path, data: Ingested) -> None:
    """Write every cleaned event with its external ids; re-ingesting gives the same file."""
    write_events(path, data.cleaned, labels=data.labels)


def graph_from_file(source) -> DynamicGraph:
    """Static edge list: every cleaned event folded into one graph."""
    return ingest(source, initial_count=10**18).graph
