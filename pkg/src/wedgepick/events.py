from __future__ import annotations

from typing import Iterable, NamedTuple

ADD = "add"
REMOVE = "remove"

_OP_SYMBOL = {ADD: "+", REMOVE: "-"}


class EdgeEvent(NamedTuple):
    t: int
    u: int
    v: int
    op: str  # ADD or REMOVE

    @property
    def is_add(self) -> bool:
        return self.op == ADD


def format_event(e: EdgeEvent, labels=None) -> str:
    u, v = (e.u, e.v) if labels is None else (labels[e.u], labels[e.v])
    return f"{u} {v} {e.t} {_OP_SYMBOL[e.op]}"


def write_events(path, events: Iterable[EdgeEvent], header: str | None = None, labels=None) -> None:
    """Write events as ``u v t op`` lines, op in {+, -}; readable by ``ingest``."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for e in events:
            fh.write(format_event(e, labels) + "\n")


def apply_events(g, events: Iterable[EdgeEvent]) -> None:
    for e in events:
        if e.op == ADD:
            g.add_edge(e.u, e.v)
        else:
            g.remove_edge(e.u, e.v)
