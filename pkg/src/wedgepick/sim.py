"""Wedge picking evolution process.

Each step flips a fair coin.  Heads: draw a uniform random wedge and, if it
is open, close it with probability ``p``.  Tails: draw a uniform unordered
vertex pair; connect it with probability ``r`` if disconnected, disconnect it
with probability ``q`` if connected.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .events import ADD, REMOVE, EdgeEvent
from .graph import DynamicGraph, GraphError
from .rng import RNG_ALGORITHM

NOOP = "noop"


@dataclass(frozen=True)
class ModelParams:
    p: float
    q: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        for name in ("p", "q", "r"):
            val = getattr(self, name)
            if not 0.0 <= val <= 1.0:
                raise ValueError(f"{name}={val} outside [0, 1]")


class SimEvent(NamedTuple):
    step: int
    kind: str  # ADD, REMOVE or NOOP
    pair: tuple[int, int] | None
    rule: str  # "i" or "ii"

    def as_edge_event(self) -> EdgeEvent:
        return EdgeEvent(self.step, self.pair[0], self.pair[1], self.kind)


class FenwickTree:
    """Prefix sums over nonnegative integer weights with O(log n) search."""

    def __init__(self, weights):
        self.n = len(weights)
        self.w = list(weights)
        tree = [0] * (self.n + 1)
        for i, x in enumerate(self.w, 1):
            tree[i] += x
            j = i + (i & -i)
            if j <= self.n:
                tree[j] += tree[i]
        self.tree = tree
        self.total = sum(self.w)
        top = 1
        while top * 2 <= self.n:
            top *= 2
        self._top = top

    def set(self, i: int, value: int) -> None:
        delta = value - self.w[i]
        if not delta:
            return
        self.w[i] = value
        self.total += delta
        i += 1
        tree = self.tree
        while i <= self.n:
            tree[i] += delta
            i += i & -i

    def find(self, x: int) -> int:
        """Smallest index whose inclusive prefix sum exceeds ``x``."""
        pos = 0
        tree = self.tree
        step = self._top
        while step:
            nxt = pos + step
            if nxt <= self.n and tree[nxt] <= x:
                pos = nxt
                x -= tree[nxt]
            step >>= 1
        return pos


class WedgeSampler:
    """Keeps C(d(v), 2) midpoint weights in sync with a graph."""

    def __init__(self, g: DynamicGraph):
        self.g = g
        self.tree = FenwickTree([d * (d - 1) // 2 for d in g.deg])
        g.watch_degrees(self._on_degree)

    def _on_degree(self, v: int, d: int) -> None:
        self.tree.set(v, d * (d - 1) // 2)

    def detach(self) -> None:
        self.g.unwatch_degrees(self._on_degree)

    def midpoint(self, rng: random.Random) -> int:
        return self.tree.find(rng.randrange(self.tree.total))


def sample_wedge(g: DynamicGraph, rng: random.Random, sampler: WedgeSampler | None = None) -> tuple[int, int, int]:
    """Uniform random wedge as (midpoint, endpoint, endpoint)."""
    if g.gamma <= 0:
        raise GraphError("graph has no wedges")
    if sampler is not None:
        mid = sampler.midpoint(rng)
    else:
        x = rng.randrange(g.gamma)
        for mid, d in enumerate(g.deg):
            x -= d * (d - 1) // 2
            if x < 0:
                break
    nbrs = g.neighbor_list(mid)
    d = len(nbrs)
    i = rng.randrange(d)
    j = rng.randrange(d - 1)
    if j >= i:
        j += 1
    return mid, nbrs[i], nbrs[j]


class WedgeSimulator:
    """Drives the process on ``g`` in place; the step clock starts at ``t``."""

    def __init__(
        self,
        g: DynamicGraph,
        params: ModelParams,
        rng: random.Random,
        t: int = 0,
        maintain_sampler: bool = True,
    ):
        self.g = g
        self.params = params
        self.rng = rng
        self.t = t
        self.sampler = WedgeSampler(g) if maintain_sampler else None

    def close(self) -> None:
        if self.sampler is not None:
            self.sampler.detach()
            self.sampler = None

    def step(self) -> SimEvent:
        g, rng, prm = self.g, self.rng, self.params
        self.t += 1
        t = self.t
        if rng.random() < 0.5:
            if g.gamma == 0:
                return SimEvent(t, NOOP, None, "i")
            _, a, b = sample_wedge(g, rng, self.sampler)
            if not g.has_edge(a, b) and rng.random() < prm.p:
                g.add_edge(a, b)
                return SimEvent(t, ADD, (a, b), "i")
            return SimEvent(t, NOOP, None, "i")
        n = g.n
        if n < 2:
            return SimEvent(t, NOOP, None, "ii")
        u = rng.randrange(n)
        v = rng.randrange(n - 1)
        if v >= u:
            v += 1
        if g.has_edge(u, v):
            if rng.random() < prm.q:
                g.remove_edge(u, v)
                return SimEvent(t, REMOVE, (u, v), "ii")
        elif rng.random() < prm.r:
            g.add_edge(u, v)
            return SimEvent(t, ADD, (u, v), "ii")
        return SimEvent(t, NOOP, None, "ii")

    def events(self) -> Iterator[SimEvent]:
        while True:
            ev = self.step()
            if ev.kind != NOOP:
                yield ev

    def run(self, max_steps: int | None = None, target_additions: int | None = None) -> list[SimEvent]:
        if max_steps is None and target_additions is None:
            raise ValueError("need a step budget or a target number of additions")
        if (max_steps is not None and max_steps < 0) or (target_additions is not None and target_additions < 0):
            raise ValueError("stop conditions must be nonnegative")
        out: list[SimEvent] = []
        adds = 0
        start = self.t
        while True:
            if max_steps is not None and self.t - start >= max_steps:
                break
            if target_additions is not None and adds >= target_additions:
                break
            ev = self.step()
            if ev.kind != NOOP:
                out.append(ev)
                adds += ev.kind == ADD
        return out


def step(g: DynamicGraph, params: ModelParams, rng: random.Random, t: int = 0) -> SimEvent:
    """One step of the process without a maintained sampler (O(n) wedge draw)."""
    return WedgeSimulator(g, params, rng, t=t, maintain_sampler=False).step()


def run_trace(
    g: DynamicGraph,
    params: ModelParams,
    rng: random.Random,
    max_steps: int | None = None,
    target_additions: int | None = None,
) -> list[SimEvent]:
    """Evolve ``g`` in place and return the non-noop events with step indices."""
    sim = WedgeSimulator(g, params, rng)
    try:
        return sim.run(max_steps=max_steps, target_additions=target_additions)
    finally:
        sim.close()


def trace_to_events(trace) -> list[EdgeEvent]:
    return [ev.as_edge_event() for ev in trace]


def trace_header(params: ModelParams, seed: int, n: int) -> str:
    return f"rng={RNG_ALGORITHM} seed={seed} n={n} p={params.p!r} q={params.q!r} r={params.r!r}"
