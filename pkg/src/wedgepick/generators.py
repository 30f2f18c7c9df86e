"""Small deterministic graph families used as seeds and test fixtures."""

from __future__ import annotations

import itertools
import random

from .graph import DynamicGraph


def complete_graph(k: int, n: int | None = None) -> DynamicGraph:
    return DynamicGraph(n if n is not None else k, itertools.combinations(range(k), 2))


def star_graph(leaves: int) -> DynamicGraph:
    """Centre 0 joined to leaves 1..leaves."""
    return DynamicGraph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def path_graph(k: int) -> DynamicGraph:
    return DynamicGraph(k, ((i, i + 1) for i in range(k - 1)))


def cycle_graph(k: int) -> DynamicGraph:
    return DynamicGraph(k, ((i, (i + 1) % k) for i in range(k)))


def gnp_graph(n: int, prob: float, rng: random.Random) -> DynamicGraph:
    g = DynamicGraph(n)
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < prob:
            g.add_edge(u, v)
    return g


def gnm_graph(n: int, m: int, rng: random.Random) -> DynamicGraph:
    if m > n * (n - 1) // 2:
        raise ValueError("too many edges for a simple graph")
    g = DynamicGraph(n)
    while g.m < m:
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u != v and not g.has_edge(u, v):
            g.add_edge(u, v)
    return g


def planted_partition(n: int, blocks: int, p_in: float, p_out: float, rng: random.Random) -> DynamicGraph:
    """Vertices split round-robin into ``blocks`` communities; G(n, p) inside and across."""
    g = DynamicGraph(n)
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < (p_in if u % blocks == v % blocks else p_out):
            g.add_edge(u, v)
    return g
