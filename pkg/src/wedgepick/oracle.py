"""Exact densest and tri-densest subgraph solvers used as ground truth.

``densest_exact`` decides "is there a subgraph denser than g?" with one
minimum cut per guess.  For a guess g = a/b every capacity is scaled by b so
the network stays integral:

    source -> v    m*b
    v -> sink      m*b + 2a - d(v)*b
    u <-> v        b in each direction, per edge

A cut whose source side is {source} + S costs n*m*b + 2b|S|(g - rho(S)), so
the minimum cut is below n*m*b exactly when some S has rho(S) > g, and that
S is the source side of the minimum cut.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import DynamicGraph, GraphError

BRUTE_DENSEST_MAX_N = 20
BRUTE_TRI_MAX_N = 16


@dataclass(frozen=True)
class OracleResult:
    subset: tuple[int, ...]
    value: Fraction
    method: str


class MaxFlow:
    """Dinic's algorithm on an integer-capacity network."""

    def __init__(self, n: int):
        self.n = n
        self.head = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, cap: int, rev_cap: int = 0) -> None:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(rev_cap)

    def _levels(self, s: int, t: int) -> list[int] | None:
        level = [-1] * self.n
        level[s] = 0
        dq = deque([s])
        to, cap, head = self.to, self.cap, self.head
        while dq:
            u = dq.popleft()
            for e in head[u]:
                if cap[e] > 0 and level[to[e]] < 0:
                    level[to[e]] = level[u] + 1
                    dq.append(to[e])
        return level if level[t] >= 0 else None

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        to, cap, head = self.to, self.cap, self.head
        while True:
            level = self._levels(s, t)
            if level is None:
                return total
            it = [0] * self.n
            while True:
                # iterative blocking-flow search along level-increasing arcs
                path: list[int] = []
                u = s
                while u != t:
                    adv = False
                    hu = head[u]
                    while it[u] < len(hu):
                        e = hu[it[u]]
                        v = to[e]
                        if cap[e] > 0 and level[v] == level[u] + 1:
                            path.append(e)
                            u = v
                            adv = True
                            break
                        it[u] += 1
                    if not adv:
                        if u == s:
                            break
                        level[u] = -1
                        e = path.pop()
                        u = to[e ^ 1]
                        it[u] += 1
                if u != t:
                    break
                push = min(cap[e] for e in path)
                for e in path:
                    cap[e] -= push
                    cap[e ^ 1] += push
                total += push

    def source_side(self, s: int) -> list[bool]:
        seen = [False] * self.n
        seen[s] = True
        dq = deque([s])
        while dq:
            u = dq.popleft()
            for e in self.head[u]:
                v = self.to[e]
                if self.cap[e] > 0 and not seen[v]:
                    seen[v] = True
                    dq.append(v)
        return seen


def denser_than(g: DynamicGraph, guess: Fraction) -> tuple[int, ...] | None:
    """A vertex set with density strictly above ``guess``, or None."""
    guess = Fraction(guess)
    a, b = guess.numerator, guess.denominator
    n, m = g.n, g.m
    s, t = n, n + 1
    net = MaxFlow(n + 2)
    for v in range(n):
        net.add_edge(s, v, m * b)
        net.add_edge(v, t, m * b + 2 * a - g.deg[v] * b)
    for u, v in g.edges():
        net.add_edge(u, v, b, b)
    cut = net.max_flow(s, t)
    if cut >= n * m * b:
        return None
    side = net.source_side(s)
    return tuple(v for v in range(n) if side[v])


def densest_exact(g: DynamicGraph) -> OracleResult:
    if g.m == 0:
        raise GraphError("no edges: densest subgraph undefined")
    n = g.n
    lo = Fraction(g.m, n)
    best = tuple(range(n))
    hi = Fraction(n - 1, 2)
    gap = Fraction(1, n * (n - 1))
    while hi - lo >= gap:
        mid = (lo + hi) / 2
        witness = denser_than(g, mid)
        if witness is None:
            hi = mid
        else:
            best = witness
            lo = g.induced_density(witness)[0]
    return OracleResult(best, lo, "flow")


# -- brute force --------------------------------------------------------------


def _popcount(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint32)
    x = x - ((x >> 1) & 0x55555555)
    x = (x & 0x33333333) + ((x >> 2) & 0x33333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F
    return ((x * 0x01010101) & 0xFFFFFFFF) >> 24


def _adjacency_masks(g: DynamicGraph) -> list[int]:
    return [sum(1 << w for w in g.neighbor_list(v)) for v in range(g.n)]


def _subset_tables(g: DynamicGraph, triangles: bool):
    """Edge (and triangle) counts of every induced subgraph, indexed by bitmask."""
    n = g.n
    adj = _adjacency_masks(g)
    size = np.zeros(1, dtype=np.int64)
    edges = np.zeros(1, dtype=np.int64)
    tri = np.zeros(1, dtype=np.int64) if triangles else None
    for i in range(n):
        low = np.arange(1 << i, dtype=np.int64)
        inter = low & adj[i]
        new_edges = edges + _popcount(inter)
        if triangles:
            # edges among i's neighbours inside the lower set
            tri = np.concatenate([tri, tri + edges[inter]])
        edges = np.concatenate([edges, new_edges])
        size = np.concatenate([size, size + 1])
    return size, edges, tri


def _reverse_bits(masks: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(masks)
    for i in range(n):
        out |= ((masks >> i) & 1) << (n - 1 - i)
    return out


def _pick(size: np.ndarray, score: np.ndarray, n: int) -> tuple[tuple[int, ...], Fraction]:
    best = Fraction(-1)
    for k in range(1, n + 1):
        sel = size == k
        top = int(score[sel].max())
        val = Fraction(top, k)
        if val >= best:  # larger sizes win ties
            best, best_k = val, k
    cand = np.nonzero((size == best_k) & (score * best.denominator == best.numerator * best_k))[0]
    # among equal sets, smallest sorted vertex tuple = largest bit-reversed mask
    mask = int(cand[np.argmax(_reverse_bits(cand, n))])
    return tuple(i for i in range(n) if mask >> i & 1), best


def densest_bruteforce(g: DynamicGraph) -> OracleResult:
    if g.n > BRUTE_DENSEST_MAX_N:
        raise GraphError(f"brute force limited to n <= {BRUTE_DENSEST_MAX_N}")
    if g.n == 0:
        raise GraphError("empty vertex set")
    size, edges, _ = _subset_tables(g, triangles=False)
    subset, value = _pick(size, edges, g.n)
    return OracleResult(subset, value, "bruteforce")


def tridensest_bruteforce(g: DynamicGraph) -> OracleResult:
    if g.n > BRUTE_TRI_MAX_N:
        raise GraphError(f"brute force limited to n <= {BRUTE_TRI_MAX_N}")
    if g.n == 0:
        raise GraphError("empty vertex set")
    size, _, tri = _subset_tables(g, triangles=True)
    subset, value = _pick(size, tri, g.n)
    return OracleResult(subset, value, "bruteforce")
