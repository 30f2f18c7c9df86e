"""Undirected simple graph with exact incremental wedge and triangle counters."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple

import numpy as np


class GraphError(ValueError):
    """Base class for rejected graph mutations and queries."""


class SelfLoopError(GraphError):
    pass


class DuplicateEdgeError(GraphError):
    pass


class MissingEdgeError(GraphError):
    pass


class UnknownVertexError(GraphError):
    pass


class UpdateDelta(NamedTuple):
    d_gamma: int
    d_gamma_open: int
    d_tri: int


class WedgeStats(NamedTuple):
    gamma: int
    gamma_open: int
    gamma_closed: int
    triangles: int


@dataclass(frozen=True)
class VertexStats:
    d: int
    gamma_v: int
    D: int
    zeta2: int


@dataclass
class AuditReport:
    passed: bool
    mismatches: list[str]

    def __bool__(self) -> bool:
        return self.passed


class DynamicGraph:
    """Graph on the fixed vertex set ``0..n-1``.

    Neighbourhoods are stored as ``dict`` (neighbour -> slot in an indexable
    list) so that membership is O(1) and a uniform random neighbour can be
    drawn in O(1).  Edges also live in a flat slab so vectorised per-vertex
    sums over neighbours are cheap.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        self.n = n
        self._pos: list[dict[int, int]] = [{} for _ in range(n)]
        self._nbrs: list[list[int]] = [[] for _ in range(n)]
        self.deg: list[int] = [0] * n
        self.tri_deg: list[int] = [0] * n
        self.m = 0
        self.gamma = 0
        self.triangles = 0
        self._eu: list[int] = []
        self._ev: list[int] = []
        self._eslot: dict[tuple[int, int], int] = {}
        self._watchers: list[Callable[[int, int], None]] = []
        for u, v in edges:
            self.add_edge(u, v)

    # -- basic queries -------------------------------------------------
    @property
    def gamma_open(self) -> int:
        return self.gamma - 3 * self.triangles

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._pos[u]

    def neighbors(self, v: int):
        """Keys view of N(v); supports fast ``in`` and set operations."""
        return self._pos[v].keys()

    def neighbor_list(self, v: int) -> list[int]:
        """Indexable neighbour list (order is unspecified; do not mutate)."""
        return self._nbrs[v]

    def edges(self) -> list[tuple[int, int]]:
        return sorted((min(u, v), max(u, v)) for u, v in zip(self._eu, self._ev))

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self._eu, dtype=np.int64), np.asarray(self._ev, dtype=np.int64)

    def degree_array(self) -> np.ndarray:
        return np.asarray(self.deg, dtype=np.int64)

    @property
    def d_max(self) -> int:
        return max(self.deg, default=0)

    def copy(self) -> "DynamicGraph":
        h = DynamicGraph.__new__(DynamicGraph)
        h.n = self.n
        h._pos = [dict(p) for p in self._pos]
        h._nbrs = [list(x) for x in self._nbrs]
        h.deg = list(self.deg)
        h.tri_deg = list(self.tri_deg)
        h.m = self.m
        h.gamma = self.gamma
        h.triangles = self.triangles
        h._eu = list(self._eu)
        h._ev = list(self._ev)
        h._eslot = dict(self._eslot)
        h._watchers = []
        return h

    def watch_degrees(self, callback: Callable[[int, int], None]) -> None:
        """Register ``callback(v, new_degree)``, fired on every degree change."""
        self._watchers.append(callback)

    def unwatch_degrees(self, callback: Callable[[int, int], None]) -> None:
        self._watchers.remove(callback)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise UnknownVertexError(f"vertex {v} not in 0..{self.n - 1}")

    def common_neighbors(self, u: int, v: int) -> list[int]:
        a, b = self._pos[u], self._pos[v]
        if len(a) > len(b):
            a, b = b, a
        return [w for w in a if w in b]

    def common_degree(self, u: int, v: int) -> int:
        """d(u, v) = |N(u) & N(v)|, iterating over the smaller neighbourhood."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise GraphError("common degree needs two distinct vertices")
        a, b = self._pos[u], self._pos[v]
        if len(a) > len(b):
            a, b = b, a
        return sum(1 for w in a if w in b)

    # -- mutation --------------------------------------------------------
    def add_edge(self, u: int, v: int) -> UpdateDelta:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise SelfLoopError(f"self-loop at {u}")
        pu, pv = self._pos[u], self._pos[v]
        if v in pu:
            raise DuplicateEdgeError(f"edge ({u}, {v}) already present")
        common = self.common_neighbors(u, v)
        pu[v] = len(self._nbrs[u])
        self._nbrs[u].append(v)
        pv[u] = len(self._nbrs[v])
        self._nbrs[v].append(u)
        key = (u, v) if u < v else (v, u)
        self._eslot[key] = len(self._eu)
        self._eu.append(key[0])
        self._ev.append(key[1])

        d_gamma = self.deg[u] + self.deg[v]
        self.deg[u] += 1
        self.deg[v] += 1
        self.m += 1
        t = len(common)
        self.gamma += d_gamma
        self.triangles += t
        if t:
            tri = self.tri_deg
            tri[u] += t
            tri[v] += t
            for w in common:
                tri[w] += 1
        for cb in self._watchers:
            cb(u, self.deg[u])
            cb(v, self.deg[v])
        return UpdateDelta(d_gamma, d_gamma - 3 * t, t)

    def _unlink(self, a: int, b: int) -> None:
        pos, lst = self._pos[a], self._nbrs[a]
        i = pos.pop(b)
        last = lst.pop()
        if last != b:
            lst[i] = last
            pos[last] = i

    def remove_edge(self, u: int, v: int) -> UpdateDelta:
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v or v not in self._pos[u]:
            raise MissingEdgeError(f"edge ({u}, {v}) not present")
        self._unlink(u, v)
        self._unlink(v, u)
        key = (u, v) if u < v else (v, u)
        i = self._eslot.pop(key)
        lu, lv = self._eu.pop(), self._ev.pop()
        if (lu, lv) != key:
            self._eu[i], self._ev[i] = lu, lv
            self._eslot[(lu, lv)] = i
        common = self.common_neighbors(u, v)

        self.deg[u] -= 1
        self.deg[v] -= 1
        self.m -= 1
        d_gamma = self.deg[u] + self.deg[v]
        t = len(common)
        self.gamma -= d_gamma
        self.triangles -= t
        if t:
            tri = self.tri_deg
            tri[u] -= t
            tri[v] -= t
            for w in common:
                tri[w] -= 1
        for cb in self._watchers:
            cb(u, self.deg[u])
            cb(v, self.deg[v])
        return UpdateDelta(-d_gamma, -(d_gamma - 3 * t), -t)

    # -- statistics ------------------------------------------------------
    def wedge_stats(self) -> WedgeStats:
        return WedgeStats(self.gamma, self.gamma_open, 3 * self.triangles, self.triangles)

    def vertex_stats(self, v: int) -> VertexStats:
        self._check_vertex(v)
        counts = self.two_hop_counts(v)
        return VertexStats(
            d=self.deg[v],
            gamma_v=sum(counts.values()),
            D=self.tri_deg[v],
            zeta2=sum(c * c for c in counts.values()),
        )

    def two_hop_counts(self, v: int) -> dict[int, int]:
        """Map u -> d(u, v) for every u != v with a common neighbour."""
        counts: dict[int, int] = {}
        get = counts.get
        for w in self._nbrs[v]:
            for u in self._nbrs[w]:
                if u != v:
                    counts[u] = get(u, 0) + 1
        return counts

    def wedge_endpoint_counts(self) -> np.ndarray:
        """Gamma(v) for every vertex: sum over neighbours w of (d(w) - 1)."""
        deg = self.degree_array()
        if self.m == 0:
            return np.zeros(self.n, dtype=np.int64)
        eu, ev = self.edge_arrays()
        s = np.bincount(eu, weights=deg[ev], minlength=self.n)
        s += np.bincount(ev, weights=deg[eu], minlength=self.n)
        return s.astype(np.int64) - deg

    def zeta2_counts(self) -> np.ndarray:
        out = np.zeros(self.n, dtype=np.int64)
        for v in range(self.n):
            if self.deg[v]:
                out[v] = sum(c * c for c in self.two_hop_counts(v).values())
        return out

    def induced_density(self, vertices: Iterable[int]) -> tuple[Fraction, Fraction]:
        """(edges/|S|, triangles/|S|) of the subgraph induced by ``vertices``."""
        s = set(vertices)
        if not s:
            raise GraphError("density of an empty vertex set is undefined")
        for v in s:
            self._check_vertex(v)
        edges = 0
        tri = 0
        for v in s:
            nv = [w for w in self._nbrs[v] if w in s]
            edges += len(nv)
            for w in nv:
                if w > v:
                    pw = self._pos[w]
                    tri += sum(1 for x in nv if x > w and x in pw)
        return Fraction(edges // 2, len(s)), Fraction(tri, len(s))

    def audit(self) -> AuditReport:
        """Recount every maintained counter from the adjacency alone."""
        bad: list[str] = []
        deg = [len(p) for p in self._pos]
        if deg != self.deg:
            bad.append("degree")
        for v in range(self.n):
            if v in self._pos[v]:
                bad.append(f"self-loop at {v}")
            if set(self._nbrs[v]) != set(self._pos[v]) or len(self._nbrs[v]) != len(self._pos[v]):
                bad.append(f"neighbour list of {v}")
            for u, i in self._pos[v].items():
                if self._nbrs[v][i] != u:
                    bad.append(f"slot of {u} in N({v})")
                if v not in self._pos[u]:
                    bad.append(f"asymmetric edge ({v}, {u})")
        m = sum(deg) // 2
        if m != self.m or sum(deg) % 2:
            bad.append("edge count")
        slab = {(u, v) for u, v in zip(self._eu, self._ev)}
        if len(slab) != self.m or any(v not in self._pos[u] for u, v in slab):
            bad.append("edge slab")
        gamma = sum(d * (d - 1) // 2 for d in deg)
        if gamma != self.gamma:
            bad.append(f"gamma {self.gamma} != {gamma}")
        tri_deg = [0] * self.n
        for v in range(self.n):
            nv = self._pos[v]
            for w in nv:
                if w > v:
                    for x in self._pos[w]:
                        if x > w and x in nv:
                            tri_deg[v] += 1
                            tri_deg[w] += 1
                            tri_deg[x] += 1
        tri = sum(tri_deg) // 3
        if tri != self.triangles:
            bad.append(f"triangles {self.triangles} != {tri}")
        if tri_deg != self.tri_deg:
            bad.append("tri-degree")
        if self.gamma_open != gamma - 3 * tri:
            bad.append("open wedges")
        return AuditReport(not bad, bad)

    def __repr__(self) -> str:
        return f"DynamicGraph(n={self.n}, m={self.m}, gamma={self.gamma}, triangles={self.triangles})"


def audit_recompute(g: DynamicGraph) -> AuditReport:
    return g.audit()
