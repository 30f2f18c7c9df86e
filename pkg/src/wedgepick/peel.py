"""Peeling layers for approximate densest subgraphs, kept up to date under edge batches.

For a density guess ``beta`` the layers are S_0 = V and S_{r+1} = the
vertices of S_r whose induced degree in S_r is at least 2 beta (1 + eps).
Every vertex carries its level, the index of the last layer containing it;
vertices that survive every round form the core and get the sentinel level
``TOP``.  Levels are the unique fixed point of

    L(v) = min(TOP, kth(v) + 1)    (0 when v has fewer than T supports)

where kth(v) is the T-th largest neighbour level and T the integer
threshold.  A batch is repaired by replaying the peeling rounds and
re-deciding only the vertices whose supports or neighbourhood membership
changed.
The same engine handles tri-densest peeling with triangle supports
min(L(a), L(b)) for every triangle (v, a, b).

The density guess lives on a geometric grid.  Two engines are kept: one at
the current guess (its core is the reported candidate) and one at the next
grid value.  A nonempty upper core moves the pair up the grid, an empty
lower core moves it down, one engine build per step.  A candidate density
outside [beta, 2 beta (1+eps)^2] (impossible while both cores behave)
triggers a full grid search.
"""

from __future__ import annotations

import hashlib
import heapq
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import numpy as np

from .events import ADD, EdgeEvent, format_event
from .graph import DynamicGraph
from .learn import DEFAULT_FIT_THRESHOLD, LearnedParams, LearningError, learn
from .schedule import DEFAULT_MAX_BATCH, rest_window, tri_rest_window
from .sim import ModelParams

DENSEST = "densest"
TRIDENSEST = "tridensest"
_TOL = 1e-9
# a densest repair touching more than this share of V rebuilds with numpy instead
REBUILD_SHARE = 1 / 32
REBUILD_MIN = 64


def int_threshold(thr: float) -> int:
    """Smallest integer support count meeting a real threshold (ties stay)."""
    return max(0, math.ceil(thr - _TOL))


# -- static peeling -----------------------------------------------------------


@dataclass
class PeelResult:
    levels: dict[int, int]
    rounds: int
    core: frozenset[int]
    threshold: float

    @property
    def survived(self) -> bool:
        return bool(self.core)

    def layer(self, r: int) -> set[int]:
        return {v for v, lv in self.levels.items() if lv >= r}

    def layers(self) -> list[set[int]]:
        """S_0, S_1, ..., ending with the core (or the empty set)."""
        out = [self.layer(r) for r in range(self.rounds + 1)]
        if out[-1] and self.core != out[-1]:
            out.append(set(self.core))
        return out


def _triangles_at(g: DynamicGraph, v: int, alive) -> Iterable[tuple[int, int]]:
    nv = g.neighbors(v)
    for a in g.neighbor_list(v):
        if a not in alive:
            continue
        na = g.neighbors(a)
        small, big = (na, nv) if len(na) < len(nv) else (nv, na)
        for b in small:
            if b > a and b in big and b in alive:
                yield a, b


def _static_levels(g: DynamicGraph, S0: Iterable[int], T: int, kind: str) -> tuple[dict[int, int], int, set[int]]:
    alive = set(S0)
    if kind == DENSEST:
        sup = {v: sum(1 for w in g.neighbor_list(v) if w in alive) for v in alive}
    else:
        sup = {v: sum(1 for _ in _triangles_at(g, v, alive)) for v in alive}
    levels: dict[int, int] = {}
    frontier = sorted(v for v in alive if sup[v] < T)
    r = 0
    while frontier:
        for v in frontier:
            levels[v] = r
        for v in frontier:
            if kind == DENSEST:
                alive.discard(v)
                for w in g.neighbor_list(v):
                    if w in alive:
                        sup[w] -= 1
            else:
                for a, b in _triangles_at(g, v, alive):
                    sup[a] -= 1
                    sup[b] -= 1
                alive.discard(v)
        # only neighbours of removed vertices can have dropped below T
        cand = set()
        for v in frontier:
            for w in g.neighbor_list(v):
                if w in alive and sup[w] < T:
                    cand.add(w)
        frontier = sorted(cand)
        r += 1
    return levels, r, alive


def _csr(g: DynamicGraph) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    eu, ev = g.edge_arrays()
    src = np.concatenate([eu, ev])
    dst = np.concatenate([ev, eu])
    order = np.argsort(src, kind="stable")
    counts = np.bincount(src, minlength=g.n)
    indptr = np.zeros(g.n + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])
    return indptr, dst[order], eu, ev


def _array_levels(g: DynamicGraph, T: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Densest peeling of all of V with numpy: (levels, core mask, core edge count)."""
    n = g.n
    indptr, adj, eu, ev = _csr(g)
    sup = np.diff(indptr)
    alive = np.ones(n, dtype=bool)
    level = np.zeros(n, dtype=np.int64)
    frontier = np.nonzero(sup < T)[0]
    r = 0
    while frontier.size:
        level[frontier] = r
        alive[frontier] = False
        starts = indptr[frontier]
        cnt = indptr[frontier + 1] - starts
        total = int(cnt.sum())
        if total:
            offs = np.repeat(starts - (np.cumsum(cnt) - cnt), cnt) + np.arange(total)
            nb = adj[offs]
            nb = nb[alive[nb]]
            sup = sup - np.bincount(nb, minlength=n)
            cand = np.unique(nb)
            frontier = cand[sup[cand] < T]
        else:
            frontier = frontier[:0]
        r += 1
    core_edges = int(np.count_nonzero(alive[eu] & alive[ev])) if len(eu) else 0
    return level, alive, core_edges


def static_peel(g: DynamicGraph, S0: Iterable[int], beta: float, eps: float) -> PeelResult:
    """Peel ``S0`` at threshold 2 beta (1 + eps) until empty or a fixed point."""
    if beta <= 0 or eps < 0:
        raise ValueError("need beta > 0 and eps >= 0")
    thr = 2 * beta * (1 + eps)
    levels, rounds, core = _static_levels(g, S0, int_threshold(thr), DENSEST)
    top = rounds
    for v in core:
        levels[v] = top
    return PeelResult(levels, rounds, frozenset(core), thr)


# -- level engine -----------------------------------------------------------------


class LevelEngine:
    """Peeling levels of all vertices at one integer threshold, repairable in place."""

    def __init__(self, g: DynamicGraph, T: int, kind: str = DENSEST):
        self.g = g
        self.T = T
        self.kind = kind
        self.TOP = g.n + 1
        self.level: list[int] = [0] * g.n
        self.core: set[int] = set()
        self.core_edges = 0  # maintained for densest engines only
        self.build()

    # construction
    def build(self) -> None:
        g = self.g
        if self.kind == DENSEST:
            level, alive, core_edges = _array_levels(g, self.T)
            level[alive] = self.TOP
            self.level = level.tolist()
            self.hist = Counter(self.level)
            self.core = set(np.nonzero(alive)[0].tolist())
            self.core_edges = core_edges
            return
        levels, _, core = _static_levels(g, range(g.n), self.T, self.kind)
        lv = [0] * g.n
        for v, r in levels.items():
            lv[v] = r
        for v in core:
            lv[v] = self.TOP
        self.level = lv
        self.hist = Counter(lv)
        self.core = set(core)

    # supports
    def supports(self, v: int) -> list[int]:
        lv = self.level
        if self.kind == DENSEST:
            return [lv[w] for w in self.g.neighbor_list(v)]
        out = []
        for a, b in _triangles_at(self.g, v, _ALL):
            la, lb = lv[a], lv[b]
            out.append(la if la < lb else lb)
        return out

    def target(self, v: int) -> int:
        T = self.T
        if T <= 0:
            return self.TOP
        sup = self.supports(v)
        if len(sup) < T:
            return 0
        kth = heapq.nlargest(T, sup)[-1] if T > 1 else max(sup)
        return min(self.TOP, kth + 1)

    def _set_level(self, v: int, new: int) -> None:
        old = self.level[v]
        self.level[v] = new
        self.hist[old] -= 1
        self.hist[new] += 1
        if old == self.TOP and new != self.TOP:
            self.core.discard(v)
            if self.kind == DENSEST:
                self.core_edges -= sum(1 for w in self.g.neighbor_list(v) if w in self.core)
        elif new == self.TOP and old != self.TOP:
            if self.kind == DENSEST:
                self.core_edges += sum(1 for w in self.g.neighbor_list(v) if w in self.core)
            self.core.add(v)

    def note_edges(self, changes: Iterable[tuple[int, int, str]]) -> None:
        """Account for net edge changes already applied to the graph (before repair)."""
        if self.kind != DENSEST:
            return
        core = self.core
        for u, v, op in changes:
            if u in core and v in core:
                self.core_edges += 1 if op == ADD else -1

    def _dependents(self, v: int) -> list[int]:
        return self.g.neighbor_list(v)

    def _alive_support(self, w: int, r: int) -> int:
        """Supports of ``w`` inside layer r of the working levels."""
        lv = self.level
        if self.kind == DENSEST:
            return sum(map(r.__le__, map(lv.__getitem__, self.g.neighbor_list(w))))
        return sum(1 for a, b in _triangles_at(self.g, w, _ALL) if lv[a] >= r and lv[b] >= r)

    def repair(self, dirty: Iterable[int]) -> int:
        """Restore the fixed point after the supports of ``dirty`` changed; returns level changes.

        Replays the synchronous peeling rounds against the stored levels.  At
        round r a vertex can only decide differently from the stored run if
        its own supports changed (``dirty``) or a dependent's membership of
        layer r differs from the stored run (the set ``diff``).  Past the
        largest stored finite level a round with no removals is a fixed point
        and every vertex still alive is in the core.
        """
        dirty = set(dirty)
        if self.kind == DENSEST and len(dirty) > max(REBUILD_MIN, self.g.n * REBUILD_SHARE):
            before = self.level
            self.build()
            return sum(1 for a, b in zip(before, self.level) if a != b)
        TOP, T = self.TOP, self.T
        if T <= 0 or not dirty:
            return 0
        finite = [k for k, c in self.hist.items() if c and k != TOP]
        r_old = max(finite) if finite else -1
        # working levels are written in place; ``orig`` keeps the stored ones
        lv = self.level
        orig: dict[int, int] = {}
        diff: set[int] = set()
        r = 0
        while True:
            diff = {x for x in diff if (lv[x] >= r) != (orig[x] >= r)}
            check = {x for x in dirty if lv[x] >= r}
            for x in diff:
                if lv[x] >= r:
                    check.add(x)
                check.update(y for y in self._dependents(x) if lv[y] >= r)
            die, stay = [], []
            for w in check:
                (stay if self._alive_support(w, r) >= T else die).append(w)
            for w in die:
                if lv[w] > r:
                    orig.setdefault(w, lv[w])
                    lv[w] = r
                    diff.add(w)
            for w in stay:
                if lv[w] == r:
                    orig.setdefault(w, lv[w])
                    lv[w] = TOP
                    diff.add(w)
            if r > r_old and not die:
                break
            if not check and not diff:
                break
            r += 1
        moves = 0
        for x, old in orig.items():
            new = lv[x]
            if new != old:
                lv[x] = old
                self._set_level(x, new)
                moves += 1
        return moves

    def core_density(self) -> Fraction:
        if not self.core:
            return Fraction(0)
        if self.kind == DENSEST:
            return Fraction(self.core_edges, len(self.core))
        return self.g.induced_density(self.core)[1]

    def audit(self) -> bool:
        fresh = LevelEngine(self.g, self.T, self.kind)
        return fresh.level == self.level and fresh.core == self.core and fresh.core_edges == self.core_edges


class _Everything:
    def __contains__(self, _):
        return True


_ALL = _Everything()


# -- grid search and the maintained structure ------------------------------------------


def densest_grid(n: int, eps: float) -> list[float]:
    grid = [0.5]
    i = 0
    while (1 + eps) ** i <= n:
        grid.append((1 + eps) ** i)
        i += 1
    return grid


def tri_grid(n: int, eps: float) -> list[float]:
    """Guesses whose thresholds 3 alpha (1+eps) run through (1+eps)^i up to the largest tri-degree possible."""
    max_tri = (n - 1) * (n - 2) / 2
    grid = []
    i = 0
    while (1 + eps) ** i <= max(max_tri, 1):
        grid.append((1 + eps) ** i / (3 * (1 + eps)))
        i += 1
    return grid


def _factor(kind: str) -> int:
    return 2 if kind == DENSEST else 3


def survives(g: DynamicGraph, guess: float, eps: float, kind: str) -> bool:
    T = int_threshold(_factor(kind) * guess * (1 + eps))
    if kind == DENSEST:
        return bool(_array_levels(g, T)[1].any())
    _, _, core = _static_levels(g, range(g.n), T, kind)
    return bool(core)


def search_grid(g: DynamicGraph, grid: Sequence[float], eps: float, kind: str) -> int:
    """Index of the largest surviving grid value (-1 if none); survival is monotone."""
    lo, hi = -1, len(grid) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if survives(g, grid[mid], eps, kind):
            lo = mid
        else:
            hi = mid - 1
    return lo


class LayerDecomposition:
    """Maintained peeling structure for one density notion at the current grid guess."""

    def __init__(self, g: DynamicGraph, eps: float, kind: str = DENSEST):
        if eps <= 0:
            raise ValueError("eps must be positive")
        self.g = g
        self.eps = eps
        self.kind = kind
        self.grid = densest_grid(g.n, eps) if kind == DENSEST else tri_grid(g.n, eps)
        self.k = max(1, math.ceil(math.log(max(g.n, 2)) / math.log(1 + eps)))
        self.rebuilds = 0
        self.index = -1
        self.lower: LevelEngine | None = None
        self.upper: LevelEngine | None = None
        self.last_stale = 0.0
        self._held_edge: tuple[int, int] | None = None
        self.rebuild()
        self.rebuilds = 0
        self._held_edge = self._fallback_edge if self.lower is None else None

    # state
    def _engine(self, i: int) -> LevelEngine | None:
        if i < 0:
            return None
        if i >= len(self.grid):
            return None
        T = int_threshold(_factor(self.kind) * self.grid[i] * (1 + self.eps))
        return LevelEngine(self.g, T, self.kind)

    def rebuild(self) -> None:
        self.rebuilds += 1
        self.index = search_grid(self.g, self.grid, self.eps, self.kind)
        self.lower = self._engine(self.index)
        self.upper = self._engine(self.index + 1)

    @property
    def _fallback_edge(self) -> tuple[int, int] | None:
        """Without any core the candidate is the smallest edge (density 1/2)."""
        if self.kind != DENSEST or self.index >= 0 or self.g.m == 0:
            return None
        g = self.g
        for v in range(g.n):
            nb = g.neighbor_list(v)
            if nb:
                return (v, min(nb))
        return None

    @property
    def beta(self) -> float:
        if self.index >= 0:
            return self.grid[self.index]
        if self.kind == DENSEST and self._fallback_edge is not None:
            return 0.5
        return 0.0

    @property
    def threshold(self) -> float:
        return _factor(self.kind) * self.beta * (1 + self.eps)

    @property
    def level(self) -> list[int]:
        return self.lower.level if self.lower is not None else [0] * self.g.n

    @property
    def candidate(self) -> frozenset[int]:
        if self.lower is not None:
            return frozenset(self.lower.core)
        if self._fallback_edge is not None:
            return frozenset(self._fallback_edge)
        return frozenset()

    @property
    def candidate_density(self) -> Fraction:
        if self.lower is not None:
            return self.lower.core_density()
        if self._fallback_edge is not None:
            return Fraction(1, 2)
        return Fraction(0)

    @property
    def fallback(self) -> bool:
        return self.index < 0

    def needs_rebuild(self) -> bool:
        if self.upper is not None and self.upper.core:
            return True
        if self.lower is None:
            return False
        if not self.lower.core:
            return True
        rho = self.candidate_density
        beta = self.beta
        return not (beta - _TOL <= rho <= _factor(self.kind) * beta * (1 + self.eps) ** 2 + _TOL)

    # updates
    def dirty_set(self, touched: Iterable[int], changes: Sequence[tuple[int, int, str]]) -> set[int]:
        dirty = set(touched)
        if self.kind == TRIDENSEST:
            g = self.g
            for u, v, _ in changes:
                dirty.update(g.common_neighbors(u, v))
        return dirty

    def apply_batch(self, touched: Iterable[int], changes: Sequence[tuple[int, int, str]] = ()) -> bool:
        """Repair after ``changes`` (already applied to the graph); returns True if a rebuild ran."""
        dirty = self.dirty_set(touched, changes)
        if self.lower is not None:
            self.lower.note_edges(changes)
        self.last_stale = self._stale_density()
        if dirty:
            if self.lower is not None:
                self.lower.repair(dirty)
            if self.upper is not None:
                self.upper.note_edges(changes)
                self.upper.repair(dirty)
            rebuilt = self.settle()
        else:
            rebuilt = False
        self._held_edge = self._fallback_edge if self.lower is None else None
        return rebuilt

    def _stale_density(self) -> float:
        """Density of the candidate held before the batch, measured on the current graph."""
        if self.lower is None:
            edge = self._held_edge
            return 0.5 if edge is not None and self.g.has_edge(*edge) else 0.0
        if self.kind == DENSEST:
            return float(self.lower.core_density())
        if not self.lower.core:
            return 0.0
        return float(self.g.induced_density(self.lower.core)[1])

    def settle(self) -> bool:
        """Move along the grid until the upper core is empty and the lower one is not."""
        moved = False
        while self.upper is not None and self.upper.core:
            self.rebuilds += 1
            moved = True
            self.index += 1
            self.lower = self.upper
            self.upper = self._engine(self.index + 1)
        while self.lower is not None and not self.lower.core:
            self.rebuilds += 1
            moved = True
            self.index -= 1
            self.upper = self.lower
            self.lower = self._engine(self.index)
        if self.needs_rebuild():
            self.rebuild()
            return True
        return moved

    def audit(self) -> bool:
        """Levels match a from-scratch rebuild at the current guess."""
        return all(e is None or e.audit() for e in (self.lower, self.upper))


def grid_search(g: DynamicGraph, eps: float) -> tuple[float, LayerDecomposition]:
    ld = LayerDecomposition(g, eps, DENSEST)
    return ld.beta, ld


# -- rest and run ------------------------------------------------------------------


@dataclass
class DensityReport:
    round: int
    delta: int
    events: int
    touched: int
    density: float
    stale_density: float
    beta: float
    rebuilds: int
    wall_time_us: int
    cursor: int
    fallback: bool = False
    oracle_density: float | None = None

    def as_row(self) -> dict[str, object]:
        return {
            "round": self.round,
            "delta": self.delta,
            "events": self.events,
            "touched": self.touched,
            "density": self.density,
            "stale_density": self.stale_density,
            "oracle_density": "" if self.oracle_density is None else self.oracle_density,
            "beta": self.beta,
            "rebuilds": self.rebuilds,
            "wall_time_us": self.wall_time_us,
            "cursor": self.cursor,
            "fallback": int(self.fallback),
        }


@dataclass
class RunResult:
    reports: list[DensityReport]
    structure: LayerDecomposition
    graph: DynamicGraph
    learned: LearnedParams | None = None
    params: ModelParams | None = None
    engine_time_us: int = 0
    total_time_us: int = 0
    learn_time_us: int = 0
    digest: str = ""
    notes: list[str] = field(default_factory=list)

    @property
    def batched(self) -> bool:
        return not any(r.fallback for r in self.reports[1:])


def _candidate_value(g: DynamicGraph, cand: Iterable[int], kind: str) -> float:
    cand = list(cand)
    if not cand:
        return 0.0
    rho, xi = g.induced_density(cand)
    return float(rho if kind == DENSEST else xi)


def _net_changes(batch: Sequence[EdgeEvent]) -> tuple[set[int], list[tuple[int, int, str]]]:
    touched: set[int] = set()
    net: dict[tuple[int, int], str] = {}
    for e in batch:
        touched.add(e.u)
        touched.add(e.v)
        key = (e.u, e.v) if e.u < e.v else (e.v, e.u)
        if key in net and net[key] != e.op:
            del net[key]
        else:
            net[key] = e.op
    return touched, [(u, v, op) for (u, v), op in sorted(net.items())]


def _apply(g: DynamicGraph, e: EdgeEvent) -> None:
    if e.op == ADD:
        g.add_edge(e.u, e.v)
    else:
        g.remove_edge(e.u, e.v)


def _window_length(g: DynamicGraph, params: ModelParams, ld: LayerDecomposition, eps: float, max_batch: int) -> int:
    if ld.kind == DENSEST:
        beta = ld.beta if ld.beta > 0 else ld.grid[0]
        return rest_window(g, params, beta, eps, max_batch).delta
    alpha = ld.beta if ld.beta > 0 else ld.grid[0]
    return tri_rest_window(g, params, alpha, eps, max_batch).delta


def run_stream(
    g0: DynamicGraph,
    events: Sequence[EdgeEvent],
    eps: float,
    kind: str = DENSEST,
    c: float = DEFAULT_FIT_THRESHOLD,
    params: ModelParams | None = None,
    learn_events: int | None = None,
    learn_eps: float | None = None,
    learn_kwargs: dict | None = None,
    t_start: int | None = None,
    clock: str = "time",
    max_batch: int = DEFAULT_MAX_BATCH,
    per_event: bool = False,
    oracle: Callable[[DynamicGraph], float] | None = None,
    oracle_every: int = 1,
) -> RunResult:
    """Process ``events`` from ``g0`` (left untouched) in rest-and-run batches.

    Parameters are learned on the first ``learn_events`` events unless
    ``params`` is given.  A rejected fit (R^2 < c) or ``per_event`` switches
    to repairing after every event.  ``clock`` picks the axis rest windows
    are measured on: event timestamps (``"time"``) or event count.
    """
    if clock not in ("time", "count"):
        raise ValueError("clock must be 'time' or 'count'")
    t_total = time.perf_counter_ns()
    g = g0.copy()
    notes: list[str] = []
    engine_ns = 0

    t = time.perf_counter_ns()
    ld = LayerDecomposition(g, eps, kind)
    engine_ns += time.perf_counter_ns() - t

    def stamp(i: int) -> int:
        return events[i].t if clock == "time" else i + 1

    if t_start is None:
        t_start = (stamp(0) - 1) if events else 0

    learned = None
    learn_ns = 0
    if not per_event and params is None:
        t = time.perf_counter_ns()
        prefix = events[: learn_events if learn_events is not None else g0.m]
        try:
            learned, _, _ = learn(
                g0,
                prefix,
                eps=learn_eps if learn_eps is not None else eps,
                c=c,
                clock_start=t_start if clock == "time" else 0,
                **(learn_kwargs or {}),
            )
            params = learned.params
            if not learned.accepted:
                per_event = True
                notes.append(f"model rejected: R2={learned.R2:.3f} < c={c}")
        except LearningError as exc:
            per_event = True
            notes.append(f"learning failed: {exc}")
        learn_ns = time.perf_counter_ns() - t
    if params is None:
        per_event = True

    reports = [
        DensityReport(
            round=0,
            delta=0,
            events=0,
            touched=0,
            density=float(ld.candidate_density),
            stale_density=float(ld.candidate_density),
            beta=ld.beta,
            rebuilds=0,
            wall_time_us=engine_ns // 1000,
            cursor=0,
            fallback=per_event,
            oracle_density=oracle(g) if oracle and g.m else None,
        )
    ]
    idx = 0
    rnd = 0
    t0 = t_start
    consumed = hashlib.sha256()
    while idx < len(events):
        window_ns = 0
        if per_event:
            delta = 1
            j = idx + 1
        else:
            t = time.perf_counter_ns()
            delta = _window_length(g, params, ld, eps, max_batch)
            window_ns = time.perf_counter_ns() - t
            engine_ns += window_ns
            nxt = stamp(idx)
            if nxt > t0 + delta:
                # nothing arrives in this window: the graph is unchanged, so skip whole windows
                t0 += delta * ((nxt - 1 - t0) // delta)
            end = t0 + delta
            j = idx
            while j < len(events) and stamp(j) <= end:
                j += 1
            t0 = end
        batch = events[idx:j]
        for e in batch:
            _apply(g, e)
            consumed.update(f"{format_event(e)}\n".encode())
        touched, changes = _net_changes(batch)
        before = ld.rebuilds
        t = time.perf_counter_ns()
        ld.apply_batch(touched, changes)
        spent = time.perf_counter_ns() - t
        engine_ns += spent
        idx = j
        rnd += 1
        want_oracle = oracle is not None and g.m and (rnd % oracle_every == 0 or idx == len(events))
        reports.append(
            DensityReport(
                round=rnd,
                delta=delta,
                events=len(batch),
                touched=len(touched),
                density=float(ld.candidate_density),
                stale_density=ld.last_stale,
                beta=ld.beta,
                rebuilds=ld.rebuilds - before,
                wall_time_us=(spent + window_ns) // 1000,
                cursor=idx,
                fallback=per_event,
                oracle_density=oracle(g) if want_oracle else None,
            )
        )
    return RunResult(
        reports=reports,
        structure=ld,
        graph=g,
        learned=learned,
        params=params,
        engine_time_us=engine_ns // 1000,
        total_time_us=(time.perf_counter_ns() - t_total) // 1000,
        learn_time_us=learn_ns // 1000,
        digest=consumed.hexdigest(),
        notes=notes,
    )


def rest_and_run(g0: DynamicGraph, events: Sequence[EdgeEvent], eps: float, c: float = DEFAULT_FIT_THRESHOLD, **kw) -> RunResult:
    return run_stream(g0, events, eps, kind=DENSEST, c=c, **kw)


def per_event_run(g0: DynamicGraph, events: Sequence[EdgeEvent], eps: float, kind: str = DENSEST, **kw) -> RunResult:
    """Baseline: repair after every single event."""
    return run_stream(g0, events, eps, kind=kind, per_event=True, **kw)
