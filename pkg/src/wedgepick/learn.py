"""Learning the wedge picking parameters from an observed edge stream.

The learner snapshots, at window start, how many disconnected pairs share
``x`` common neighbours (``N0(x)``), replays the stream while the open-wedge
fraction and the populated ``N(x)`` buckets stay within a ``(1+eps)`` band,
and records how many of those pairs ended the window connected (``f(x)``).
A straight line through ``f(x)/N0(x)`` against ``x`` gives slope ``a`` and
intercept ``b``; these are inverted to the wedge-closing probability ``p``
and the uniform-addition probability ``r``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .events import ADD, EdgeEvent
from .graph import DynamicGraph
from .sim import ModelParams

DEFAULT_TOP_BUCKETS = 16
DEFAULT_SUPPORT_FLOOR = 5
DEFAULT_FIT_THRESHOLD = 0.6
# buckets smaller than this swing by more than (1+eps) on a single event
DEFAULT_MONITOR_FLOOR = 1000


class LearningError(ValueError):
    pass


@dataclass
class WindowStats:
    f: dict[int, int]
    N0: dict[int, int]
    A: int
    Ddel: int
    gamma0: int
    gamma_open0: int
    m0: int
    n: int
    window_len: int
    clock_start: int = 0
    clock_end: int = 0
    stop_reason: str = "exhausted"

    @property
    def clock_span(self) -> int:
        return self.clock_end - self.clock_start

    @property
    def pairs(self) -> int:
        return self.n * (self.n - 1) // 2


@dataclass(frozen=True)
class RegressionFit:
    a: float
    b: float
    R2: float
    support: int
    xs: tuple[int, ...] = ()
    ys: tuple[float, ...] = ()


@dataclass
class LearnedParams:
    p: float
    r: float
    q: float
    q_ratio: float
    M: float
    R2: float
    accepted: bool
    window_len: int
    normalization: str = "clock"
    raw: dict = field(default_factory=dict)

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.p, self.q, self.r)

    def to_record(self) -> dict[str, object]:
        return {
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "R2": self.R2,
            "M": self.M,
            "window_len": self.window_len,
            "accepted": self.accepted,
        }


def distance_two_pairs(g: DynamicGraph) -> dict[tuple[int, int], int]:
    """Every non-adjacent pair (u < v) with d(u, v) >= 1, mapped to d(u, v)."""
    out: dict[tuple[int, int], int] = {}
    for u in range(g.n):
        nu = g.neighbors(u)
        if not nu:
            continue
        counts: dict[int, int] = {}
        get = counts.get
        for w in g.neighbor_list(u):
            for v in g.neighbor_list(w):
                if v > u:
                    counts[v] = get(v, 0) + 1
        for v, c in counts.items():
            if v not in nu:
                out[(u, v)] = c
    return out


def bucket_counts(g: DynamicGraph, pairs: dict[tuple[int, int], int] | None = None) -> dict[int, int]:
    """N(x): number of disconnected pairs with exactly x common neighbours."""
    if pairs is None:
        pairs = distance_two_pairs(g)
    hist: dict[int, int] = {}
    for x in pairs.values():
        hist[x] = hist.get(x, 0) + 1
    hist[0] = g.n * (g.n - 1) // 2 - g.m - len(pairs)
    return hist


class _BucketTracker:
    """Keeps N_t(x) exact while the window graph changes."""

    def __init__(self, g: DynamicGraph, hist: dict[int, int]):
        self.g = g
        self.hist = dict(hist)

    def _move(self, x_from: int, x_to: int) -> None:
        h = self.hist
        h[x_from] = h.get(x_from, 0) - 1
        h[x_to] = h.get(x_to, 0) + 1

    def before_add(self, u: int, v: int) -> None:
        g = self.g
        x = g.common_degree(u, v)
        self.hist[x] = self.hist.get(x, 0) - 1
        # after insertion v is a new common neighbour of u and each w in N(v), and vice versa
        for a, b in ((u, v), (v, u)):
            nb = g.neighbors(a)
            for w in g.neighbor_list(b):
                if w != a and w not in nb:
                    x = g.common_degree(a, w)
                    self._move(x, x + 1)

    def after_remove(self, u: int, v: int) -> None:
        g = self.g
        x = g.common_degree(u, v)
        self.hist[x] = self.hist.get(x, 0) + 1
        for a, b in ((u, v), (v, u)):
            nb = g.neighbors(a)
            for w in g.neighbor_list(b):
                if w != a and w not in nb:
                    x = g.common_degree(a, w)
                    self._move(x + 1, x)


def _within(value: float, ref: float, eps: float) -> bool:
    if ref == 0:
        return value == 0
    return ref / (1 + eps) <= value <= ref * (1 + eps)


def collect_window(
    g: DynamicGraph,
    events: Sequence[EdgeEvent],
    eps: float,
    top_buckets: int = DEFAULT_TOP_BUCKETS,
    clock_start: int | None = None,
    monitor_floor: int = DEFAULT_MONITOR_FLOOR,
) -> WindowStats:
    """Replay ``events`` from window-start graph ``g`` (left untouched)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    pairs = distance_two_pairs(g)
    N0 = bucket_counts(g, pairs)
    if clock_start is None:
        clock_start = events[0].t - 1 if events else 0
    stats = WindowStats(
        f={},
        N0=N0,
        A=0,
        Ddel=0,
        gamma0=g.gamma,
        gamma_open0=g.gamma_open,
        m0=g.m,
        n=g.n,
        window_len=0,
        clock_start=clock_start,
        clock_end=clock_start,
    )
    if not events:
        return stats

    work = g.copy()
    tracker = _BucketTracker(work, N0)
    ratio0 = g.gamma_open / g.gamma if g.gamma else 0.0
    monitored = [x for x, c in sorted(N0.items(), key=lambda kv: (-kv[1], kv[0])) if c >= monitor_floor][:top_buckets]
    cap = g.m
    added: set[tuple[int, int]] = set()
    removed: set[tuple[int, int]] = set()
    reason = "exhausted"
    for e in events:
        if stats.window_len >= cap:
            reason = "edge-cap"
            break
        key = (e.u, e.v) if e.u < e.v else (e.v, e.u)
        if e.op == ADD:
            tracker.before_add(e.u, e.v)
            work.add_edge(e.u, e.v)
            if key in removed:
                removed.discard(key)
            else:
                added.add(key)
        else:
            work.remove_edge(e.u, e.v)
            tracker.after_remove(e.u, e.v)
            if key in added:
                added.discard(key)
            else:
                removed.add(key)
        stats.window_len += 1
        stats.clock_end = e.t
        ratio = work.gamma_open / work.gamma if work.gamma else 0.0
        if not _within(ratio, ratio0, eps):
            reason = "wedge-drift"
            break
        if any(not _within(tracker.hist.get(x, 0), N0[x], eps) for x in monitored):
            reason = "bucket-drift"
            break
    stats.stop_reason = reason
    f: dict[int, int] = {}
    for key in added:
        x = pairs.get(key, 0)
        f[x] = f.get(x, 0) + 1
    stats.f = f
    stats.A = len(added)
    stats.Ddel = len(removed)
    return stats


def fit_line(stats: WindowStats, min_support: int = DEFAULT_SUPPORT_FLOOR) -> RegressionFit:
    """Unweighted least squares of f(x)/N0(x) on x over buckets with N0(x) >= min_support."""
    xs = sorted(x for x, c in stats.N0.items() if c >= min_support)
    if len(xs) < 2:
        raise LearningError(
            f"need at least 2 buckets with N0(x) >= {min_support}; have {len(xs)} (buckets: {dict(sorted(stats.N0.items()))})"
        )
    x = np.array(xs, dtype=float)
    y = np.array([stats.f.get(k, 0) / stats.N0[k] for k in xs], dtype=float)
    return _ols(x, y)


def _ols(x: np.ndarray, y: np.ndarray) -> RegressionFit:
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    sxy = float(((x - xm) * (y - ym)).sum())
    syy = float(((y - ym) ** 2).sum())
    a = sxy / sxx
    b = float(ym - a * xm)
    if syy <= 1e-300:
        return RegressionFit(0.0 if abs(a) < 1e-15 else a, b, 0.0, len(x), tuple(int(v) for v in x), tuple(y))
    r2 = min(1.0, max(0.0, sxy * sxy / (sxx * syy)))
    return RegressionFit(a, b, r2, len(x), tuple(int(v) for v in x), tuple(y))


def normalization_literal(a: float, b: float, stats: WindowStats) -> float:
    """Square-root normalisation from reading the definition of M literally."""
    return math.sqrt((a * stats.gamma_open0 + b * (stats.pairs - stats.m0)) / stats.A)


def normalization_clock(stats: WindowStats) -> float:
    """Expected number of coin flips landing on each rule over the window."""
    return stats.clock_span / 2.0


def q_bound(stats: WindowStats) -> float:
    """Lower bound on p/q from additions, deletions and the open-wedge fraction."""
    if stats.gamma_open0 == 0:
        raise LearningError("no open wedges at window start; bound undefined")
    if stats.Ddel == 0:
        return math.inf
    return (stats.A / stats.Ddel) * (stats.gamma0 / stats.gamma_open0) * (stats.m0 / stats.pairs)


def invert_params(
    fit: RegressionFit,
    stats: WindowStats,
    c: float = DEFAULT_FIT_THRESHOLD,
    normalization: str = "clock",
) -> LearnedParams:
    """Solve a = p*M/Gamma0 and b = r*M/C(n,2) for p and r.

    ``normalization`` picks M: ``"clock"`` uses half the window's clock span
    (the expected number of draws of each rule), ``"literal"`` uses the
    square-root closed form.  Only ``"clock"`` recovers p and r on streams
    generated by the process itself; see README.
    """
    if stats.A == 0:
        raise LearningError("no additions observed in the window")
    a, b = fit.a, fit.b
    if a < 0:
        warnings.warn(f"negative slope {a:.3g} clamped to 0", stacklevel=2)
        a = 0.0
    if b < 0:
        warnings.warn(f"negative intercept {b:.3g} clamped to 0", stacklevel=2)
        b = 0.0
    if normalization == "clock":
        M = normalization_clock(stats)
    elif normalization == "literal":
        M = normalization_literal(a, b, stats)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    if M <= 0:
        raise LearningError("window normalisation is zero")
    p_raw = a * stats.gamma0 / M
    r_raw = b * stats.pairs / M
    p = min(1.0, max(0.0, p_raw))
    r = min(1.0, max(0.0, r_raw))
    try:
        ratio = q_bound(stats)
    except LearningError:
        ratio = math.inf
    q = 0.0 if math.isinf(ratio) or ratio <= 0 else min(1.0, p / ratio)
    return LearnedParams(
        p=p,
        r=r,
        q=q,
        q_ratio=ratio,
        M=M,
        R2=fit.R2,
        accepted=fit.R2 >= c,
        window_len=stats.window_len,
        normalization=normalization,
        raw={"a": a, "b": b, "p": p_raw, "r": r_raw},
    )


def learn(
    g: DynamicGraph,
    events: Sequence[EdgeEvent],
    eps: float = 0.1,
    c: float = DEFAULT_FIT_THRESHOLD,
    min_support: int = DEFAULT_SUPPORT_FLOOR,
    top_buckets: int = DEFAULT_TOP_BUCKETS,
    clock_start: int | None = None,
    normalization: str = "clock",
    monitor_floor: int = DEFAULT_MONITOR_FLOOR,
) -> tuple[LearnedParams, WindowStats, RegressionFit]:
    stats = collect_window(
        g, events, eps, top_buckets=top_buckets, clock_start=clock_start, monitor_floor=monitor_floor
    )
    fit = fit_line(stats, min_support=min_support)
    return invert_params(fit, stats, c=c, normalization=normalization), stats, fit


def write_params(path, learned: LearnedParams) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for k, v in learned.to_record().items():
            fh.write(f"{k}={v}\n")


def read_params(path) -> dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                k, _, v = line.partition("=")
                out[k.strip()] = v.strip()
    return out
