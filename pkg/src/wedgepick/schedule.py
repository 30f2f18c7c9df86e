"""Rest windows from expected degree growth, and Monte-Carlo checks of the growth bounds."""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .events import ADD
from .graph import DynamicGraph
from .rng import make_rng
from .sim import NOOP, ModelParams, WedgeSimulator

DEFAULT_MAX_BATCH = 10**6


@dataclass(frozen=True)
class RestWindow:
    delta: int
    tau: np.ndarray
    cap: float
    budget: float

    @property
    def argmin(self) -> int:
        return int(np.argmin(self.tau)) if len(self.tau) else -1


def vertex_rate(g: DynamicGraph, v: int, params: ModelParams) -> float:
    """Expected degree gain per step: 2p Gamma(v)/Gamma + r/n."""
    base = params.r / g.n
    if g.gamma == 0:
        return base
    return 2.0 * params.p * g.vertex_stats(v).gamma_v / g.gamma + base


def vertex_rates(g: DynamicGraph, params: ModelParams) -> np.ndarray:
    base = params.r / g.n
    if g.gamma == 0:
        return np.full(g.n, base)
    return 2.0 * params.p * g.wedge_endpoint_counts() / g.gamma + base


def degree_window_cap(g: DynamicGraph, p: float, max_batch: int = DEFAULT_MAX_BATCH) -> float:
    """e Gamma / (2 p d_max), the validity window of the pair and degree bounds."""
    if p <= 0 or g.d_max == 0:
        return float(max_batch)
    return math.e * g.gamma / (2.0 * p * g.d_max)


def tri_window_cap(g: DynamicGraph, p: float, max_batch: int = DEFAULT_MAX_BATCH) -> float:
    """e d_max / (2 p), the validity window of the tri-degree bound."""
    if p <= 0:
        return float(max_batch)
    return math.e * g.d_max / (2.0 * p)


def _clamp_delta(x: float, max_batch: int) -> int:
    if not math.isfinite(x):
        return max_batch
    return int(min(max(math.floor(x), 1), max_batch))


def rest_window(
    g: DynamicGraph,
    params: ModelParams,
    beta: float,
    eps: float,
    max_batch: int = DEFAULT_MAX_BATCH,
) -> RestWindow:
    if beta <= 0 or eps <= 0:
        raise ValueError("beta and eps must be positive")
    check_pair_hypothesis(g, params)
    cap = degree_window_cap(g, params.p, max_batch)
    budget = beta * (1 + eps)
    rates = vertex_rates(g, params)
    with np.errstate(divide="ignore"):
        grow = np.where(rates > 0, budget / np.where(rates > 0, rates, 1.0), float(max_batch))
    tau = np.minimum(grow, cap)
    low = float(tau.min()) if len(tau) else cap
    return RestWindow(_clamp_delta(low, max_batch), tau, cap, budget)


def tri_growth_bound(
    delta,
    zeta2,
    d,
    p: float,
    r: float,
    gamma: int,
    d_avg: float,
    n: int,
):
    """Expected tri-degree growth over ``delta`` steps (vectorises over arrays)."""
    delta = np.asarray(delta, dtype=float)
    first = 0.0
    if gamma > 0 and p > 0:
        corr = 1 + 6 * delta**2 * p**2 / gamma
        if d_avg > 0:
            corr = corr + 8 * delta * p / d_avg
        first = delta * np.asarray(zeta2, dtype=float) * p / gamma * corr
    # the uniform-addition term carries no r factor as stated; kept verbatim
    second = np.asarray(d, dtype=float) ** 2 * (delta + delta**2 / n) / n**2
    return first + second


def tri_rest_window(
    g: DynamicGraph,
    params: ModelParams,
    alpha: float,
    eps: float,
    max_batch: int = DEFAULT_MAX_BATCH,
    zeta2: np.ndarray | None = None,
) -> RestWindow:
    """Per-vertex largest delta within the tri-degree window whose bound stays below alpha(1+eps)."""
    if alpha <= 0 or eps <= 0:
        raise ValueError("alpha and eps must be positive")
    budget = alpha * (1 + eps)
    n = g.n
    if params.p <= 0:
        tau = np.full(n, float(max_batch))
        return RestWindow(max_batch, tau, float(max_batch), budget)
    cap = tri_window_cap(g, params.p, max_batch)
    hi_cap = min(math.floor(cap), max_batch)
    if zeta2 is None:
        zeta2 = g.zeta2_counts()
    d = g.degree_array()
    d_avg = 2 * g.m / n
    args = (params.p, params.r, g.gamma, d_avg, n)

    def ok(delta: np.ndarray) -> np.ndarray:
        return tri_growth_bound(delta, zeta2, d, *args) <= budget

    # largest delta in [0, hi_cap] with ok(delta); the bound increases in delta
    lo = np.zeros(n, dtype=np.int64)
    hi = np.full(n, hi_cap, dtype=np.int64)
    good_top = ok(hi)
    lo[good_top] = hi[good_top]
    active = ~good_top
    while active.any():
        mid = (lo + hi + 1) // 2
        fine = ok(mid)
        lo = np.where(active & fine, mid, lo)
        hi = np.where(active & ~fine, mid - 1, hi)
        active = lo < hi
    tau = lo.astype(float)
    low = float(tau.min()) if n else cap
    return RestWindow(_clamp_delta(low, max_batch), tau, cap, budget)


def check_pair_hypothesis(g: DynamicGraph, params: ModelParams) -> bool:
    """Warn when r > (n^2 / Gamma) p, outside the common-degree bound's assumptions."""
    if g.gamma == 0 or params.r <= 0:
        return True
    if params.r > g.n**2 / g.gamma * params.p:
        warnings.warn(
            f"r={params.r} exceeds (n^2/Gamma) p = {g.n ** 2 / g.gamma * params.p:.3g}; growth bounds may not hold",
            stacklevel=3,
        )
        return False
    return True


# -- Monte-Carlo verification ------------------------------------------------

PAIR = "pair"
DEGREE = "degree"
TRIDEGREE = "tridegree"


@dataclass(frozen=True)
class GrowthCheck:
    scenario: str
    delta: int
    empirical_mean: float
    bound: float
    stderr: float

    @property
    def violated(self) -> bool:
        return self.empirical_mean - self.bound > 3 * self.stderr

    def as_row(self) -> dict[str, object]:
        return {
            "scenario": self.scenario,
            "delta": self.delta,
            "empirical_mean": self.empirical_mean,
            "bound": self.bound,
            "stderr": self.stderr,
            "violated": self.violated,
        }


def pair_bound(g: DynamicGraph, u: int, v: int, delta: int) -> float:
    if g.gamma == 0:
        return 0.0 if delta == 0 else math.inf
    return 4.0 * delta * g.deg[u] * g.deg[v] / g.gamma


def degree_bound(g: DynamicGraph, u: int, params: ModelParams, delta: int) -> float:
    return delta * vertex_rate(g, u, params)


def tridegree_bound(g: DynamicGraph, u: int, params: ModelParams, delta: int) -> float:
    st = g.vertex_stats(u)
    return float(tri_growth_bound(delta, st.zeta2, st.d, params.p, params.r, g.gamma, 2 * g.m / g.n, g.n))


def growth_window(g: DynamicGraph, params: ModelParams, which: str) -> float:
    if which == TRIDEGREE:
        return tri_window_cap(g, params.p, max_batch=math.inf)
    return degree_window_cap(g, params.p, max_batch=math.inf)


def verify_growth_bound(
    g: DynamicGraph,
    params: ModelParams,
    delta: int,
    trials: int,
    which: str,
    targets: Sequence | None = None,
    seed: int = 0,
    scenario: str = "",
) -> list[GrowthCheck]:
    """Simulate ``delta`` steps ``trials`` times from ``g`` and compare mean growth with the bound.

    ``targets`` are vertices (degree, tridegree) or vertex pairs (pair).
    They default to every vertex, or to every unordered pair when n <= 30.
    ``g`` is restored to its starting state before returning.
    """
    if which not in (PAIR, DEGREE, TRIDEGREE):
        raise ValueError(f"unknown bound {which!r}")
    if delta < 0 or trials < 1:
        raise ValueError("need delta >= 0 and at least one trial")
    window = growth_window(g, params, which)
    if delta > window:
        raise ValueError(f"delta={delta} outside the bound's window {window:.4g}")
    if targets is None:
        if which == PAIR:
            if g.n > 30:
                raise ValueError("pass explicit pair targets for graphs with more than 30 vertices")
            targets = [(u, v) for u in range(g.n) for v in range(u + 1, g.n)]
        else:
            targets = list(range(g.n))
    targets = list(targets)

    if which == PAIR:
        bounds = [pair_bound(g, u, v, delta) for u, v in targets]

        def measure(h):
            return [h.common_degree(u, v) for u, v in targets]

    elif which == DEGREE:
        bounds = [degree_bound(g, u, params, delta) for u in targets]

        def measure(h):
            return [h.deg[u] for u in targets]

    else:
        bounds = [tridegree_bound(g, u, params, delta) for u in targets]

        def measure(h):
            return [h.tri_deg[u] for u in targets]

    start = np.array(measure(g), dtype=float)
    total = np.zeros(len(targets))
    total_sq = np.zeros(len(targets))
    rng = make_rng(seed)
    sim = WedgeSimulator(g, params, rng)
    try:
        for _ in range(trials):
            log = []
            for _ in range(delta):
                ev = sim.step()
                if ev.kind != NOOP:
                    log.append(ev)
            growth = np.array(measure(g), dtype=float) - start
            total += growth
            total_sq += growth * growth
            for ev in reversed(log):
                if ev.kind == ADD:
                    g.remove_edge(*ev.pair)
                else:
                    g.add_edge(*ev.pair)
    finally:
        sim.close()
    mean = total / trials
    var = np.maximum(total_sq / trials - mean * mean, 0.0)
    stderr = np.sqrt(var / max(trials - 1, 1))
    label = scenario or which
    return [
        GrowthCheck(f"{label}:{which}:{_target_label(t)}", delta, float(mean[i]), float(bounds[i]), float(stderr[i]))
        for i, t in enumerate(targets)
    ]


def _target_label(t) -> str:
    return f"{t[0]}-{t[1]}" if isinstance(t, tuple) else str(t)


def write_growth_csv(path, checks: Iterable[GrowthCheck]) -> None:
    fields = ["scenario", "delta", "empirical_mean", "bound", "stderr", "violated"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for c in checks:
            w.writerow(c.as_row())
