"""Tri-densest subgraph approximation: tri-degree peeling on top of the shared level engine.

A vertex's support is the number of triangles it closes with two other
vertices of the current layer, and the threshold is 3 alpha (1 + eps).
Everything else, including the rest-and-run loop, is shared with the
densest variant in :mod:`wedgepick.peel`.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .events import EdgeEvent
from .graph import DynamicGraph
from .learn import DEFAULT_FIT_THRESHOLD
from .peel import TRIDENSEST, LayerDecomposition, PeelResult, RunResult, _static_levels, int_threshold, run_stream


class TriLayerDecomposition(LayerDecomposition):
    """Maintained tri-degree peeling; ``alpha`` is the current guess."""

    def __init__(self, g: DynamicGraph, eps: float):
        super().__init__(g, eps, TRIDENSEST)

    @property
    def alpha(self) -> float:
        return self.beta

    @property
    def candidate_tridensity(self):
        return self.candidate_density


def static_tri_peel(g: DynamicGraph, S0: Iterable[int], alpha: float, eps: float) -> PeelResult:
    """Peel ``S0`` by induced tri-degree at threshold 3 alpha (1 + eps)."""
    if alpha <= 0 or eps < 0:
        raise ValueError("need alpha > 0 and eps >= 0")
    thr = 3 * alpha * (1 + eps)
    levels, rounds, core = _static_levels(g, S0, int_threshold(thr), TRIDENSEST)
    for v in core:
        levels[v] = rounds
    return PeelResult(levels, rounds, frozenset(core), thr)


def tri_grid_search(g: DynamicGraph, eps: float) -> tuple[float, TriLayerDecomposition]:
    """Largest surviving alpha on the grid (0 for triangle-free graphs) and its structure."""
    ld = TriLayerDecomposition(g, eps)
    return ld.alpha, ld


def rest_and_run_tri(
    g0: DynamicGraph,
    events: Sequence[EdgeEvent],
    eps: float,
    c: float = DEFAULT_FIT_THRESHOLD,
    **kw,
) -> RunResult:
    """Rest-and-run with tri-degree rest windows; report densities are triangle densities."""
    return run_stream(g0, events, eps, kind=TRIDENSEST, c=c, **kw)
