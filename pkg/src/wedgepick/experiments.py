"""Experiment pipelines behind the command line: one function per mode."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from typing import Sequence

from .config import ExperimentConfig
from .events import ADD, EdgeEvent, format_event, write_events
from .generators import gnm_graph
from .graph import DynamicGraph
from .ingest import Ingested, ingest, write_cleaned
from .learn import learn, write_params
from .oracle import BRUTE_DENSEST_MAX_N, BRUTE_TRI_MAX_N, densest_bruteforce, densest_exact, tridensest_bruteforce
from .peel import DENSEST, TRIDENSEST, RunResult, run_stream
from .reports import COMPARE_COLUMNS, DENSITY_COLUMNS, emit_report
from .rng import make_rng
from .sim import ModelParams, run_trace, trace_header, trace_to_events

# generation defaults for synthetic streams when p, q, r are not set
SYNTHETIC_PARAMS = ModelParams(0.75, 0.001, 0.001)
DEFAULT_ADDITIONS = 10_000
BENCH_COLUMNS = [
    "source",
    "kind",
    "n",
    "m0",
    "events",
    "rounds",
    "learn_us",
    "batched_us",
    "per_event_us",
    "speedup",
    "density_batched",
    "density_per_event",
]
_TIME_COLUMNS = ("wall_time_us", "time_ours_us", "time_baseline_us", "speedup", "learn_us", "batched_us", "per_event_us")


@dataclass
class ExperimentResult:
    status: int
    summary: dict[str, object] = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)


def event_digest(events: Sequence[EdgeEvent]) -> str:
    """SHA-256 of the events in their text form; equal digests mean identical streams."""
    h = hashlib.sha256()
    for e in events:
        h.update(format_event(e).encode())
        h.update(b"\n")
    return h.hexdigest()


def _ingest(cfg: ExperimentConfig, whole_graph: bool = False) -> Ingested:
    if cfg.input is None:
        raise ValueError(f"mode {cfg.mode} needs input=<edge file>")
    if whole_graph:
        return ingest(cfg.input, initial_count=10**18)
    return ingest(cfg.input, initial_count=cfg.initial_count, initial_until=cfg.initial_until)


def _gen_params(cfg: ExperimentConfig) -> ModelParams:
    d = SYNTHETIC_PARAMS
    return ModelParams(
        d.p if cfg.p is None else cfg.p,
        d.q if cfg.q is None else cfg.q,
        d.r if cfg.r is None else cfg.r,
    )


def _given_params(cfg: ExperimentConfig) -> ModelParams | None:
    """Parameters that bypass learning, when p is set in the config."""
    if cfg.p is None:
        return None
    return ModelParams(cfg.p, cfg.q or 0.0, cfg.r or 0.0)


def synthetic_stream(cfg: ExperimentConfig) -> tuple[DynamicGraph, list[EdgeEvent]]:
    """G(n, m) seed plus a simulated stream; timestamps are simulator steps."""
    rng = make_rng(cfg.seed)
    g0 = gnm_graph(cfg.n, cfg.m, rng)
    g = g0.copy()
    additions = cfg.additions if cfg.additions is not None or cfg.steps is not None else DEFAULT_ADDITIONS
    trace = run_trace(g, _gen_params(cfg), rng, max_steps=cfg.steps, target_additions=additions)
    return g0, trace_to_events(trace)


def _stream(cfg: ExperimentConfig) -> tuple[DynamicGraph, list[EdgeEvent], str]:
    if cfg.input is None:
        g0, events = synthetic_stream(cfg)
        return g0, events, f"gnm(n={cfg.n},m={cfg.m},seed={cfg.seed})"
    data = _ingest(cfg)
    return data.graph, data.events, os.path.basename(str(cfg.input))


def _strip_times(rows: list[dict], cfg: ExperimentConfig) -> list[dict]:
    if cfg.timings:
        return rows
    for r in rows:
        for k in _TIME_COLUMNS:
            if k in r:
                r[k] = 0
    return rows


def _write(cfg: ExperimentConfig, rows: list[dict], columns: Sequence[str], res: ExperimentResult) -> None:
    if cfg.output is None:
        return
    emit_report(_strip_times(rows, cfg), cfg.output, columns, fmt=cfg.format)
    res.artifacts.append(str(cfg.output))


def _oracle_fn(kind: str):
    if kind == DENSEST:
        return lambda g: float(densest_exact(g).value)

    def tri(g: DynamicGraph) -> float | None:
        return float(tridensest_bruteforce(g).value) if g.n <= BRUTE_TRI_MAX_N else None

    return tri


def _run(cfg: ExperimentConfig, g0: DynamicGraph, events, kind: str, per_event: bool = False) -> RunResult:
    learn_kwargs = {
        "min_support": cfg.support_floor,
        "top_buckets": cfg.top_buckets,
        "normalization": cfg.normalization,
        "monitor_floor": cfg.monitor_floor,
    }
    return run_stream(
        g0,
        events,
        cfg.eps,
        kind=kind,
        c=cfg.c,
        params=_given_params(cfg),
        learn_events=cfg.learn_events,
        learn_eps=cfg.learn_eps,
        learn_kwargs=learn_kwargs,
        clock=cfg.clock,
        max_batch=cfg.max_batch,
        per_event=per_event,
        oracle=_oracle_fn(kind) if cfg.oracle_every > 0 else None,
        oracle_every=max(cfg.oracle_every, 1),
    )


# -- modes ----------------------------------------------------------------------------


def _mode_ingest(cfg: ExperimentConfig) -> ExperimentResult:
    data = _ingest(cfg)
    g = data.graph
    res = ExperimentResult(0)
    ws = g.wedge_stats()
    res.summary = {
        "n": g.n,
        "m0": g.m,
        "events": len(data.events),
        "gamma": ws.gamma,
        "gamma_open": ws.gamma_open,
        "triangles": ws.triangles,
        "d_max": g.d_max,
        **{f"clean_{k}": v for k, v in data.report.as_dict().items()},
    }
    if cfg.output is not None:
        write_cleaned(cfg.output, data)
        res.artifacts.append(str(cfg.output))
    return res


def _mode_simulate(cfg: ExperimentConfig) -> ExperimentResult:
    params = _gen_params(cfg)
    if cfg.input is not None:
        g = _ingest(cfg, whole_graph=True).graph
    else:
        g = gnm_graph(cfg.n, cfg.m, make_rng(cfg.seed))
    seed_edges = [EdgeEvent(0, u, v, ADD) for u, v in g.edges()]
    rng = make_rng(cfg.seed)
    additions = cfg.additions if cfg.additions is not None or cfg.steps is not None else DEFAULT_ADDITIONS
    trace = run_trace(g, params, rng, max_steps=cfg.steps, target_additions=additions)
    events = trace_to_events(trace)
    res = ExperimentResult(0, {"n": g.n, "events": len(events), "final_m": g.m, "digest": event_digest(events)})
    if cfg.output is not None:
        header = trace_header(params, cfg.seed, g.n) + "\nseed graph edges carry t=0; ingest with initial_until=0"
        write_events(cfg.output, seed_edges + events, header=header)
        res.artifacts.append(str(cfg.output))
    return res


def _mode_learn(cfg: ExperimentConfig) -> ExperimentResult:
    g0, events, source = _stream(cfg)
    prefix = events[: cfg.learn_events] if cfg.learn_events is not None else events
    learned, stats, fit = learn(
        g0,
        prefix,
        eps=cfg.learn_eps if cfg.learn_eps is not None else cfg.eps,
        c=cfg.c,
        min_support=cfg.support_floor,
        top_buckets=cfg.top_buckets,
        normalization=cfg.normalization,
        monitor_floor=cfg.monitor_floor,
    )
    res = ExperimentResult(0, {"source": source, **learned.to_record(), "stop_reason": stats.stop_reason})
    if cfg.output is not None:
        write_params(cfg.output, learned)
        res.artifacts.append(str(cfg.output))
    return res


def _mode_peel(cfg: ExperimentConfig, kind: str) -> ExperimentResult:
    g0, events, source = _stream(cfg)
    run = _run(cfg, g0, events, kind)
    last = run.reports[-1]
    res = ExperimentResult(
        0,
        {
            "source": source,
            "rounds": len(run.reports) - 1,
            "batched": run.batched,
            "density": last.density,
            "beta": last.beta,
            "engine_time_us": run.engine_time_us if cfg.timings else 0,
            "notes": "; ".join(run.notes),
        },
    )
    if run.learned is not None:
        res.summary.update({f"learned_{k}": v for k, v in run.learned.to_record().items() if k in ("p", "q", "r", "R2")})
    _write(cfg, [r.as_row() for r in run.reports], DENSITY_COLUMNS, res)
    return res


def _mode_oracle(cfg: ExperimentConfig) -> ExperimentResult:
    g = _ingest(cfg, whole_graph=True).graph
    rows = []
    if g.m:
        ex = densest_exact(g)
        rows.append({"problem": "densest", "method": ex.method, "value": str(ex.value), "size": len(ex.subset)})
        if g.n <= BRUTE_DENSEST_MAX_N:
            bf = densest_bruteforce(g)
            rows.append({"problem": "densest", "method": bf.method, "value": str(bf.value), "size": len(bf.subset)})
    if 0 < g.n <= BRUTE_TRI_MAX_N:
        tb = tridensest_bruteforce(g)
        rows.append({"problem": "tridensest", "method": tb.method, "value": str(tb.value), "size": len(tb.subset)})
    res = ExperimentResult(0, {f"{r['problem']}_{r['method']}": r["value"] for r in rows})
    res.summary["n"] = g.n
    res.summary["m"] = g.m
    _write(cfg, rows, ["problem", "method", "value", "size"], res)
    return res


def _paired(ours: RunResult, base: RunResult) -> list[dict]:
    """One row per batched report, matched to the per-event report at the same cursor."""
    by_cursor = {r.cursor: r for r in base.reports}
    cum_base = {}
    acc = 0
    for r in base.reports:
        acc += r.wall_time_us
        cum_base[r.cursor] = acc
    rows = []
    acc_ours = 0
    for r in ours.reports:
        acc_ours += r.wall_time_us
        b = by_cursor[r.cursor]
        ratio = b.density / r.density if r.density > 0 else (1.0 if b.density == 0 else float("inf"))
        tb = cum_base[r.cursor]
        rows.append(
            {
                "round": r.round,
                "cursor": r.cursor,
                "density_ours": r.density,
                "density_baseline": b.density,
                "oracle_density": "" if r.oracle_density is None else r.oracle_density,
                "ratio_baseline_over_ours": ratio,
                "time_ours_us": acc_ours,
                "time_baseline_us": tb,
                "speedup": tb / acc_ours if acc_ours > 0 else "",
            }
        )
    return rows


PAIRED_COLUMNS = COMPARE_COLUMNS + ["time_ours_us", "time_baseline_us", "speedup"]


def compare_runs(cfg: ExperimentConfig, g0: DynamicGraph, events: list[EdgeEvent], kind: str):
    """Batched and per-event runs over the same events; raises if they consumed different streams."""
    digest = event_digest(events)
    ours = _run(cfg, g0, events, kind)
    base = _run(cfg.with_overrides({"oracle_every": "0"}), g0, events, kind, per_event=True)
    if not ours.digest == base.digest == digest:
        raise RuntimeError("batched and per-event runs consumed different event sequences")
    return ours, base, digest


def _mode_compare(cfg: ExperimentConfig) -> ExperimentResult:
    g0, events, source = _stream(cfg)
    ours, base, digest = compare_runs(cfg, g0, events, cfg.kind)
    rows = _paired(ours, base)
    speed = base.engine_time_us / ours.engine_time_us if ours.engine_time_us else float("inf")
    worst = max((r["ratio_baseline_over_ours"] for r in rows), default=1.0)
    res = ExperimentResult(
        0,
        {
            "source": source,
            "kind": cfg.kind,
            "digest": digest,
            "events": len(events),
            "rounds": len(ours.reports) - 1,
            "batched": ours.batched,
            "density_ours": ours.reports[-1].density,
            "density_baseline": base.reports[-1].density,
            "worst_ratio_baseline_over_ours": worst,
            "time_ours_us": ours.engine_time_us if cfg.timings else 0,
            "time_baseline_us": base.engine_time_us if cfg.timings else 0,
            "speedup": speed if cfg.timings else 0,
            "notes": "; ".join(ours.notes),
        },
    )
    _write(cfg, rows, PAIRED_COLUMNS, res)
    return res


def _mode_bench(cfg: ExperimentConfig) -> ExperimentResult:
    g0, events, source = _stream(cfg)
    ours, base, _ = compare_runs(cfg, g0, events, cfg.kind)
    row = {
        "source": source,
        "kind": cfg.kind,
        "n": g0.n,
        "m0": g0.m,
        "events": len(events),
        "rounds": len(ours.reports) - 1,
        "learn_us": ours.learn_time_us,
        "batched_us": ours.engine_time_us,
        "per_event_us": base.engine_time_us,
        "speedup": base.engine_time_us / ours.engine_time_us if ours.engine_time_us else float("inf"),
        "density_batched": ours.reports[-1].density,
        "density_per_event": base.reports[-1].density,
    }
    res = ExperimentResult(0, dict(row))
    _write(cfg, [row], BENCH_COLUMNS, res)
    return res


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    """Validate ``cfg`` and dispatch to its mode; errors propagate to the caller."""
    cfg.validate()
    if cfg.mode == "ingest":
        return _mode_ingest(cfg)
    if cfg.mode == "simulate":
        return _mode_simulate(cfg)
    if cfg.mode == "learn":
        return _mode_learn(cfg)
    if cfg.mode == "densest":
        return _mode_peel(cfg, DENSEST)
    if cfg.mode == "tridensest":
        return _mode_peel(cfg, TRIDENSEST)
    if cfg.mode == "oracle":
        return _mode_oracle(cfg)
    if cfg.mode == "compare":
        return _mode_compare(cfg)
    return _mode_bench(cfg)


def summary_lines(summary: dict[str, object]) -> list[str]:
    return [f"{k}={json.dumps(v) if isinstance(v, (dict, list)) else v}" for k, v in summary.items()]
