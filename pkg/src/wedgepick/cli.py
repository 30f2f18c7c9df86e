"""Command line: ``wedgepick <mode> [--config FILE] [key=value ...]``.

Every mode reads the same flat configuration; ``key=value`` arguments
override the config file.  A summary of ``key=value`` lines goes to stdout.
"""

from __future__ import annotations

import argparse
import sys

from .config import MODES, ConfigError, load_config
from .experiments import run_experiment, summary_lines
from .graph import GraphError
from .ingest import IngestError
from .learn import LearningError
from .reports import ReportError

_HELP = {
    "ingest": "clean an edge-event file and print its wedge statistics",
    "simulate": "generate a wedge-picking trace",
    "learn": "estimate p, q, r from a stream prefix",
    "densest": "rest-and-run densest subgraph tracking",
    "tridensest": "rest-and-run tri-densest subgraph tracking",
    "oracle": "exact densest (and small tri-densest) values of a static graph",
    "compare": "batched versus per-event processing of one stream",
    "bench": "wall times of batched and per-event processing",
}


def _overrides(pairs: list[str]) -> dict[str, str]:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise ConfigError(f"expected key=value, got {item!r}")
        k, _, v = item.partition("=")
        out[k.strip()] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wedgepick", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=_HELP[mode])
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("settings", nargs="*", metavar="key=value", help="config overrides")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        over = _overrides(args.settings)
        over["mode"] = args.mode
        cfg = load_config(args.config, over)
    except (ConfigError, OSError) as exc:
        print(f"wedgepick: config error: {exc}", file=sys.stderr)
        return 2
    try:
        res = run_experiment(cfg)
    except (IngestError, ReportError, GraphError, LearningError, ValueError, OSError) as exc:
        print(f"wedgepick: {cfg.mode} failed: {exc}", file=sys.stderr)
        return 1
    for line in summary_lines(res.summary):
        print(line)
    for path in res.artifacts:
        print(f"wrote={path}")
    return res.status


if __name__ == "__main__":
    sys.exit(main())
