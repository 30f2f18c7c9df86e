from __future__ import annotations

import random
from collections import defaultdict

import pytest

from wedgepick.graph import DynamicGraph

# criterion number -> list of (test name, outcome); details -> free text lines
_OUTCOMES: dict[int, list[tuple[str, str]]] = defaultdict(list)
_DETAILS: dict[int, list[str]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number checked by the test")


@pytest.fixture
def note(request):
    """Attach a measured value to the acceptance summary line of the test's criterion."""
    marker = request.node.get_closest_marker("criterion")

    def _note(text: str) -> None:
        if marker is not None:
            _DETAILS[marker.args[0]].append(text)

    return _note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        if hasattr(rep, "wasxfail"):
            state = "xfail" if rep.skipped else "xpass"
        else:
            state = rep.outcome
        _OUTCOMES[marker.args[0]].append((item.name, state))


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for num in sorted(_OUTCOMES):
        states = [s for _, s in _OUTCOMES[num]]
        if all(s == "skipped" for s in states):
            verdict = "SKIP"
        elif all(s == "passed" for s in states):
            verdict = "PASS"
        else:
            verdict = "FAIL"
        parts = ", ".join(f"{name}={state}" for name, state in _OUTCOMES[num])
        tr.write_line(f"criterion {num}: {verdict} [{parts}]")
        for line in _DETAILS.get(num, []):
            tr.write_line(f"    {line}")


def random_graph(rng: random.Random, n: int, prob: float) -> DynamicGraph:
    g = DynamicGraph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < prob:
                g.add_edge(u, v)
    return g
