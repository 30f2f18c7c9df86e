import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wedgepick.generators import complete_graph, gnm_graph, path_graph, star_graph
from wedgepick.graph import DynamicGraph
from wedgepick.schedule import (
    DEGREE,
    DEFAULT_MAX_BATCH,
    PAIR,
    TRIDEGREE,
    GrowthCheck,
    check_pair_hypothesis,
    rest_window,
    tri_growth_bound,
    tri_rest_window,
    verify_growth_bound,
    vertex_rate,
    write_growth_csv,
)
from wedgepick.sim import ModelParams


def test_leaf_rate_in_star():
    g = star_graph(4)
    assert vertex_rate(g, 1, ModelParams(0.5)) == pytest.approx(0.5)
    assert vertex_rate(g, 0, ModelParams(0.5)) == 0


def test_isolated_vertex_rate():
    g = DynamicGraph(4, [(0, 1), (1, 2)])
    assert vertex_rate(g, 3, ModelParams(0.8)) == 0


def test_rate_without_closure_is_uniform():
    g = gnm_graph(20, 40, random.Random(1))
    assert {vertex_rate(g, v, ModelParams(0.0, r=0.4)) for v in range(20)} == {0.4 / 20}


def test_star_window():
    g = star_graph(4)
    win = rest_window(g, ModelParams(0.5), beta=1.0, eps=1.0)
    assert win.budget == 2
    assert win.cap == pytest.approx(math.e * 6 / 4)
    assert win.tau[1] == pytest.approx(4)
    assert win.tau[0] == pytest.approx(math.e * 1.5)
    assert win.delta == 4
    assert win.argmin != 0


def test_frozen_model_gets_max_window():
    g = gnm_graph(15, 30, random.Random(2))
    assert rest_window(g, ModelParams(0.0), 1.0, 0.1).delta == DEFAULT_MAX_BATCH
    assert rest_window(g, ModelParams(0.0), 1.0, 0.1, max_batch=77).delta == 77
    assert tri_rest_window(g, ModelParams(0.0), 1.0, 0.1).delta == DEFAULT_MAX_BATCH


def test_window_needs_positive_slack():
    g = star_graph(3)
    with pytest.raises(ValueError):
        rest_window(g, ModelParams(0.5), 0.0, 0.1)
    with pytest.raises(ValueError):
        tri_rest_window(g, ModelParams(0.5), 1.0, 0.0)


def test_window_is_at_least_one():
    g = complete_graph(30)
    assert rest_window(g, ModelParams(1.0), 1e-6, 1e-6).delta == 1


def test_equal_rates_give_closed_form():
    g = DynamicGraph(12, [(i, (i + 1) % 12) for i in range(12)])
    params = ModelParams(0.3, 0, 0.05)
    rate = vertex_rate(g, 0, params)
    win = rest_window(g, params, beta=2.0, eps=0.5)
    assert np.allclose(win.tau, win.tau[0])
    assert win.delta == math.floor(min(win.cap, 3.0 / rate))


def test_tri_cap_matches_table_value():
    # d_max = 345 and p = 0.75 give a cap of about 625.2 steps
    assert math.e * 345 / (2 * 0.75) == pytest.approx(625.2, abs=0.05)


def test_pair_hypothesis_warning():
    g = path_graph(3)
    with pytest.warns(UserWarning):
        assert not check_pair_hypothesis(g, ModelParams(0.001, 0, 1.0))
    assert check_pair_hypothesis(g, ModelParams(0.5, 0, 0.1))


@given(st.integers(0, 10_000), st.floats(0.05, 1.0), st.floats(0.0, 0.05), st.floats(0.2, 5.0))
@settings(max_examples=60, deadline=None)
def test_tri_window_binary_search_matches_scan(seed, p, r, alpha):
    rng = random.Random(seed)
    n = rng.randrange(6, 25)
    g = gnm_graph(n, rng.randrange(n, n * (n - 1) // 2), rng)
    params = ModelParams(p, 0, r)
    win = tri_rest_window(g, params, alpha, 0.2)
    hi_cap = min(math.floor(math.e * g.d_max / (2 * p)), DEFAULT_MAX_BATCH)
    grid = np.arange(hi_cap + 1)
    d_avg = 2 * g.m / n
    for v in range(n):
        st_v = g.vertex_stats(v)
        vals = tri_growth_bound(grid, st_v.zeta2, st_v.d, p, r, g.gamma, d_avg, n)
        assert np.all(np.diff(vals) >= -1e-12)
        ok = np.nonzero(vals <= win.budget)[0]
        assert win.tau[v] == (ok.max() if len(ok) else 0)
    assert win.delta == max(1, math.floor(win.tau.min()))
    assert win.delta <= max(1, hi_cap)


@given(st.integers(0, 10_000), st.floats(0.05, 0.95), st.floats(0.1, 4.0))
@settings(max_examples=60, deadline=None)
def test_window_monotone_in_p_and_budget(seed, p, beta):
    rng = random.Random(seed)
    g = gnm_graph(30, rng.randrange(30, 150), rng)
    base = rest_window(g, ModelParams(p, 0, 0.01), beta, 0.1)
    wider = rest_window(g, ModelParams(p, 0, 0.01), 2 * beta, 0.1)
    hotter = rest_window(g, ModelParams(min(1.0, 1.5 * p), 0, 0.01), beta, 0.1)
    assert wider.delta >= base.delta
    assert hotter.cap <= base.cap
    assert hotter.delta <= base.delta
    assert base.delta <= max(1, math.floor(base.cap))


# -- Monte-Carlo checks of the growth bounds ----------------------------------------


def test_zero_steps_zero_growth():
    g = star_graph(5)
    for which in (DEGREE, TRIDEGREE, PAIR):
        for c in verify_growth_bound(g, ModelParams(0.5), 0, 20, which):
            assert c.empirical_mean == 0 and c.bound == 0 and not c.violated


def test_window_is_enforced():
    g = star_graph(4)
    with pytest.raises(ValueError):
        verify_growth_bound(g, ModelParams(0.5), 100, 10, DEGREE)
    with pytest.raises(ValueError):
        verify_growth_bound(g, ModelParams(0.5), 2, 10, "bogus")


def test_leaf_degree_growth_in_star():
    g = star_graph(10)
    before = g.edges()
    checks = verify_growth_bound(g, ModelParams(0.5), 5, 10_000, DEGREE, targets=[1, 2, 3], seed=3)
    assert g.edges() == before
    assert not any(c.violated for c in checks)
    assert all(c.empirical_mean <= c.bound for c in checks)


def test_path_endpoint_common_degree_growth():
    g = path_graph(10)
    checks = verify_growth_bound(g, ModelParams(0.75), 3, 10_000, PAIR, targets=[(0, 9), (0, 2)], seed=4)
    assert not any(c.violated for c in checks)
    assert checks[0].empirical_mean <= checks[0].bound


def test_tridegree_growth_small_graph():
    g = gnm_graph(20, 50, random.Random(5))
    checks = verify_growth_bound(g, ModelParams(0.75, 0, 0.001), 4, 2000, TRIDEGREE, seed=6)
    assert len(checks) == 20
    assert not any(c.violated for c in checks)


def test_violation_flag_and_csv(tmp_path):
    bad = GrowthCheck("x", 3, 2.0, 1.0, 0.1)
    fine = GrowthCheck("y", 3, 1.2, 1.0, 0.1)
    assert bad.violated and not fine.violated
    path = tmp_path / "growth.csv"
    write_growth_csv(path, [bad, fine])
    lines = path.read_text().splitlines()
    assert lines[0] == "scenario,delta,empirical_mean,bound,stderr,violated"
    assert lines[1].endswith("True") and lines[2].endswith("False")
