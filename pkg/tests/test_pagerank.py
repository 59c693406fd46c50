from importlib import resources

import numpy as np
import pytest

from knnph import (
    Graph,
    IterationTrace,
    PageRankConfig,
    load_edge_list,
    paper_initial_condition,
    power_iterate,
    rank_convergence_times,
    rank_order,
    transition_row,
)


def dolphins_text():
    return resources.files("knnph.data").joinpath("dolphins.txt").read_text()


def test_load_simple_edge_list():
    g = load_edge_list("0 1\n1 2\n", undirected=True)
    assert g.n == 3
    assert set(g.edges) == {(0, 1), (1, 2)}
    assert g.labels is None


def test_load_deduplicates_undirected():
    g = load_edge_list("a b\nb a\n", undirected=True)
    assert g.n == 2 and len(g.edges) == 1
    assert g.labels == ("a", "b")


def test_load_dolphin_fixture():
    g = load_edge_list(dolphins_text(), undirected=True)
    assert g.n == 62
    assert len(g.edges) == 159
    assert "Grin" in g.labels and "Ripplefluke" in g.labels


def test_load_reports_line_number():
    with pytest.raises(ValueError, match="line 2"):
        load_edge_list("a b\nc\n")


def test_load_comments_and_multi_pairs():
    g = load_edge_list("# comment\na b c d\n", undirected=True)
    assert g.n == 4 and len(g.edges) == 2


def test_transition_row_uniform_over_neighbors():
    g = Graph(n=4, edges=((0, 1), (0, 3)), directed=True)
    row = transition_row(g, 0, np.full(4, 0.25))
    assert row.tolist() == [0.0, 0.5, 0.0, 0.5]


def test_transition_row_dangling_gets_v():
    g = Graph(n=3, edges=((0, 1),), directed=True)
    v = np.array([0.2, 0.3, 0.5])
    assert transition_row(g, 2, v).tolist() == v.tolist()


def test_transition_row_undirected_path():
    g = Graph(n=3, edges=((0, 1), (1, 2)), directed=False)
    assert transition_row(g, 1, np.full(3, 1 / 3)).tolist() == [0.5, 0.0, 0.5]


def test_alpha_zero_jumps_to_v():
    g = Graph(n=3, edges=((0, 1), (1, 2)))
    v = np.array([0.5, 0.25, 0.25])
    trace = power_iterate(g, PageRankConfig(alpha=0.0, v=v, max_iter=3))
    assert np.allclose(trace.iterates[1], v, atol=1e-15)
    assert np.allclose(trace.pi, v, atol=1e-12)


def test_two_node_symmetric_pi():
    g = Graph(n=2, edges=((0, 1),))
    trace = power_iterate(g, PageRankConfig(alpha=0.7, max_iter=5))
    assert np.allclose(trace.pi, [0.5, 0.5], atol=1e-12)


def solve_pi_exactly(g, alpha, v):
    """Oracle: stationary vector from the linear system (I - alpha P^T) pi = (1-alpha) v."""
    n = g.n
    p = np.array([transition_row(g, i, v) for i in range(n)])
    return np.linalg.solve(np.eye(n) - alpha * p.T, (1 - alpha) * v)


def test_three_node_star_matches_linear_solve():
    g = Graph(n=3, edges=((0, 1), (0, 2)))
    v = np.full(3, 1 / 3)
    trace = power_iterate(g, PageRankConfig(alpha=0.85, v=v, max_iter=10))
    expected = solve_pi_exactly(g, 0.85, v)
    assert np.allclose(trace.pi, expected, atol=1e-10)
    assert trace.pi[0] > trace.pi[1]
    assert trace.pi[1] == pytest.approx(trace.pi[2], abs=1e-12)


def test_iterates_stay_stochastic(rng):
    g = load_edge_list("a b\nb c\nc d\nd a\na c\n")
    trace = power_iterate(g, PageRankConfig(max_iter=20))
    sums = trace.iterates.sum(axis=1)
    assert np.max(np.abs(sums - 1.0)) <= 1e-10
    assert np.min(trace.iterates) >= 0.0


def test_pi_is_fixed_point():
    g = load_edge_list(dolphins_text())
    cfg = PageRankConfig(alpha=0.85, max_iter=5, tol=1e-14)
    trace = power_iterate(g, cfg)
    n = g.n
    v = np.full(n, 1 / n)
    p = np.array([transition_row(g, i, v) for i in range(n)])
    gm = cfg.alpha * p + (1 - cfg.alpha) * np.outer(np.ones(n), v)
    assert np.max(np.abs(trace.pi @ gm - trace.pi)) <= 10 * cfg.tol


def test_power_iterate_rejects_bad_vectors():
    g = Graph(n=2, edges=((0, 1),))
    with pytest.raises(ValueError):
        power_iterate(g, PageRankConfig(v=np.array([0.9, 0.2])))
    with pytest.raises(ValueError):
        power_iterate(g, PageRankConfig(x0=np.array([-1.0, 2.0])))


def test_paper_initial_condition_is_ramp():
    x0 = paper_initial_condition(4)
    assert np.allclose(x0, [0.1, 0.2, 0.3, 0.4])
    assert x0.sum() == pytest.approx(1.0)


def test_rank_order_examples():
    assert rank_order([0.1, 0.4, 0.3, 0.2]).tolist() == [4, 1, 2, 3]
    assert rank_order([2.0, 2.0, 2.0]).tolist() == [1, 2, 3]
    assert rank_order([5.0]).tolist() == [1]
    with pytest.raises(ValueError):
        rank_order([np.nan, 1.0])


def test_rank_order_scale_invariant(rng):
    x = rng.uniform(0, 1, size=12)
    assert np.array_equal(rank_order(x), rank_order(4.0 * x))


def test_rank_times_constant_trace():
    pi = np.array([0.5, 0.3, 0.2])
    trace = IterationTrace(np.tile(pi, (6, 1)), pi)
    assert rank_convergence_times(trace) == [0, 0, 0]


def test_rank_times_settle_at_nine():
    pi = np.array([0.5, 0.3, 0.2])
    swapped = np.array([0.5, 0.2, 0.3])
    rows = [swapped] * 9 + [pi] * 4  # ranks differ up to t=8, settle at t=9
    trace = IterationTrace(np.array(rows), pi)
    times = rank_convergence_times(trace)
    assert max(times) == 9
    assert times[0] == 0


def test_rank_times_two_node_tie():
    pi = np.array([0.5, 0.5])
    trace = IterationTrace(np.tile(pi, (4, 1)), pi)
    assert rank_convergence_times(trace) == [0, 0]


def test_rank_times_unresolved_at_horizon():
    pi = np.array([0.5, 0.3, 0.2])
    swapped = np.array([0.5, 0.2, 0.3])
    trace = IterationTrace(np.array([pi, swapped]), pi)
    times = rank_convergence_times(trace)
    assert times[1] is None and times[2] is None and times[0] == 0


def test_dolphin_rank_convergence_within_horizon():
    g = load_edge_list(dolphins_text())
    trace = power_iterate(g, PageRankConfig(alpha=0.85, max_iter=30))
    times = rank_convergence_times(trace)
    assert all(t is not None for t in times)
    assert max(times) <= 30
