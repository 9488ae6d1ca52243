import numpy as np
import pytest

from stpr import (
    Aabb,
    Certificate,
    CloudSource,
    EnvironmentModel,
    Point3,
    PointCloud,
    RrtConfig,
    Scenario,
    StartBlocked,
    build_index,
    plan_rrtstar,
)


def _scenario(start, goal, iters=2000, bounds=None):
    env = EnvironmentModel(objects=(), bounds=bounds or Aabb(Point3(0, 0, -1), Point3(4, 4, 1)))
    return Scenario(
        name="t", environment=env, start=start, goal=goal, goal_radius=0.25,
        robot_radius=0.25, constraints=(), sample_count=1, grid_resolution=0.1,
        rrt=RrtConfig(max_iterations=iters, step_size=0.25, goal_bias=0.05,
                      rewire_radius=1.0),
        rng_seed=0,
    )


def test_finds_straight_line_in_free_space():
    s = _scenario(Point3(0.5, 0.5, 0), Point3(3.5, 3.5, 0))
    r = plan_rrtstar(s, None, np.random.default_rng(0))
    assert r.found
    line = s.start.distance_to(s.goal) - s.goal_radius
    assert r.cost <= line * 1.2
    assert r.path[0] == s.start
    assert r.path[-1].distance_to(s.goal) <= s.goal_radius


def test_start_blocked_raises():
    s = _scenario(Point3(1, 1, 0), Point3(3, 3, 0))
    cloud = PointCloud("blob", np.array([[1.0, 1.0, 0.0]]), CloudSource.CONSTRAINT)
    with pytest.raises(StartBlocked):
        plan_rrtstar(s, build_index([cloud]), np.random.default_rng(0))


def test_budget_exhaustion_reports_certificate():
    # goal sealed inside a dense shell of points
    s = _scenario(Point3(0.5, 0.5, 0), Point3(3.5, 3.5, 0), iters=300)
    theta = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    ring = []
    for rad in (0.6, 0.7, 0.8):
        ring.append(np.stack([3.5 + rad * np.cos(theta), 3.5 + rad * np.sin(theta),
                              np.zeros_like(theta)], axis=1))
    cloud = PointCloud("shell", np.concatenate(ring), CloudSource.CONSTRAINT)
    r = plan_rrtstar(s, build_index([cloud]), np.random.default_rng(0))
    assert not r.found
    assert r.certificate is Certificate.ITERATION_BUDGET_EXHAUSTED
    assert r.stats.iterations == 300


def test_edges_respect_step_size_between_tree_nodes():
    s = _scenario(Point3(0.5, 0.5, 0), Point3(3.5, 3.5, 0))
    r = plan_rrtstar(s, None, np.random.default_rng(1))
    # parent links chosen within the rewire radius
    for a, b in zip(r.path, r.path[1:]):
        assert a.distance_to(b) <= s.rrt.rewire_radius + 1e-9


def test_deterministic_given_rng_seed():
    s = _scenario(Point3(0.5, 0.5, 0), Point3(3.5, 3.5, 0))
    a = plan_rrtstar(s, None, np.random.default_rng(42))
    b = plan_rrtstar(s, None, np.random.default_rng(42))
    assert a.path == b.path and a.cost == b.cost


def test_best_cost_trace_monotone_non_increasing():
    s = _scenario(Point3(0.5, 0.5, 0), Point3(3.5, 3.5, 0), iters=1500)
    r = plan_rrtstar(s, None, np.random.default_rng(3), record_trace=True)
    trace = r.best_cost_trace
    assert len(trace) == 1500
    assert all(b <= a + 1e-12 for a, b in zip(trace, trace[1:]))
    assert trace[-1] == pytest.approx(r.cost)


def test_rewiring_improves_cost_over_first_solution():
    s = _scenario(Point3(0.5, 0.5, 0), Point3(3.5, 3.5, 0), iters=4000)
    r = plan_rrtstar(s, None, np.random.default_rng(5), record_trace=True)
    finite = [c for c in r.best_cost_trace if np.isfinite(c)]
    assert finite[-1] <= finite[0]
