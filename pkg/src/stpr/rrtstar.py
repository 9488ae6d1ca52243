"""RRT* in the continuous z = plane_z slice with kd-tree node pruning.

Standard loop: uniform sample (goal-biased), steer from the nearest tree
node by at most step_size, discard colliding new nodes, connect through
the cheapest neighbor within the rewire radius, then rewire neighbors
through the new node. Collisions are checked at nodes only; edges are
left to the downstream validator. Exhausting the iteration budget
without touching the goal region yields a probabilistic (not proven)
nonexistence report.
"""

from __future__ import annotations

import math
import time
from typing import Optional

import numpy as np

from .errors import StartBlocked
from .geometry import Point3
from .planresult import Certificate, PlanResult, PlanStats
from .sampling import PointCloudIndex
from .scene import Scenario


def plan_rrtstar(
    scenario: Scenario,
    index: Optional[PointCloudIndex],
    rng: np.random.Generator,
    record_trace: bool = False,
    plane_z: float = 0.0,
) -> PlanResult:
    t0 = time.perf_counter()
    bounds = scenario.environment.bounds
    r = scenario.robot_radius
    cfg = scenario.rrt
    lo = np.array([bounds.min.x, bounds.min.y])
    hi = np.array([bounds.max.x, bounds.max.y])
    start = np.array([scenario.start.x, scenario.start.y])
    goal = np.array([scenario.goal.x, scenario.goal.y])

    def collides(p: np.ndarray) -> bool:
        if index is None:
            return False
        return index.collides((p[0], p[1], plane_z), r)

    if collides(start):
        raise StartBlocked("start state collides")

    n_max = cfg.max_iterations + 1
    pts = np.empty((n_max, 2))
    cost = np.empty(n_max)
    parent = np.full(n_max, -1, dtype=np.int64)
    children: list[list[int]] = [[]]
    pts[0] = start
    cost[0] = 0.0
    n = 1

    goal_nodes: list[int] = []
    best_trace: list[float] = []
    rewire_sq = cfg.rewire_radius * cfg.rewire_radius

    def propagate(root: int, delta: float) -> None:
        stack = [root]
        while stack:
            node = stack.pop()
            cost[node] += delta
            stack.extend(children[node])

    for _ in range(cfg.max_iterations):
        if rng.uniform() < cfg.goal_bias:
            sample = goal.copy()
        else:
            sample = rng.uniform(size=2) * (hi - lo) + lo

        diff = pts[:n] - sample
        d2 = diff[:, 0] ** 2 + diff[:, 1] ** 2
        nearest = int(np.argmin(d2))
        dist = math.sqrt(d2[nearest])
        if dist == 0.0:
            if record_trace:
                best_trace.append(min((cost[g] for g in goal_nodes), default=math.inf))
            continue
        step = min(cfg.step_size, dist)
        new = pts[nearest] + (sample - pts[nearest]) * (step / dist)

        if collides(new):
            if record_trace:
                best_trace.append(min((cost[g] for g in goal_nodes), default=math.inf))
            continue

        ndiff = pts[:n] - new
        nd2 = ndiff[:, 0] ** 2 + ndiff[:, 1] ** 2
        near_mask = nd2 <= rewire_sq
        near_idx = np.nonzero(near_mask)[0]
        nd = np.sqrt(nd2[near_idx])

        # cheapest parent among the neighborhood (nearest is always in it
        # when the rewire radius covers step_size; include it regardless)
        cand_cost = cost[near_idx] + nd
        if near_idx.size:
            best = int(np.argmin(cand_cost))
            par = int(near_idx[best])
            new_cost = float(cand_cost[best])
        else:
            par = nearest
            new_cost = float(cost[nearest] + math.sqrt(nd2[nearest]))

        node = n
        pts[node] = new
        cost[node] = new_cost
        parent[node] = par
        children.append([])
        children[par].append(node)
        n += 1

        # rewire neighbors through the new node where that is cheaper
        for k, idx in enumerate(near_idx):
            idx = int(idx)
            if idx == par:
                continue
            alt = new_cost + nd[k]
            if alt < cost[idx]:
                old_par = int(parent[idx])
                if old_par >= 0:
                    children[old_par].remove(idx)
                parent[idx] = node
                children[node].append(idx)
                propagate(idx, alt - cost[idx])

        if np.hypot(new[0] - goal[0], new[1] - goal[1]) <= scenario.goal_radius:
            goal_nodes.append(node)
        if record_trace:
            best_trace.append(min((cost[g] for g in goal_nodes), default=math.inf))

    elapsed = time.perf_counter() - t0
    stats = PlanStats(planning_time=elapsed, iterations=cfg.max_iterations)
    result_trace = best_trace if record_trace else None

    if not goal_nodes:
        return PlanResult(
            path=None,
            cost=None,
            certificate=Certificate.ITERATION_BUDGET_EXHAUSTED,
            stats=stats,
            best_cost_trace=result_trace,
        )

    best_goal = min(goal_nodes, key=lambda g: (cost[g], g))
    cells = [best_goal]
    while parent[cells[-1]] >= 0:
        cells.append(int(parent[cells[-1]]))
    cells.reverse()
    path = [Point3(float(pts[i][0]), float(pts[i][1]), plane_z) for i in cells]
    return PlanResult(
        path=path,
        cost=float(cost[best_goal]),
        certificate=None,
        stats=stats,
        best_cost_trace=result_trace,
    )
