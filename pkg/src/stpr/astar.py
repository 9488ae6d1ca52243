"""A* on an 8-connected grid with Euclidean heuristic and kd-tree pruning.

Planning happens in the z = plane_z slice: grid cells are 2D, but every
collision query goes against the full 3D point-cloud index at
(x, y, plane_z). Axis steps cost one resolution, diagonal steps sqrt(2)
resolutions, so path cost equals the summed Euclidean segment lengths.
Queue exhaustion is a completeness certificate: no collision-free grid
path exists.
"""

from __future__ import annotations

import heapq
import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import GeometryError, GoalRegionEmpty, StartBlocked
from .geometry import Aabb, Point3
from .planresult import Certificate, PlanResult, PlanStats
from .sampling import PointCloudIndex
from .scene import Scenario

_SQRT2 = math.sqrt(2.0)

# 8-connected moves and their costs in cell units
_MOVES = (
    (1, 0, 1.0), (-1, 0, 1.0), (0, 1, 1.0), (0, -1, 1.0),
    (1, 1, _SQRT2), (1, -1, _SQRT2), (-1, 1, _SQRT2), (-1, -1, _SQRT2),
)


@dataclass(frozen=True)
class GridSpec:
    origin: Point3  # center of cell (0, 0)
    resolution: float
    nx: int
    ny: int
    plane_z: float = 0.0

    def __post_init__(self) -> None:
        if self.resolution <= 0 or self.nx < 1 or self.ny < 1:
            raise GeometryError("grid needs resolution > 0 and nx*ny >= 1")

    @staticmethod
    def from_bounds(bounds: Aabb, resolution: float, plane_z: float = 0.0) -> "GridSpec":
        nx = int(math.floor((bounds.max.x - bounds.min.x) / resolution)) + 1
        ny = int(math.floor((bounds.max.y - bounds.min.y) / resolution)) + 1
        return GridSpec(
            origin=Point3(bounds.min.x, bounds.min.y, plane_z),
            resolution=resolution,
            nx=nx,
            ny=ny,
            plane_z=plane_z,
        )

    def cell_center(self, i: int, j: int) -> Point3:
        return Point3(
            self.origin.x + i * self.resolution,
            self.origin.y + j * self.resolution,
            self.plane_z,
        )

    def nearest_cell(self, p: Point3) -> tuple[int, int]:
        i = round((p.x - self.origin.x) / self.resolution)
        j = round((p.y - self.origin.y) / self.resolution)
        return min(max(i, 0), self.nx - 1), min(max(j, 0), self.ny - 1)

    def cell_centers(self) -> np.ndarray:
        """(nx*ny, 3) array of all cell centers, row-major in (i, j)."""
        xs = self.origin.x + self.resolution * np.arange(self.nx)
        ys = self.origin.y + self.resolution * np.arange(self.ny)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        out = np.empty((self.nx * self.ny, 3))
        out[:, 0] = gx.ravel()
        out[:, 1] = gy.ravel()
        out[:, 2] = self.plane_z
        return out


def compute_blocked(index: Optional[PointCloudIndex], spec: GridSpec, r: float) -> np.ndarray:
    """(nx, ny) mask: True where the cell center collides."""
    if index is None:
        return np.zeros((spec.nx, spec.ny), dtype=bool)
    return index.collides_many(spec.cell_centers(), r).reshape(spec.nx, spec.ny)


def grid_astar(
    blocked: np.ndarray,
    spec: GridSpec,
    start_cell: tuple[int, int],
    goal: Point3,
    goal_radius: float,
) -> tuple[Optional[list[tuple[int, int]]], float, int]:
    """Core search. Returns (cells, cost, expanded); cells is None when the
    queue exhausts without reaching the goal region.

    Tie-breaking on equal f prefers lower h, then the lexicographically
    smaller cell id, so results are fully deterministic.
    """
    nx, ny = spec.nx, spec.ny
    res = spec.resolution

    def h(i: int, j: int) -> float:
        c = spec.cell_center(i, j)
        return max(0.0, math.hypot(c.x - goal.x, c.y - goal.y) - goal_radius)

    def is_goal(i: int, j: int) -> bool:
        c = spec.cell_center(i, j)
        return math.hypot(c.x - goal.x, c.y - goal.y) <= goal_radius

    start = start_cell
    g_score = {start: 0.0}
    came_from: dict[tuple[int, int], tuple[int, int]] = {}
    closed: set[tuple[int, int]] = set()
    h0 = h(*start)
    open_heap: list[tuple[float, float, tuple[int, int]]] = [(h0, h0, start)]
    expanded = 0

    while open_heap:
        f, _, current = heapq.heappop(open_heap)
        if current in closed:
            continue
        closed.add(current)
        expanded += 1
        if is_goal(*current):
            cells = [current]
            while cells[-1] in came_from:
                cells.append(came_from[cells[-1]])
            cells.reverse()
            return cells, g_score[current], expanded
        ci, cj = current
        for di, dj, step in _MOVES:
            ni, nj = ci + di, cj + dj
            if not (0 <= ni < nx and 0 <= nj < ny):
                continue
            if blocked[ni, nj]:
                continue
            nbr = (ni, nj)
            tentative = g_score[current] + step * res
            if tentative < g_score.get(nbr, math.inf):
                g_score[nbr] = tentative
                came_from[nbr] = current
                hn = h(ni, nj)
                heapq.heappush(open_heap, (tentative + hn, hn, nbr))
    return None, math.inf, expanded


def plan_astar(scenario: Scenario, index: Optional[PointCloudIndex]) -> PlanResult:
    t0 = time.perf_counter()
    spec = GridSpec.from_bounds(scenario.environment.bounds, scenario.grid_resolution)
    blocked = compute_blocked(index, spec, scenario.robot_radius)

    start_cell = spec.nearest_cell(scenario.start)
    if blocked[start_cell]:
        raise StartBlocked(f"start cell {start_cell} collides")

    goal = scenario.goal
    # goal-region feasibility check up front, for a crisp error
    reach = int(math.ceil(scenario.goal_radius / spec.resolution)) + 1
    gi, gj = spec.nearest_cell(goal)
    any_goal_cell = False
    for i in range(max(0, gi - reach), min(spec.nx, gi + reach + 1)):
        for j in range(max(0, gj - reach), min(spec.ny, gj + reach + 1)):
            c = spec.cell_center(i, j)
            if math.hypot(c.x - goal.x, c.y - goal.y) <= scenario.goal_radius and not blocked[i, j]:
                any_goal_cell = True
                break
        if any_goal_cell:
            break
    if not any_goal_cell:
        raise GoalRegionEmpty("every grid cell within the goal radius collides")

    cells, cost, expanded = grid_astar(blocked, spec, start_cell, goal, scenario.goal_radius)
    elapsed = time.perf_counter() - t0
    stats = PlanStats(planning_time=elapsed, expanded_nodes=expanded)
    if cells is None:
        return PlanResult(path=None, cost=None, certificate=Certificate.QUEUE_EXHAUSTED, stats=stats)
    path = [spec.cell_center(i, j) for i, j in cells]
    return PlanResult(path=path, cost=cost, certificate=None, stats=stats)
