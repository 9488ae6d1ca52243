"""Planner outcome types."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .geometry import Point3


class Certificate(enum.Enum):
    # A* queue exhaustion proves nonexistence on the grid; RRT* budget
    # exhaustion is only probabilistic evidence.
    QUEUE_EXHAUSTED = "queue_exhausted"
    ITERATION_BUDGET_EXHAUSTED = "iteration_budget_exhausted"


@dataclass(frozen=True)
class PlanStats:
    planning_time: float = 0.0
    expanded_nodes: Optional[int] = None
    iterations: Optional[int] = None


@dataclass(frozen=True)
class PlanResult:
    path: Optional[list[Point3]]
    cost: Optional[float]
    certificate: Optional[Certificate]
    stats: PlanStats = field(default_factory=PlanStats)
    # per-iteration best goal cost, recorded on request (RRT* only)
    best_cost_trace: Optional[list[float]] = None

    @property
    def found(self) -> bool:
        return self.path is not None

    def to_json(self) -> dict:
        out: dict = {
            "found": self.found,
            "stats": {
                "planning_time": self.stats.planning_time,
                "expanded_nodes": self.stats.expanded_nodes,
                "iterations": self.stats.iterations,
            },
        }
        if self.found:
            out["path"] = [[p.x, p.y, p.z] for p in self.path]
            out["cost"] = self.cost
        else:
            out["certificate"] = self.certificate.value
        return out
