"""Independent path validation against analytic constraints and object boxes.

This is the oracle side of the dual check: it never touches the sampled
point clouds or the kd-tree. Every path segment is re-sampled at a fine
spacing and each sample point is tested directly against every constraint
expression and every static object box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .geometry import ConstraintExpr, EnvironmentModel, Point3, evaluate


@dataclass(frozen=True)
class Violation:
    segment_index: int
    point: Point3
    label: str


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violation: Optional[Violation]
    segments_checked: int
    points_checked: int

    def to_json(self) -> dict:
        out: dict = {
            "valid": self.valid,
            "segments_checked": self.segments_checked,
            "points_checked": self.points_checked,
        }
        if self.violation is not None:
            v = self.violation
            out["violation"] = {
                "segment_index": v.segment_index,
                "point": [v.point.x, v.point.y, v.point.z],
                "label": v.label,
            }
        return out


def _check_point(
    p: Point3,
    constraints: Sequence[tuple[str, ConstraintExpr]],
    env: EnvironmentModel,
    segment_index: int,
) -> Optional[Violation]:
    for label, expr in constraints:
        if evaluate(expr, p):
            return Violation(segment_index, p, label)
    for obj in env.objects:
        if obj.box.contains(p):
            return Violation(segment_index, p, obj.name)
    return None


def validate_path(
    path: Sequence[Point3],
    constraints: Sequence[tuple[str, ConstraintExpr]],
    env: EnvironmentModel,
    step: float = 0.01,
) -> ValidationReport:
    """Report the first violation along the path, or a clean result.

    Each segment is sampled at a spacing of at most `step`, endpoints
    included. An empty path is trivially clean.
    """
    if step <= 0:
        raise ValueError("step must be > 0")
    if not path:
        return ValidationReport(valid=True, violation=None, segments_checked=0, points_checked=0)

    points_checked = 1
    first = _check_point(path[0], constraints, env, 0)
    if first is not None:
        return ValidationReport(False, first, 0, points_checked)

    for seg, (a, b) in enumerate(zip(path[:-1], path[1:])):
        length = a.distance_to(b)
        n = max(1, int(math.ceil(length / step)))
        for t in range(1, n + 1):
            frac = t / n
            p = Point3(
                a.x + frac * (b.x - a.x),
                a.y + frac * (b.y - a.y),
                a.z + frac * (b.z - a.z),
            )
            points_checked += 1
            hit = _check_point(p, constraints, env, seg)
            if hit is not None:
                return ValidationReport(False, hit, seg + 1, points_checked)
    return ValidationReport(True, None, len(path) - 1, points_checked)
