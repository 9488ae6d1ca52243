"""Geometric primitives and the constraint-predicate expression tree.

A constraint expression is a composable predicate over 3D points: it
evaluates to True where a point is *forbidden*. Leaves are analytic
regions (boxes, spheres, half-spaces, camera frustums, a hemispherical
heat-dissipation field) or externally-served predicates; inner nodes are
boolean combinators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import ExternalUnavailable, GeometryError

_TWO_PI = 2.0 * math.pi


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise GeometryError(f"{name}: non-finite component {v!r}")


@dataclass(frozen=True)
class Point3:
    """A workspace coordinate in meters."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        _require_finite("Point3", self.x, self.y, self.z)

    def to_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=np.float64)

    def distance_to(self, other: "Point3") -> float:
        return math.dist((self.x, self.y, self.z), (other.x, other.y, other.z))

    @staticmethod
    def from_seq(seq: Sequence[float]) -> "Point3":
        if len(seq) != 3:
            raise GeometryError(f"expected 3 coordinates, got {len(seq)}")
        return Point3(float(seq[0]), float(seq[1]), float(seq[2]))


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned bounding box. Degenerate (zero-volume) boxes are allowed."""

    min: Point3
    max: Point3

    def __post_init__(self) -> None:
        if self.min.x > self.max.x or self.min.y > self.max.y or self.min.z > self.max.z:
            raise GeometryError(f"Aabb min {self.min} exceeds max {self.max}")

    def contains(self, p: Point3) -> bool:
        """Strict-inequality interior test on all three axes."""
        return (
            self.min.x < p.x < self.max.x
            and self.min.y < p.y < self.max.y
            and self.min.z < p.z < self.max.z
        )

    def contains_closed(self, p: Point3, tol: float = 0.0) -> bool:
        return (
            self.min.x - tol <= p.x <= self.max.x + tol
            and self.min.y - tol <= p.y <= self.max.y + tol
            and self.min.z - tol <= p.z <= self.max.z + tol
        )

    def contains_box(self, other: "Aabb") -> bool:
        return self.contains_closed(other.min) and self.contains_closed(other.max)

    def center(self) -> Point3:
        return Point3(
            0.5 * (self.min.x + self.max.x),
            0.5 * (self.min.y + self.max.y),
            0.5 * (self.min.z + self.max.z),
        )

    def extent(self) -> tuple[float, float, float]:
        return (
            self.max.x - self.min.x,
            self.max.y - self.min.y,
            self.max.z - self.min.z,
        )

    def volume(self) -> float:
        ex, ey, ez = self.extent()
        return ex * ey * ez

    def inflate(self, margin: float) -> "Aabb":
        if margin < 0:
            raise GeometryError("margin must be >= 0")
        return Aabb(
            Point3(self.min.x - margin, self.min.y - margin, self.min.z - margin),
            Point3(self.max.x + margin, self.max.y + margin, self.max.z + margin),
        )

    def union(self, other: "Aabb") -> "Aabb":
        return Aabb(
            Point3(
                min(self.min.x, other.min.x),
                min(self.min.y, other.min.y),
                min(self.min.z, other.min.z),
            ),
            Point3(
                max(self.max.x, other.max.x),
                max(self.max.y, other.max.y),
                max(self.max.z, other.max.z),
            ),
        )

    def intersect(self, other: "Aabb") -> Optional["Aabb"]:
        """Intersection box, or None when the boxes are disjoint."""
        lo = (
            max(self.min.x, other.min.x),
            max(self.min.y, other.min.y),
            max(self.min.z, other.min.z),
        )
        hi = (
            min(self.max.x, other.max.x),
            min(self.max.y, other.max.y),
            min(self.max.z, other.max.z),
        )
        if lo[0] > hi[0] or lo[1] > hi[1] or lo[2] > hi[2]:
            return None
        return Aabb(Point3(*lo), Point3(*hi))

    @staticmethod
    def from_seqs(lo: Sequence[float], hi: Sequence[float]) -> "Aabb":
        return Aabb(Point3.from_seq(lo), Point3.from_seq(hi))


# --------------------------------------------------------------------------
# Constraint expression nodes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BoxRegion:
    """Inside the margin-inflated box (strict interior)."""

    box: Aabb
    margin: float = 0.0

    def __post_init__(self) -> None:
        if self.margin < 0 or not math.isfinite(self.margin):
            raise GeometryError("Box margin must be finite and >= 0")

    def inflated(self) -> Aabb:
        return self.box.inflate(self.margin)


@dataclass(frozen=True)
class SphereRegion:
    center: Point3
    radius: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise GeometryError("Sphere radius must be finite and > 0")


@dataclass(frozen=True)
class HalfSpaceRegion:
    """Forbidden where normal . p < offset."""

    normal: tuple[float, float, float]
    offset: float

    def __post_init__(self) -> None:
        _require_finite("HalfSpace", *self.normal, self.offset)
        norm = math.sqrt(sum(c * c for c in self.normal))
        if abs(norm - 1.0) > 1e-9:
            raise GeometryError("HalfSpace normal must be a unit vector")


@dataclass(frozen=True)
class FrustumRegion:
    """Camera field-of-view wedge in the xy-plane, extruded in z.

    A point is forbidden iff its horizontal distance to the apex lies in
    [near_clip, far_clip] and the xy-angle of (p - apex) is within
    horizontal_fov / 2 of the yaw. With z_min / z_max unset the wedge
    extends over all z (callers clamp to workspace bounds when boxing).
    """

    apex: Point3
    yaw: float
    horizontal_fov: float
    near_clip: float
    far_clip: float
    z_min: Optional[float] = None
    z_max: Optional[float] = None

    def __post_init__(self) -> None:
        _require_finite("Frustum", self.yaw, self.horizontal_fov, self.near_clip, self.far_clip)
        if not 0.0 < self.horizontal_fov < math.pi:
            raise GeometryError("horizontal_fov must be in (0, pi)")
        if self.near_clip < 0 or self.far_clip <= self.near_clip:
            raise GeometryError("require 0 <= near_clip < far_clip")
        if (self.z_min is None) != (self.z_max is None):
            raise GeometryError("z_min and z_max must be set together")
        if self.z_min is not None and self.z_min > self.z_max:
            raise GeometryError("z_min must not exceed z_max")


@dataclass(frozen=True)
class HeatFieldRegion:
    """Hemispherical heat-dissipation hazard around a point source.

    Forbidden iff inside source_box, or the radiated intensity
    h0 * (1 - alpha) / (4 pi d^2) exceeds h_safe, or d < d_safe,
    where d is the Euclidean distance to the source.
    """

    source: Point3
    source_box: Aabb
    h0: float
    alpha: float
    h_safe: float
    d_safe: float

    def __post_init__(self) -> None:
        _require_finite("HeatField", self.h0, self.alpha, self.h_safe, self.d_safe)
        if self.h0 <= 0 or self.h_safe <= 0 or self.d_safe < 0:
            raise GeometryError("require h0 > 0, h_safe > 0, d_safe >= 0")
        if not 0.0 <= self.alpha <= 1.0:
            raise GeometryError("alpha must be in [0, 1]")

    def intensity_radius(self) -> float:
        """Distance at which intensity drops to exactly h_safe."""
        return math.sqrt(self.h0 * (1.0 - self.alpha) / (4.0 * math.pi * self.h_safe))

    def forbidden_radius(self) -> float:
        return max(self.d_safe, self.intensity_radius())


@dataclass(frozen=True)
class And:
    children: tuple["ConstraintExpr", ...]

    def __post_init__(self) -> None:
        if not self.children:
            raise GeometryError("And requires at least one child")


@dataclass(frozen=True)
class Or:
    children: tuple["ConstraintExpr", ...]

    def __post_init__(self) -> None:
        if not self.children:
            raise GeometryError("Or requires at least one child")


@dataclass(frozen=True)
class Not:
    child: "ConstraintExpr"


@dataclass(frozen=True, eq=False)
class ExternalRegion:
    """Predicate delegated to a bridge session; evaluated in batches."""

    handle: str
    bbox: Optional[Aabb] = None
    # (n, 3) float array -> (n,) bool array; attached when a session resolves
    # the handle. Excluded from equality so resolved nodes still compare.
    evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = field(
        default=None, compare=False, repr=False
    )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExternalRegion) and other.handle == self.handle

    def __hash__(self) -> int:
        return hash(("external", self.handle))


ConstraintExpr = Union[
    BoxRegion,
    SphereRegion,
    HalfSpaceRegion,
    FrustumRegion,
    HeatFieldRegion,
    And,
    Or,
    Not,
    ExternalRegion,
]


def _wrap_angle(a):
    """Wrap to (-pi, pi]; works for scalars and arrays."""
    return (a + math.pi) % _TWO_PI - math.pi


def evaluate(expr: ConstraintExpr, p: Point3) -> bool:
    """True iff p is forbidden by expr. Pure and deterministic."""
    if isinstance(expr, BoxRegion):
        return expr.inflated().contains(p)
    if isinstance(expr, SphereRegion):
        return p.distance_to(expr.center) < expr.radius
    if isinstance(expr, HalfSpaceRegion):
        nx, ny, nz = expr.normal
        return nx * p.x + ny * p.y + nz * p.z < expr.offset
    if isinstance(expr, FrustumRegion):
        dx, dy = p.x - expr.apex.x, p.y - expr.apex.y
        r = math.hypot(dx, dy)
        if not expr.near_clip <= r <= expr.far_clip:
            return False
        if expr.z_min is not None and not expr.z_min <= p.z <= expr.z_max:
            return False
        if r == 0.0:
            return True  # apex itself: only reachable when near_clip == 0
        off = _wrap_angle(math.atan2(dy, dx) - expr.yaw)
        return abs(off) <= 0.5 * expr.horizontal_fov
    if isinstance(expr, HeatFieldRegion):
        if expr.source_box.contains(p):
            return True
        d = p.distance_to(expr.source)
        if d < expr.d_safe:
            return True
        if d == 0.0:
            return True
        return expr.h0 * (1.0 - expr.alpha) / (4.0 * math.pi * d * d) > expr.h_safe
    if isinstance(expr, And):
        return all(evaluate(c, p) for c in expr.children)
    if isinstance(expr, Or):
        return any(evaluate(c, p) for c in expr.children)
    if isinstance(expr, Not):
        return not evaluate(expr.child, p)
    if isinstance(expr, ExternalRegion):
        if expr.evaluator is None:
            raise ExternalUnavailable(f"external constraint {expr.handle!r} has no session")
        return bool(expr.evaluator(np.array([[p.x, p.y, p.z]]))[0])
    raise TypeError(f"not a constraint expression: {expr!r}")


def evaluate_many(expr: ConstraintExpr, pts: np.ndarray) -> np.ndarray:
    """Vectorized evaluate over an (n, 3) array; returns an (n,) bool mask."""
    pts = np.asarray(pts, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise GeometryError(f"expected an (n, 3) array, got shape {pts.shape}")
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    if isinstance(expr, BoxRegion):
        b = expr.inflated()
        return (
            (b.min.x < x) & (x < b.max.x)
            & (b.min.y < y) & (y < b.max.y)
            & (b.min.z < z) & (z < b.max.z)
        )
    if isinstance(expr, SphereRegion):
        c = expr.center
        d2 = (x - c.x) ** 2 + (y - c.y) ** 2 + (z - c.z) ** 2
        return d2 < expr.radius * expr.radius
    if isinstance(expr, HalfSpaceRegion):
        nx, ny, nz = expr.normal
        return nx * x + ny * y + nz * z < expr.offset
    if isinstance(expr, FrustumRegion):
        dx, dy = x - expr.apex.x, y - expr.apex.y
        r = np.hypot(dx, dy)
        mask = (r >= expr.near_clip) & (r <= expr.far_clip)
        if expr.z_min is not None:
            mask &= (z >= expr.z_min) & (z <= expr.z_max)
        off = _wrap_angle(np.arctan2(dy, dx) - expr.yaw)
        in_cone = np.abs(off) <= 0.5 * expr.horizontal_fov
        in_cone |= r == 0.0
        return mask & in_cone
    if isinstance(expr, HeatFieldRegion):
        b, s = expr.source_box, expr.source
        inside = (
            (b.min.x < x) & (x < b.max.x)
            & (b.min.y < y) & (y < b.max.y)
            & (b.min.z < z) & (z < b.max.z)
        )
        d2 = (x - s.x) ** 2 + (y - s.y) ** 2 + (z - s.z) ** 2
        with np.errstate(divide="ignore"):
            hot = expr.h0 * (1.0 - expr.alpha) / (4.0 * math.pi * d2) > expr.h_safe
        return inside | hot | (d2 < expr.d_safe * expr.d_safe) | (d2 == 0.0)
    if isinstance(expr, And):
        mask = evaluate_many(expr.children[0], pts)
        for c in expr.children[1:]:
            mask &= evaluate_many(c, pts)
        return mask
    if isinstance(expr, Or):
        mask = evaluate_many(expr.children[0], pts)
        for c in expr.children[1:]:
            mask |= evaluate_many(c, pts)
        return mask
    if isinstance(expr, Not):
        return ~evaluate_many(expr.child, pts)
    if isinstance(expr, ExternalRegion):
        if expr.evaluator is None:
            raise ExternalUnavailable(f"external constraint {expr.handle!r} has no session")
        return np.asarray(expr.evaluator(pts), dtype=bool)
    raise TypeError(f"not a constraint expression: {expr!r}")


# --------------------------------------------------------------------------
# Over-approximating bounding boxes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundingResult:
    """Box containing every forbidden point, clipped to the workspace.

    clamped is True when the analytic region had no finite
    over-approximation and the workspace bounds were substituted.
    """

    box: Aabb
    clamped: bool = False


def _frustum_hull(f: FrustumRegion, bounds: Aabb) -> Aabb:
    lo = f.yaw - 0.5 * f.horizontal_fov
    hi = f.yaw + 0.5 * f.horizontal_fov
    angles = [lo, hi]
    # axis-aligned extremes of the far arc that fall inside the wedge
    k_lo = math.ceil(lo / (0.5 * math.pi))
    k = k_lo
    while k * 0.5 * math.pi <= hi:
        angles.append(k * 0.5 * math.pi)
        k += 1
    xs = [f.apex.x] + [f.apex.x + f.far_clip * math.cos(a) for a in angles]
    ys = [f.apex.y] + [f.apex.y + f.far_clip * math.sin(a) for a in angles]
    z_lo = bounds.min.z if f.z_min is None else f.z_min
    z_hi = bounds.max.z if f.z_max is None else f.z_max
    return Aabb(Point3(min(xs), min(ys), z_lo), Point3(max(xs), max(ys), z_hi))


def _raw_bbox(expr: ConstraintExpr, bounds: Aabb) -> BoundingResult:
    if isinstance(expr, BoxRegion):
        return BoundingResult(expr.inflated())
    if isinstance(expr, SphereRegion):
        c, r = expr.center, expr.radius
        return BoundingResult(
            Aabb(Point3(c.x - r, c.y - r, c.z - r), Point3(c.x + r, c.y + r, c.z + r))
        )
    if isinstance(expr, HalfSpaceRegion):
        return BoundingResult(bounds, clamped=True)
    if isinstance(expr, FrustumRegion):
        return BoundingResult(_frustum_hull(expr, bounds))
    if isinstance(expr, HeatFieldRegion):
        r = expr.forbidden_radius()
        s = expr.source
        ball = Aabb(Point3(s.x - r, s.y - r, s.z - r), Point3(s.x + r, s.y + r, s.z + r))
        return BoundingResult(ball.union(expr.source_box))
    if isinstance(expr, And):
        results = [_raw_bbox(c, bounds) for c in expr.children]
        box: Optional[Aabb] = results[0].box
        for res in results[1:]:
            box = box.intersect(res.box) if box is not None else None
        if box is None:
            # disjoint children: the forbidden set is empty
            return BoundingResult(Aabb(bounds.min, bounds.min))
        return BoundingResult(box, clamped=all(r.clamped for r in results))
    if isinstance(expr, Or):
        results = [_raw_bbox(c, bounds) for c in expr.children]
        box = results[0].box
        for res in results[1:]:
            box = box.union(res.box)
        return BoundingResult(box, clamped=any(r.clamped for r in results))
    if isinstance(expr, Not):
        # soundness over precision: the complement may touch anything
        return BoundingResult(bounds, clamped=True)
    if isinstance(expr, ExternalRegion):
        if expr.bbox is None:
            raise ExternalUnavailable(
                f"external constraint {expr.handle!r} has no bridge-provided bbox"
            )
        return BoundingResult(expr.bbox)
    raise TypeError(f"not a constraint expression: {expr!r}")


def forbidden_region_bbox(expr: ConstraintExpr, bounds: Aabb) -> BoundingResult:
    """Over-approximating box of the forbidden region, clipped to bounds."""
    raw = _raw_bbox(expr, bounds)
    clipped = raw.box.intersect(bounds)
    if clipped is None:
        # region lies entirely outside the workspace
        clipped = Aabb(bounds.min, bounds.min)
    return BoundingResult(clipped, clamped=raw.clamped)


# --------------------------------------------------------------------------
# Environment model
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SceneObject:
    name: str
    box: Aabb


@dataclass(frozen=True)
class EnvironmentModel:
    """Static objects (bounding-box over-approximations) and workspace extent."""

    objects: tuple[SceneObject, ...]
    bounds: Aabb

    def __post_init__(self) -> None:
        names = [o.name for o in self.objects]
        if len(set(names)) != len(names):
            raise GeometryError("object names must be unique")
        for o in self.objects:
            if not self.bounds.contains_box(o.box):
                raise GeometryError(f"object {o.name!r} extends past workspace bounds")

    def object_named(self, name: str) -> SceneObject:
        for o in self.objects:
            if o.name == name:
                return o
        raise KeyError(name)


def contains(box: Aabb, p: Point3) -> bool:
    """Strict-interior collision test against a static object box."""
    return box.contains(p)


# --------------------------------------------------------------------------
# JSON encoding
# --------------------------------------------------------------------------


def _point_json(p: Point3) -> list[float]:
    return [p.x, p.y, p.z]


def _box_json(b: Aabb) -> dict:
    return {"min": _point_json(b.min), "max": _point_json(b.max)}


def expr_to_json(expr: ConstraintExpr) -> dict:
    """Canonical JSON encoding (kind tag + parameters)."""
    if isinstance(expr, BoxRegion):
        return {"kind": "box", **_box_json(expr.box), "margin": expr.margin}
    if isinstance(expr, SphereRegion):
        return {"kind": "sphere", "center": _point_json(expr.center), "radius": expr.radius}
    if isinstance(expr, HalfSpaceRegion):
        return {"kind": "half_space", "normal": list(expr.normal), "offset": expr.offset}
    if isinstance(expr, FrustumRegion):
        out = {
            "kind": "frustum",
            "apex": _point_json(expr.apex),
            "yaw": expr.yaw,
            "horizontal_fov": expr.horizontal_fov,
            "near_clip": expr.near_clip,
            "far_clip": expr.far_clip,
        }
        if expr.z_min is not None:
            out["z_min"] = expr.z_min
            out["z_max"] = expr.z_max
        return out
    if isinstance(expr, HeatFieldRegion):
        return {
            "kind": "heat_field",
            "source": _point_json(expr.source),
            "source_box": _box_json(expr.source_box),
            "h0": expr.h0,
            "alpha": expr.alpha,
            "h_safe": expr.h_safe,
            "d_safe": expr.d_safe,
        }
    if isinstance(expr, And):
        return {"kind": "and", "children": [expr_to_json(c) for c in expr.children]}
    if isinstance(expr, Or):
        return {"kind": "or", "children": [expr_to_json(c) for c in expr.children]}
    if isinstance(expr, Not):
        return {"kind": "not", "child": expr_to_json(expr.child)}
    if isinstance(expr, ExternalRegion):
        out = {"kind": "external", "handle": expr.handle}
        if expr.bbox is not None:
            out["bbox"] = _box_json(expr.bbox)
        return out
    raise TypeError(f"not a constraint expression: {expr!r}")


def expr_from_json(doc: dict) -> ConstraintExpr:
    try:
        kind = doc["kind"]
    except (KeyError, TypeError):
        raise GeometryError("constraint node is missing its 'kind' tag") from None
    if kind == "box":
        return BoxRegion(Aabb.from_seqs(doc["min"], doc["max"]), float(doc.get("margin", 0.0)))
    if kind == "sphere":
        return SphereRegion(Point3.from_seq(doc["center"]), float(doc["radius"]))
    if kind == "half_space":
        return HalfSpaceRegion(tuple(float(v) for v in doc["normal"]), float(doc["offset"]))
    if kind == "frustum":
        return FrustumRegion(
            Point3.from_seq(doc["apex"]),
            float(doc["yaw"]),
            float(doc["horizontal_fov"]),
            float(doc["near_clip"]),
            float(doc["far_clip"]),
            z_min=float(doc["z_min"]) if "z_min" in doc else None,
            z_max=float(doc["z_max"]) if "z_max" in doc else None,
        )
    if kind == "heat_field":
        sb = doc["source_box"]
        return HeatFieldRegion(
            Point3.from_seq(doc["source"]),
            Aabb.from_seqs(sb["min"], sb["max"]),
            float(doc["h0"]),
            float(doc["alpha"]),
            float(doc["h_safe"]),
            float(doc["d_safe"]),
        )
    if kind == "and":
        return And(tuple(expr_from_json(c) for c in doc["children"]))
    if kind == "or":
        return Or(tuple(expr_from_json(c) for c in doc["children"]))
    if kind == "not":
        return Not(expr_from_json(doc["child"]))
    if kind == "external":
        bbox = None
        if "bbox" in doc:
            bb = doc["bbox"]
            bbox = Aabb.from_seqs(bb["min"], bb["max"])
        return ExternalRegion(str(doc["handle"]), bbox=bbox)
    raise GeometryError(f"unknown constraint kind {kind!r}")
