"""Load scene and scenario documents into planning-ready models.

Both file formats are JSON and validated against the schemas shipped in
stpr/schemas/. Fixture and environment references inside a scenario are
resolved relative to the scenario file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional, Union

import jsonschema

from .errors import (
    GeometryError,
    ParseError,
    SchemaError,
    StartInForbiddenRegion,
    UnknownFixture,
)
from .geometry import (
    Aabb,
    ConstraintExpr,
    EnvironmentModel,
    Point3,
    SceneObject,
    evaluate,
    expr_from_json,
    expr_to_json,
)

DEFAULT_GRID_RESOLUTION = 0.1
DEFAULT_ROBOT_RADIUS = 0.25
DEFAULT_SAMPLE_COUNT = 1000


@dataclass(frozen=True)
class RrtConfig:
    max_iterations: int = 20000
    step_size: float = 0.25
    goal_bias: float = 0.05
    rewire_radius: float = 1.0

    def __post_init__(self) -> None:
        if self.max_iterations < 1 or self.step_size <= 0 or self.rewire_radius <= 0:
            raise SchemaError("invalid RRT* configuration")
        if not 0.0 <= self.goal_bias <= 1.0:
            raise SchemaError("goal_bias must be in [0, 1]")


@dataclass(frozen=True)
class BridgeRequest:
    """Unresolved constraint: generated through the bridge at planning time."""

    instruction: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Constraint:
    label: str
    expr: Optional[ConstraintExpr] = None
    bridge: Optional[BridgeRequest] = None

    def __post_init__(self) -> None:
        if (self.expr is None) == (self.bridge is None):
            raise SchemaError(f"constraint {self.label!r}: exactly one of expr/bridge required")


@dataclass(frozen=True)
class Scenario:
    name: str
    environment: EnvironmentModel
    start: Point3
    goal: Point3
    goal_radius: float
    robot_radius: float
    constraints: tuple[Constraint, ...]
    sample_count: int
    grid_resolution: float
    rrt: RrtConfig
    rng_seed: int
    solvable: Optional[bool] = None  # declared ground truth, None = unknown

    def with_sample_count(self, k: int) -> "Scenario":
        return replace(self, sample_count=k)

    def resolved_constraints(self) -> tuple[Constraint, ...]:
        return tuple(c for c in self.constraints if c.expr is not None)


def _load_schema(name: str) -> dict:
    text = resources.files("stpr.schemas").joinpath(name).read_text(encoding="utf-8")
    return json.loads(text)


def _read_json(source: Union[str, Path, dict]) -> dict:
    if isinstance(source, dict):
        return source
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: {exc}") from exc


def _validate(doc: dict, schema_name: str) -> None:
    try:
        jsonschema.validate(doc, _load_schema(schema_name))
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"{schema_name}: {exc.message}") from exc


def load_environment(source: Union[str, Path, dict]) -> EnvironmentModel:
    doc = _read_json(source)
    _validate(doc, "scene.schema.json")
    bounds = Aabb.from_seqs(doc["bounds"]["min"], doc["bounds"]["max"])
    objects = tuple(
        SceneObject(o["name"], Aabb.from_seqs(o["min"], o["max"])) for o in doc["objects"]
    )
    return EnvironmentModel(objects=objects, bounds=bounds)


def environment_to_json(env: EnvironmentModel) -> dict:
    return {
        "bounds": {
            "min": [env.bounds.min.x, env.bounds.min.y, env.bounds.min.z],
            "max": [env.bounds.max.x, env.bounds.max.y, env.bounds.max.z],
        },
        "objects": [
            {
                "name": o.name,
                "min": [o.box.min.x, o.box.min.y, o.box.min.z],
                "max": [o.box.max.x, o.box.max.y, o.box.max.z],
            }
            for o in env.objects
        ],
    }


def _parse_constraint(entry: dict, base_dir: Optional[Path]) -> Constraint:
    label = entry["label"]
    if "expr" in entry:
        return Constraint(label=label, expr=expr_from_json(entry["expr"]))
    if "fixture" in entry:
        ref = Path(entry["fixture"])
        if not ref.is_absolute():
            if base_dir is None:
                raise UnknownFixture(f"{label}: relative fixture {ref} without a base path")
            ref = base_dir / ref
        if not ref.exists():
            raise UnknownFixture(f"{label}: fixture file {ref} not found")
        return Constraint(label=label, expr=expr_from_json(_read_json(ref)))
    if "bridge" in entry:
        b = entry["bridge"]
        return Constraint(
            label=label,
            bridge=BridgeRequest(instruction=b["instruction"], params=b.get("params", {})),
        )
    raise SchemaError(f"constraint {label!r} has no expr, fixture, or bridge entry")


def load_scenario(
    source: Union[str, Path, dict],
    env: Optional[EnvironmentModel] = None,
) -> Scenario:
    doc = _read_json(source)
    _validate(doc, "scenario.schema.json")
    base_dir = Path(source).parent if not isinstance(source, dict) else None

    if env is None:
        env_ref = doc.get("environment")
        if env_ref is None:
            raise SchemaError("scenario has no inline env and no environment reference")
        if isinstance(env_ref, dict):
            env = load_environment(env_ref)
        else:
            ref = Path(env_ref)
            if not ref.is_absolute():
                if base_dir is None:
                    raise ParseError(f"relative environment reference {ref} without a base path")
                ref = base_dir / ref
            env = load_environment(ref)

    start = Point3.from_seq(doc["start"])
    goal = Point3.from_seq(doc["goal"])
    robot_radius = float(doc.get("robot_radius", DEFAULT_ROBOT_RADIUS))
    if robot_radius <= 0:
        raise SchemaError("robot_radius must be > 0")
    goal_radius = float(doc.get("goal_radius", robot_radius))
    constraints = tuple(_parse_constraint(e, base_dir) for e in doc.get("constraints", []))

    if not env.bounds.contains_closed(start):
        raise GeometryError("start lies outside the workspace bounds")
    if not env.bounds.contains_closed(goal):
        raise GeometryError("goal lies outside the workspace bounds")
    for c in constraints:
        if c.expr is not None and evaluate(c.expr, start):
            raise StartInForbiddenRegion(f"start is forbidden by constraint {c.label!r}")

    rrt_doc = doc.get("rrt", {})
    scenario = Scenario(
        name=doc.get("name", Path(source).stem if not isinstance(source, dict) else "scenario"),
        environment=env,
        start=start,
        goal=goal,
        goal_radius=goal_radius,
        robot_radius=robot_radius,
        constraints=constraints,
        sample_count=int(doc.get("sample_count", DEFAULT_SAMPLE_COUNT)),
        grid_resolution=float(doc.get("grid_resolution", DEFAULT_GRID_RESOLUTION)),
        rrt=RrtConfig(
            max_iterations=int(rrt_doc.get("max_iterations", 20000)),
            step_size=float(rrt_doc.get("step_size", 0.25)),
            goal_bias=float(rrt_doc.get("goal_bias", 0.05)),
            rewire_radius=float(rrt_doc.get("rewire_radius", 1.0)),
        ),
        rng_seed=int(doc.get("rng_seed", 0)),
        solvable=doc.get("solvable"),
    )
    if scenario.sample_count < 1 or scenario.grid_resolution <= 0:
        raise SchemaError("sample_count must be >= 1 and grid_resolution > 0")
    return scenario


def scenario_to_json(scenario: Scenario) -> dict:
    """Inline serialization; resolves fixtures and keeps bridge descriptors."""
    out = {
        "name": scenario.name,
        "environment": environment_to_json(scenario.environment),
        "start": [scenario.start.x, scenario.start.y, scenario.start.z],
        "goal": [scenario.goal.x, scenario.goal.y, scenario.goal.z],
        "goal_radius": scenario.goal_radius,
        "robot_radius": scenario.robot_radius,
        "constraints": [],
        "sample_count": scenario.sample_count,
        "grid_resolution": scenario.grid_resolution,
        "rrt": {
            "max_iterations": scenario.rrt.max_iterations,
            "step_size": scenario.rrt.step_size,
            "goal_bias": scenario.rrt.goal_bias,
            "rewire_radius": scenario.rrt.rewire_radius,
        },
        "rng_seed": scenario.rng_seed,
    }
    if scenario.solvable is not None:
        out["solvable"] = scenario.solvable
    for c in scenario.constraints:
        if c.expr is not None:
            out["constraints"].append({"label": c.label, "expr": expr_to_json(c.expr)})
        else:
            out["constraints"].append(
                {
                    "label": c.label,
                    "bridge": {"instruction": c.bridge.instruction, "params": c.bridge.params},
                }
            )
    return out
