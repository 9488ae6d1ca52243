"""Constraint-aware path planning from natural-language "what not to do" rules.

Constraint predicates (analytic regions plus boolean combinators) are
rejection-sampled into point clouds, indexed in a kd-tree, and consumed by
grid A* and RRT* planners; an independent analytic validator closes the loop.
"""

from .astar import GridSpec, compute_blocked, grid_astar, plan_astar
from .bench import (
    ALL_METHODS,
    BenchmarkRecord,
    Method,
    aggregate,
    emit_tables,
    records_to_csv,
    run_scenario,
    sample_scenario_clouds,
    timings_to_csv,
)
from .bridge import BridgeSession, resolve_bridge_constraint, resolve_scenario
from .errors import (
    AcceptanceTooLow,
    BridgeError,
    EmptyIndex,
    ExternalUnavailable,
    GeometryError,
    GoalRegionEmpty,
    ParseError,
    SchemaError,
    StartBlocked,
    StartInForbiddenRegion,
    StprError,
    UnknownFixture,
)
from .geometry import (
    Aabb,
    And,
    BoundingResult,
    BoxRegion,
    ConstraintExpr,
    EnvironmentModel,
    ExternalRegion,
    FrustumRegion,
    HalfSpaceRegion,
    HeatFieldRegion,
    Not,
    Or,
    Point3,
    SceneObject,
    SphereRegion,
    evaluate,
    evaluate_many,
    expr_from_json,
    expr_to_json,
    forbidden_region_bbox,
)
from .planresult import Certificate, PlanResult, PlanStats
from .rrtstar import plan_rrtstar
from .sampling import (
    CloudSource,
    PointCloud,
    PointCloudIndex,
    build_index,
    derive_rng,
    load_binary,
    sample_box,
    sample_constraint,
    save_binary,
    save_xyz,
)
from .scene import (
    BridgeRequest,
    Constraint,
    RrtConfig,
    Scenario,
    environment_to_json,
    load_environment,
    load_scenario,
    scenario_to_json,
)
from .validate import ValidationReport, Violation, validate_path

__version__ = "0.1.0"
