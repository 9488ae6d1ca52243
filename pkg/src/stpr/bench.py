"""Benchmark harness: seeded scenario runs and table rendering.

A run is a success when the method returns a validated path on a task
declared solvable, or reports nonexistence on a task declared unsolvable.
Vanilla methods plan against the static-object clouds only; the
constraint-aware methods add the rejection-sampled constraint clouds.
"""

from __future__ import annotations

import enum
import io
import math
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .astar import plan_astar
from .errors import StprError
from .geometry import ConstraintExpr
from .planresult import PlanResult
from .rrtstar import plan_rrtstar
from .sampling import (
    CloudSource,
    PointCloud,
    build_index,
    derive_rng,
    sample_box,
    sample_constraint,
)
from .scene import Scenario
from .validate import validate_path


class Method(enum.Enum):
    VANILLA_ASTAR = "vanilla-astar"
    VANILLA_RRTSTAR = "vanilla-rrtstar"
    STPR_ASTAR = "stpr-astar"
    STPR_RRTSTAR = "stpr-rrtstar"

    @property
    def constrained(self) -> bool:
        return self in (Method.STPR_ASTAR, Method.STPR_RRTSTAR)

    @property
    def grid(self) -> bool:
        return self in (Method.VANILLA_ASTAR, Method.STPR_ASTAR)


ALL_METHODS = tuple(Method)


@dataclass(frozen=True)
class PhaseTimes:
    prompting: Optional[float]  # absent in fixture mode
    sampling: float
    planning: float
    total: float


@dataclass(frozen=True)
class BenchmarkRecord:
    scenario_id: str
    method: Method
    run_index: int
    seed: int
    sample_count: int
    success: bool
    found: bool
    valid: Optional[bool]  # None when no path was returned
    path_length: float  # inf when no path
    phase_times: PhaseTimes
    error: Optional[str] = None


def sample_scenario_clouds(
    scenario: Scenario,
    seed: int,
    include_constraints: bool,
    k: Optional[int] = None,
) -> list[PointCloud]:
    k = scenario.sample_count if k is None else k
    env = scenario.environment
    clouds = [
        sample_box(
            obj.box,
            k,
            derive_rng(seed, f"object:{obj.name}"),
            label=obj.name,
            source=CloudSource.STATIC_OBJECT,
        )
        for obj in env.objects
    ]
    if include_constraints:
        for c in scenario.constraints:
            if c.expr is None:
                raise StprError(
                    f"constraint {c.label!r} is an unresolved bridge request; "
                    "resolve it before sampling"
                )
            clouds.append(
                sample_constraint(
                    c.expr,
                    k,
                    derive_rng(seed, f"constraint:{c.label}"),
                    env.bounds,
                    label=c.label,
                )
            )
    return clouds


def execute_run(
    scenario: Scenario,
    method: Method,
    seed: int,
    k: Optional[int] = None,
    validate_step: float = 0.01,
) -> tuple[Optional[PlanResult], Optional[bool], PhaseTimes, Optional[str]]:
    """One plan + validation pass. Planner errors are reported, not raised."""
    t_start = time.perf_counter()
    t0 = time.perf_counter()
    clouds = sample_scenario_clouds(scenario, seed, method.constrained, k)
    index = build_index(clouds) if clouds else None
    sampling = time.perf_counter() - t0

    result: Optional[PlanResult] = None
    error: Optional[str] = None
    t0 = time.perf_counter()
    try:
        if method.grid:
            result = plan_astar(scenario, index)
        else:
            result = plan_rrtstar(scenario, index, np.random.default_rng(seed))
    except StprError as exc:
        error = f"{type(exc).__name__}: {exc}"
    planning = time.perf_counter() - t0

    valid: Optional[bool] = None
    if result is not None and result.found:
        labeled = [(c.label, c.expr) for c in scenario.resolved_constraints()]
        report = validate_path(result.path, labeled, scenario.environment, step=validate_step)
        valid = report.valid

    total = time.perf_counter() - t_start
    times = PhaseTimes(prompting=None, sampling=sampling, planning=planning, total=total)
    return result, valid, times, error


def run_scenario(
    scenario: Scenario,
    method: Method,
    runs: int,
    seed: int,
    k: Optional[int] = None,
    validate_step: float = 0.01,
) -> list[BenchmarkRecord]:
    if scenario.solvable is None:
        raise StprError(f"scenario {scenario.name!r} does not declare ground-truth solvability")
    records = []
    child_seeds = np.random.SeedSequence(seed).generate_state(runs, dtype=np.uint64)
    for run_index in range(runs):
        run_seed = int(child_seeds[run_index])
        result, valid, times, error = execute_run(scenario, method, run_seed, k, validate_step)
        found = result is not None and result.found
        if found:
            success = bool(scenario.solvable and valid)
            length = float(result.cost)
        else:
            success = not scenario.solvable and error is None
            length = math.inf
        records.append(
            BenchmarkRecord(
                scenario_id=scenario.name,
                method=method,
                run_index=run_index,
                seed=run_seed,
                sample_count=k if k is not None else scenario.sample_count,
                success=success,
                found=found,
                valid=valid,
                path_length=length,
                phase_times=times,
                error=error,
            )
        )
    return records


# --------------------------------------------------------------------------
# Aggregation and rendering
# --------------------------------------------------------------------------


def _group(records: Sequence[BenchmarkRecord]):
    groups: dict[tuple[str, Method, int], list[BenchmarkRecord]] = {}
    for r in sorted(records, key=lambda r: (r.scenario_id, r.method.value, r.sample_count, r.run_index)):
        groups.setdefault((r.scenario_id, r.method, r.sample_count), []).append(r)
    return groups


@dataclass(frozen=True)
class AggregateRow:
    scenario_id: str
    method: Method
    sample_count: int
    runs: int
    success_pct: float
    mean_sampling: float
    mean_planning: float
    mean_total: float
    mean_path_length: float  # inf when no finite path was produced
    invalid_paths: int


def aggregate(records: Sequence[BenchmarkRecord]) -> list[AggregateRow]:
    rows = []
    for (sid, method, k), group in _group(records).items():
        finite = [r.path_length for r in group if math.isfinite(r.path_length)]
        rows.append(
            AggregateRow(
                scenario_id=sid,
                method=method,
                sample_count=k,
                runs=len(group),
                success_pct=100.0 * sum(r.success for r in group) / len(group),
                mean_sampling=float(np.mean([r.phase_times.sampling for r in group])),
                mean_planning=float(np.mean([r.phase_times.planning for r in group])),
                mean_total=float(np.mean([r.phase_times.total for r in group])),
                mean_path_length=float(np.mean(finite)) if finite else math.inf,
                invalid_paths=sum(1 for r in group if r.found and r.valid is False),
            )
        )
    return rows


def _fmt_len(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.3f}"


def records_to_csv(records: Sequence[BenchmarkRecord]) -> str:
    """Deterministic per-run results: no wall-clock columns.

    Timings vary across runs of the same build, so they are emitted
    separately (timings_to_csv) and excluded from the reproducible CSV.
    """
    buf = io.StringIO()
    buf.write("scenario,method,run_index,k,seed,success,found,valid,path_length,error\n")
    for r in sorted(records, key=lambda r: (r.scenario_id, r.method.value, r.sample_count, r.run_index)):
        valid = "" if r.valid is None else str(r.valid).lower()
        buf.write(
            f"{r.scenario_id},{r.method.value},{r.run_index},{r.sample_count},{r.seed},"
            f"{str(r.success).lower()},{str(r.found).lower()},{valid},"
            f"{_fmt_len(r.path_length)},{r.error or ''}\n"
        )
    return buf.getvalue()


def timings_to_csv(records: Sequence[BenchmarkRecord]) -> str:
    buf = io.StringIO()
    buf.write("scenario,method,run_index,k,prompting,sampling,planning,total\n")
    for r in sorted(records, key=lambda r: (r.scenario_id, r.method.value, r.sample_count, r.run_index)):
        prompting = "" if r.phase_times.prompting is None else f"{r.phase_times.prompting:.4f}"
        buf.write(
            f"{r.scenario_id},{r.method.value},{r.run_index},{r.sample_count},{prompting},"
            f"{r.phase_times.sampling:.4f},{r.phase_times.planning:.4f},{r.phase_times.total:.4f}\n"
        )
    return buf.getvalue()


def emit_tables(records: Sequence[BenchmarkRecord]) -> str:
    """Markdown report: success ratios, runtime breakdown, density sweep."""
    if not records:
        raise ValueError("no records to render")
    rows = aggregate(records)
    scenarios = sorted({r.scenario_id for r in rows})
    methods = [m for m in ALL_METHODS if any(r.method == m for r in rows)]
    ks = sorted({r.sample_count for r in rows})

    def row_for(sid: str, m: Method, k: int) -> Optional[AggregateRow]:
        for r in rows:
            if r.scenario_id == sid and r.method == m and r.sample_count == k:
                return r
        return None

    out = io.StringIO()
    out.write("## Success ratio (%)\n\n")
    out.write("| scenario | " + " | ".join(m.value for m in methods) + " |\n")
    out.write("|---" * (len(methods) + 1) + "|\n")
    for sid in scenarios:
        cells = []
        for m in methods:
            matches = [r for r in rows if r.scenario_id == sid and r.method == m]
            cells.append(f"{np.mean([r.success_pct for r in matches]):.0f}" if matches else "-")
        out.write(f"| {sid} | " + " | ".join(cells) + " |\n")

    out.write("\n## Runtime breakdown (mean seconds)\n\n")
    out.write("| scenario | method | k | sampling | planning | total | path length |\n")
    out.write("|---|---|---|---|---|---|---|\n")
    for sid in scenarios:
        for m in methods:
            for k in ks:
                r = row_for(sid, m, k)
                if r is None:
                    continue
                out.write(
                    f"| {sid} | {m.value} | {k} | {r.mean_sampling:.3f} | "
                    f"{r.mean_planning:.3f} | {r.mean_total:.3f} | "
                    f"{_fmt_len(r.mean_path_length)} |\n"
                )

    if len(ks) > 1:
        out.write("\n## Density sweep (success % / invalid paths / mean total s by K)\n\n")
        out.write("| scenario | method | " + " | ".join(f"K={k}" for k in ks) + " |\n")
        out.write("|---" * (len(ks) + 2) + "|\n")
        for sid in scenarios:
            for m in methods:
                cells = []
                any_cell = False
                for k in ks:
                    r = row_for(sid, m, k)
                    if r is None:
                        cells.append("-")
                    else:
                        any_cell = True
                        cells.append(f"{r.success_pct:.0f} / {r.invalid_paths} / {r.mean_total:.3f}")
                if any_cell:
                    out.write(f"| {sid} | {m.value} | " + " | ".join(cells) + " |\n")
    return out.getvalue()
