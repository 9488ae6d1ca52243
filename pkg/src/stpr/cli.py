"""Command-line interface.

Exit codes: 0 success, 1 constraint violation or nonexistence on a task
declared solvable, 2 usage error, 3 bridge unavailable.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import shlex
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import bench as bench_mod
from .astar import plan_astar
from .bridge import BridgeSession, default_bridge_command, resolve_scenario
from .errors import ExternalUnavailable, StprError
from .geometry import Point3, expr_to_json
from .planresult import PlanResult
from .rrtstar import plan_rrtstar
from .sampling import build_index, save_binary, save_xyz
from .scene import Scenario, load_scenario
from .validate import validate_path

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_BRIDGE = 3


def load_config(path: Optional[str]) -> dict:
    """Flat `key = value` config file (strings, numbers, booleans)."""
    if path is None:
        return {}
    values: dict = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StprError(f"cannot read config {path}: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise StprError(f"{path}:{lineno}: expected key = value")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip().strip("\"'")
        if val.lower() in ("true", "false"):
            values[key] = val.lower() == "true"
        else:
            try:
                values[key] = int(val)
            except ValueError:
                try:
                    values[key] = float(val)
                except ValueError:
                    values[key] = val
    return values


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--seed", type=int, default=None, help="RNG seed (overrides scenario)")
    sub.add_argument("--output-dir", default=None, help="directory for output artifacts")
    sub.add_argument("--format", choices=("json", "csv", "md"), default="json")
    sub.add_argument("--config", default=None, help="key = value defaults file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stpr", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("plan", help="plan a path for a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--method", choices=("astar", "rrtstar"), required=True)
    p.add_argument("--vanilla", action="store_true", help="ignore constraints (objects only)")
    p.add_argument("--validate-step", type=float, default=0.01)
    _add_common(p)

    p = subs.add_parser("sample", help="export point clouds for a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--k", type=int, default=None, help="override sample count")
    _add_common(p)

    p = subs.add_parser("validate", help="validate a path file against a scenario")
    p.add_argument("--scenario", required=True)
    p.add_argument("--path", required=True, help="JSON path file (waypoint list)")
    p.add_argument("--step", type=float, default=0.01)
    _add_common(p)

    p = subs.add_parser("bench", help="seeded benchmark runs and tables")
    p.add_argument("--scenario", required=True, action="append",
                   help="scenario file; repeat for several")
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--methods", default="all",
                   help="'all' or comma list of vanilla-astar,vanilla-rrtstar,stpr-astar,stpr-rrtstar")
    p.add_argument("--density", default=None,
                   help="comma list of K values for a density sweep (e.g. 100,1000,10000)")
    p.add_argument("--validate-step", type=float, default=0.01)
    _add_common(p)

    p = subs.add_parser("gen-constraint", help="generate a constraint through the bridge")
    p.add_argument("--scenario", required=True)
    p.add_argument("--instruction", required=True)
    p.add_argument("--fixture-mode", action="store_true",
                   help="serve canned constraint functions offline")
    p.add_argument("--params", default=None, help="JSON object of numeric parameters")
    _add_common(p)

    return parser


def _out_dir(args, cfg: dict) -> Path:
    out = args.output_dir or cfg.get("output_dir") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _seeded(scenario: Scenario, args, cfg: dict) -> Scenario:
    seed = args.seed if args.seed is not None else cfg.get("seed")
    if seed is None:
        return scenario
    from dataclasses import replace

    return replace(scenario, rng_seed=int(seed))


def _bridge_session(cfg: dict) -> BridgeSession:
    command = shlex.split(str(cfg["bridge_cmd"])) if "bridge_cmd" in cfg else None
    return BridgeSession(command=command)


def _resolve_if_needed(
    scenario: Scenario, cfg: dict, stack: contextlib.ExitStack
) -> Scenario:
    """Resolve bridge-request constraints through a live session if present."""
    if all(c.bridge is None for c in scenario.constraints):
        return scenario
    session = stack.enter_context(_bridge_session(cfg))
    return resolve_scenario(scenario, session)


def _write_path_files(result: PlanResult, out_dir: Path, fmt: str) -> None:
    (out_dir / "path.json").write_text(
        json.dumps(result.to_json(), indent=2) + "\n", encoding="utf-8"
    )
    if result.found and fmt == "csv":
        lines = ["x,y,z"] + [f"{p.x},{p.y},{p.z}" for p in result.path]
        (out_dir / "path.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_plan(args, cfg: dict) -> int:
    with contextlib.ExitStack() as stack:
        scenario = _resolve_if_needed(
            _seeded(load_scenario(args.scenario), args, cfg), cfg, stack
        )
        return _plan_resolved(scenario, args, cfg)


def _plan_resolved(scenario: Scenario, args, cfg: dict) -> int:
    clouds = bench_mod.sample_scenario_clouds(
        scenario, scenario.rng_seed, include_constraints=not args.vanilla
    )
    index = build_index(clouds) if clouds else None
    if args.method == "astar":
        result = plan_astar(scenario, index)
    else:
        result = plan_rrtstar(scenario, index, np.random.default_rng(scenario.rng_seed))

    out_dir = _out_dir(args, cfg)
    _write_path_files(result, out_dir, args.format)

    if not result.found:
        print(f"no path: {result.certificate.value}")
        if scenario.solvable:
            return EXIT_VIOLATION
        return EXIT_OK

    labeled = [(c.label, c.expr) for c in scenario.resolved_constraints()]
    report = validate_path(result.path, labeled, scenario.environment, step=args.validate_step)
    print(
        f"path found: cost={result.cost:.3f} m, waypoints={len(result.path)}, "
        f"valid={report.valid}"
    )
    if not report.valid:
        v = report.violation
        print(f"violation: {v.label} at ({v.point.x:.3f}, {v.point.y:.3f}, {v.point.z:.3f})")
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_sample(args, cfg: dict) -> int:
    with contextlib.ExitStack() as stack:
        scenario = _resolve_if_needed(
            _seeded(load_scenario(args.scenario), args, cfg), cfg, stack
        )
        clouds = bench_mod.sample_scenario_clouds(
            scenario, scenario.rng_seed, include_constraints=True, k=args.k
        )
    out_dir = _out_dir(args, cfg)
    for cloud in clouds:
        stem = f"{cloud.source.value}_{cloud.label}".replace("/", "_")
        save_xyz(cloud, out_dir / f"{stem}.xyz")
        save_binary(cloud, out_dir / f"{stem}.bin")
    print(f"exported {len(clouds)} clouds to {out_dir}")
    return EXIT_OK


def cmd_validate(args, cfg: dict) -> int:
    scenario = load_scenario(args.scenario)
    doc = json.loads(Path(args.path).read_text(encoding="utf-8"))
    waypoints = doc["path"] if isinstance(doc, dict) else doc
    path = [Point3.from_seq(w) for w in waypoints]
    labeled = [(c.label, c.expr) for c in scenario.resolved_constraints()]
    report = validate_path(path, labeled, scenario.environment, step=args.step)
    print(json.dumps(report.to_json(), indent=2))
    return EXIT_OK if report.valid else EXIT_VIOLATION


def _parse_methods(spec: str) -> list[bench_mod.Method]:
    if spec == "all":
        return list(bench_mod.ALL_METHODS)
    out = []
    for name in spec.split(","):
        try:
            out.append(bench_mod.Method(name.strip()))
        except ValueError:
            raise StprError(f"unknown method {name.strip()!r}") from None
    return out


def cmd_bench(args, cfg: dict) -> int:
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    methods = _parse_methods(args.methods)
    densities = (
        [int(v) for v in args.density.split(",")] if args.density else [None]
    )
    records = []
    for path in args.scenario:
        with contextlib.ExitStack() as stack:
            scenario = _resolve_if_needed(load_scenario(path), cfg, stack)
            for method in methods:
                for k in densities:
                    records.extend(
                        bench_mod.run_scenario(
                            scenario,
                            method,
                            runs=args.runs,
                            seed=int(seed),
                            k=k,
                            validate_step=args.validate_step,
                        )
                    )
    out_dir = _out_dir(args, cfg)
    (out_dir / "results.csv").write_text(bench_mod.records_to_csv(records), encoding="utf-8")
    (out_dir / "timings.csv").write_text(bench_mod.timings_to_csv(records), encoding="utf-8")
    report = bench_mod.emit_tables(records)
    (out_dir / "report.md").write_text(report, encoding="utf-8")
    print(report)
    return EXIT_OK


def cmd_gen_constraint(args, cfg: dict) -> int:
    scenario = load_scenario(args.scenario)
    params = json.loads(args.params) if args.params else {}
    command = shlex.split(str(cfg["bridge_cmd"])) if "bridge_cmd" in cfg else None
    with BridgeSession(command=command, fixture_mode=args.fixture_mode) as session:
        resp = session.generate(args.instruction, scenario.environment, params)
    print(json.dumps(resp, indent=2))
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "plan":
            return cmd_plan(args, cfg)
        if args.command == "sample":
            return cmd_sample(args, cfg)
        if args.command == "validate":
            return cmd_validate(args, cfg)
        if args.command == "bench":
            return cmd_bench(args, cfg)
        if args.command == "gen-constraint":
            return cmd_gen_constraint(args, cfg)
        parser.error(f"unknown command {args.command!r}")
    except ExternalUnavailable as exc:
        print(f"bridge unavailable: {exc}", file=sys.stderr)
        return EXIT_BRIDGE
    except StprError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
