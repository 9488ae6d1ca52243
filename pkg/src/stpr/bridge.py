"""Client for the constraint-generation bridge subprocess.

The bridge speaks newline-delimited JSON over stdin/stdout: one request
line in, exactly one response line out. Requests are serialized; point
membership queries are batched to amortize the boundary cost.
"""

from __future__ import annotations

import json
import os
import shlex
import subprocess
import sys
from typing import Optional, Sequence

import numpy as np

from .errors import BridgeError, ExternalUnavailable
from .geometry import Aabb, EnvironmentModel, ExternalRegion
from .scene import BridgeRequest, Constraint, Scenario, environment_to_json

BRIDGE_CMD_ENV = "STPR_BRIDGE_CMD"
_DEFAULT_CMD = [sys.executable, "-m", "stpr_bridge", "serve", "--fixture-mode"]

EVAL_BATCH_SIZE = 100_000


def default_bridge_command(fixture_mode: bool = True) -> list[str]:
    override = os.environ.get(BRIDGE_CMD_ENV)
    if override:
        return shlex.split(override)
    cmd = list(_DEFAULT_CMD)
    if not fixture_mode:
        cmd.remove("--fixture-mode")
    return cmd


class BridgeSession:
    """One live bridge subprocess; strictly serial request/response."""

    def __init__(self, command: Optional[Sequence[str]] = None, fixture_mode: bool = True):
        cmd = list(command) if command else default_bridge_command(fixture_mode)
        try:
            self._proc = subprocess.Popen(
                cmd,
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.DEVNULL,
                text=True,
            )
        except OSError as exc:
            raise ExternalUnavailable(f"cannot launch bridge {cmd!r}: {exc}") from exc

    def request(self, payload: dict) -> dict:
        proc = self._proc
        if proc.poll() is not None:
            raise ExternalUnavailable("bridge process has exited")
        try:
            proc.stdin.write(json.dumps(payload) + "\n")
            proc.stdin.flush()
            line = proc.stdout.readline()
        except (BrokenPipeError, OSError) as exc:
            raise ExternalUnavailable(f"bridge pipe failed: {exc}") from exc
        if not line:
            raise ExternalUnavailable("bridge closed its output stream")
        resp = json.loads(line)
        if "error" in resp:
            err = resp["error"]
            raise BridgeError(f"{err.get('code')}: {err.get('message')}")
        return resp

    def generate(self, instruction: str, env: EnvironmentModel, params: dict) -> dict:
        return self.request(
            {
                "op": "generate",
                "instruction": instruction,
                "env": environment_to_json(env),
                "params": params,
            }
        )

    def eval(self, handle: str, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        results: list[bool] = []
        for off in range(0, len(points), EVAL_BATCH_SIZE):
            chunk = points[off : off + EVAL_BATCH_SIZE]
            resp = self.request(
                {"op": "eval", "handle": handle, "points": chunk.tolist()}
            )
            results.extend(resp["results"])
        return np.asarray(results, dtype=bool)

    def bbox(self, handle: str) -> Aabb:
        resp = self.request({"op": "bbox", "handle": handle})
        bb = resp["bbox"]
        return Aabb.from_seqs(bb["min"], bb["max"])

    def shutdown(self) -> int:
        try:
            self._proc.stdin.write(json.dumps({"op": "shutdown"}) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError):
            pass
        return self._proc.wait(timeout=10)

    def __enter__(self) -> "BridgeSession":
        return self

    def __exit__(self, *exc_info) -> None:
        self.shutdown()


def resolve_bridge_constraint(
    session: BridgeSession, request: BridgeRequest, env: EnvironmentModel
) -> ExternalRegion:
    """Generate the constraint and wrap it as an external expression node."""
    resp = session.generate(request.instruction, env, request.params)
    handle = resp["handle"]
    bbox = None
    if resp.get("bbox"):
        bb = resp["bbox"]
        bbox = Aabb.from_seqs(bb["min"], bb["max"])
    return ExternalRegion(
        handle=handle,
        bbox=bbox,
        evaluator=lambda pts, _h=handle: session.eval(_h, pts),
    )


def resolve_scenario(scenario: Scenario, session: BridgeSession) -> Scenario:
    """Replace every bridge-request constraint with a live external node."""
    constraints = []
    for c in scenario.constraints:
        if c.bridge is None:
            constraints.append(c)
        else:
            expr = resolve_bridge_constraint(session, c.bridge, scenario.environment)
            constraints.append(Constraint(label=c.label, expr=expr))
    from dataclasses import replace

    return replace(scenario, constraints=tuple(constraints))
