"""Newline-delimited JSON server over stdin/stdout.

One request line in, exactly one response line out. A failing request
produces `{"error": {"code": ..., "message": ...}}` and the session keeps
running; only `{"op": "shutdown"}` (or EOF) ends it, with exit status 0.

Requests:
    {"op": "generate", "instruction": str, "env": {...}, "params": {...}}
        -> {"handle": str, "bbox": {"min": [...], "max": [...]} | null,
            "provenance": {...}}
    {"op": "eval", "handle": str, "points": [[x, y, z], ...]}
        -> {"results": [bool, ...]}
    {"op": "bbox", "handle": str}
        -> {"bbox": {...} | null}
    {"op": "shutdown"}
        -> {"ok": true}, then the process exits.
"""

from __future__ import annotations

import json
import sys
from typing import IO, Optional

from .errors import BridgeWorkerError, UnknownHandle
from .generate import generate
from .prompt import assemble_prompt
from .sandbox import GeneratedConstraint

_EMPTY_ENV = {"bounds": {"min": [0.0, 0.0, 0.0], "max": [0.0, 0.0, 0.0]}, "objects": []}


class Server:
    def __init__(self, fixture_mode: bool = True):
        self.fixture_mode = fixture_mode
        self._handles: dict[str, GeneratedConstraint] = {}
        self._counter = 0

    def _lookup(self, doc: dict) -> GeneratedConstraint:
        handle = doc.get("handle")
        if handle not in self._handles:
            raise UnknownHandle(f"no such constraint handle: {handle!r}")
        return self._handles[handle]

    def handle_request(self, doc: dict) -> dict:
        op = doc.get("op")
        if op == "generate":
            instruction = doc.get("instruction")
            if not isinstance(instruction, str) or not instruction:
                raise BridgeWorkerError("generate requires a non-empty instruction")
            env = doc.get("env") or _EMPTY_ENV
            params = doc.get("params") or {}
            bundle = assemble_prompt(instruction, env, params)
            constraint = generate(bundle, instruction, fixture_mode=self.fixture_mode)
            self._counter += 1
            handle = f"{constraint.function_name}#{self._counter}"
            self._handles[handle] = constraint
            return {
                "handle": handle,
                "bbox": constraint.bbox,
                "provenance": constraint.provenance,
            }
        if op == "eval":
            constraint = self._lookup(doc)
            points = doc.get("points")
            if not isinstance(points, list):
                raise BridgeWorkerError("eval requires a list of [x, y, z] points")
            fn = constraint.fn
            try:
                results = [bool(fn(p[0], p[1], p[2])) for p in points]
            except Exception as exc:
                raise BridgeWorkerError(
                    f"constraint function raised {type(exc).__name__}: {exc}"
                ) from exc
            return {"results": results}
        if op == "bbox":
            return {"bbox": self._lookup(doc).bbox}
        raise BridgeWorkerError(f"unknown op: {op!r}")


def serve(
    stdin: Optional[IO[str]] = None,
    stdout: Optional[IO[str]] = None,
    fixture_mode: bool = True,
) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    server = Server(fixture_mode=fixture_mode)
    for line in stdin:
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
            if not isinstance(doc, dict):
                raise ValueError("request must be a JSON object")
        except ValueError as exc:
            _respond(stdout, {"error": {"code": "malformed_request",
                                        "message": str(exc)}})
            continue
        if doc.get("op") == "shutdown":
            _respond(stdout, {"ok": True})
            return 0
        try:
            resp = server.handle_request(doc)
        except BridgeWorkerError as exc:
            resp = {"error": {"code": exc.code, "message": str(exc)}}
        except Exception as exc:  # keep the session alive on any bug
            resp = {"error": {"code": "internal_error",
                              "message": f"{type(exc).__name__}: {exc}"}}
        _respond(stdout, resp)
    return 0


def _respond(stdout: IO[str], payload: dict) -> None:
    stdout.write(json.dumps(payload) + "\n")
    stdout.flush()
