"""Constraint generation: fixture-backed offline mode and a live HTTP mode.

Fixture mode runs the canned completion through the same extraction and
sandbox path as a live completion, so the offline tests exercise the real
pipeline end to end. Live mode posts the rendered prompt to an
OpenAI-style completions endpoint configured through environment
variables; it is deliberately thin and is not exercised by CI.
"""

from __future__ import annotations

import json
import os
import urllib.error
import urllib.request
import warnings
from dataclasses import dataclass
from typing import Optional

from .errors import ModelUnreachable
from .fixtures import FIXTURES, select_fixture
from .prompt import PromptBundle
from .sandbox import GeneratedConstraint, build_constraint

ENDPOINT_ENV = "STPR_MODEL_ENDPOINT"
API_KEY_ENV = "STPR_MODEL_KEY"

DEFAULT_TOP_P = 0.7
DEFAULT_TEMPERATURE = 0.2


@dataclass(frozen=True)
class Decoding:
    top_p: float = DEFAULT_TOP_P
    temperature: float = DEFAULT_TEMPERATURE

    def __post_init__(self) -> None:
        if self.top_p == 1.0 and self.temperature == 1.0:
            warnings.warn(
                "top_p=1, temperature=1 produces unusably noisy constraint "
                "code; refusing this configuration",
                stacklevel=3,
            )
            raise ValueError("decoding (top_p=1, temperature=1) is rejected")


def _post_completion(prompt: str, decoding: Decoding, timeout: float = 60.0) -> str:
    endpoint = os.environ.get(ENDPOINT_ENV)
    if not endpoint:
        raise ModelUnreachable(f"{ENDPOINT_ENV} is not set; no model endpoint")
    body = json.dumps(
        {
            "prompt": prompt,
            "top_p": decoding.top_p,
            "temperature": decoding.temperature,
        }
    ).encode("utf-8")
    headers = {"Content-Type": "application/json"}
    key = os.environ.get(API_KEY_ENV)
    if key:
        headers["Authorization"] = f"Bearer {key}"
    req = urllib.request.Request(endpoint, data=body, headers=headers)
    try:
        with urllib.request.urlopen(req, timeout=timeout) as resp:
            payload = json.loads(resp.read().decode("utf-8"))
    except (urllib.error.URLError, OSError, ValueError) as exc:
        raise ModelUnreachable(f"model endpoint failed: {exc}") from exc
    try:
        return payload["completion"]
    except (KeyError, TypeError) as exc:
        raise ModelUnreachable("model response lacks a 'completion' field") from exc


def _bbox_prompt(source_code: str) -> str:
    return (
        "Below is a Python function returning True for forbidden points.\n"
        "Reply with only a JSON object of the form "
        '{"min": [x, y, z], "max": [x, y, z]} giving an axis-aligned box '
        "that contains every point where the function returns True.\n\n"
        + source_code
    )


def _query_bbox(source_code: str, decoding: Decoding) -> Optional[dict]:
    completion = _post_completion(_bbox_prompt(source_code), decoding)
    try:
        start = completion.index("{")
        end = completion.rindex("}") + 1
        bbox = json.loads(completion[start:end])
        if (
            isinstance(bbox, dict)
            and len(bbox.get("min", [])) == 3
            and len(bbox.get("max", [])) == 3
        ):
            return {
                "min": [float(v) for v in bbox["min"]],
                "max": [float(v) for v in bbox["max"]],
            }
    except (ValueError, TypeError):
        pass
    return None


def generate(
    bundle: PromptBundle,
    instruction: str,
    fixture_mode: bool = True,
    decoding: Optional[Decoding] = None,
) -> GeneratedConstraint:
    """One generated, sandbox-compiled constraint with its bounding box."""
    decoding = decoding or Decoding()
    if fixture_mode:
        name = select_fixture(instruction)
        fixture = FIXTURES[name]
        return build_constraint(
            fixture["completion"],
            bbox=dict(fixture["bbox"]),
            provenance={"mode": "fixture", "fixture": name},
        )
    completion = _post_completion(bundle.render(), decoding)
    constraint = build_constraint(
        completion,
        provenance={
            "mode": "live",
            "top_p": decoding.top_p,
            "temperature": decoding.temperature,
        },
    )
    constraint.bbox = _query_bbox(constraint.source_code, decoding)
    return constraint
