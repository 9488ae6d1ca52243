"""Prompt template assembly.

The template has four parts: a short system instruction establishing the
robot role, an environment block rendered from the scene description, a
constraint block carrying the user instruction plus its numeric
parameters, and the fixed Python signature the model must complete.
"""

from __future__ import annotations

from dataclasses import dataclass

SIGNATURE_BLOCK = '''def is_in_constraints_OBJ(x, y, z):
  """
  Check if the input satisfies constraints.
  Parameters:
  - x, y, z (float): Point coordinates.
  Returns:
  - bool: True if point is forbidden, otherwise False
  """
'''

SYSTEM_INSTRUCTION = (
    "You are a robot placed in a house and need to reach your goal while "
    "respecting every safety constraint given below."
)


@dataclass(frozen=True)
class PromptBundle:
    system_instruction: str
    environment_block: str
    constraint_block: str
    signature_block: str

    def __post_init__(self) -> None:
        for name in ("system_instruction", "environment_block",
                     "constraint_block", "signature_block"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")

    def render(self) -> str:
        return "\n\n".join((
            self.system_instruction,
            self.environment_block,
            self.constraint_block,
            self.signature_block,
        ))


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return repr(value)


def _render_environment(env: dict) -> str:
    bounds = env["bounds"]
    lines = [
        "The environment spans "
        f"{_fmt(bounds['min'][0])}..{_fmt(bounds['max'][0])} m in x, "
        f"{_fmt(bounds['min'][1])}..{_fmt(bounds['max'][1])} m in y and "
        f"{_fmt(bounds['min'][2])}..{_fmt(bounds['max'][2])} m in z.",
        "It contains the following objects, each an axis-aligned box "
        "(name: min corner -> max corner):",
    ]
    for obj in env["objects"]:
        mn, mx = obj["min"], obj["max"]
        lines.append(
            f"- {obj['name']}: ({_fmt(mn[0])}, {_fmt(mn[1])}, {_fmt(mn[2])}) -> "
            f"({_fmt(mx[0])}, {_fmt(mx[1])}, {_fmt(mx[2])})"
        )
    return "\n".join(lines)


def _render_constraint(instruction: str, params: dict) -> str:
    lines = [instruction]
    if params:
        lines.append("The relevant parameters are:")
        lines.extend(f"{key} = {_fmt(value)}" for key, value in params.items())
    lines.append(
        "Generate a safe geometric constraint by following this python "
        "syntax without giving any usage example. Rename OBJ accordingly:"
    )
    return "\n".join(lines)


def assemble_prompt(instruction: str, env: dict, params: dict) -> PromptBundle:
    """Deterministic rendering of the four-part template."""
    if not instruction:
        raise ValueError("instruction must be non-empty")
    return PromptBundle(
        system_instruction=SYSTEM_INSTRUCTION,
        environment_block=_render_environment(env),
        constraint_block=_render_constraint(instruction, params),
        signature_block=SIGNATURE_BLOCK,
    )
