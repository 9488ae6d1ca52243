"""Canned model completions for offline (fixture-mode) operation.

Each fixture pairs a verbatim completion -- prose plus a fenced code block,
the shape a chat model actually returns -- with a hand-derived axis-aligned
bounding box that over-approximates the forbidden region. Fixtures are
selected by keyword match on the instruction text.
"""

from __future__ import annotations

from .errors import UnknownFixtureName

_S1_CAMERA = '''Here is the constraint function for the camera's field of view:

```python
import math

def is_in_constraints_camera(x, y, z):
    """True if the point is visible to the surveillance camera."""
    apex_x = 4.8
    apex_y = 4.8
    yaw = math.radians(232.0)
    half_fov = math.radians(80.0) / 2
    near_clip = 0.1
    far_clip = 5.0
    dx = x - apex_x
    dy = y - apex_y
    dist = math.sqrt(dx ** 2 + dy ** 2)
    if dist < near_clip or dist > far_clip:
        return False
    if z < 0.0 or z > 0.5:
        return False
    angle = (math.atan2(dy, dx) - yaw + math.pi) % (2 * math.pi) - math.pi
    return abs(angle) <= half_fov
```
'''

_S2_HOLE = '''```python
def is_in_constraints_hole(x, y, z):
    """True inside the floor hole, inflated by the safety margin."""
    margin = 0.2
    in_x = -1.9 - margin < x < -0.3 + margin
    in_y = -2.8 - margin < y < -1.2 + margin
    in_z = 0.0 - margin < z < 0.5 + margin
    return in_x and in_y and in_z
```
'''

_S3_KITCHEN = '''```python
def is_in_constraints_kitchen(x, y, z):
    """True inside either blocked kitchen doorway."""
    door_a = 2.2 < x < 2.8 and 2.7 < y < 4.3 and -0.5 < z < 1.5
    door_b = 3.2 < x < 4.8 and 0.2 < y < 0.8 and -0.5 < z < 1.5
    return door_a or door_b
```
'''

_S4_FIREPLACE = '''```python
import math

def is_in_constraints_fireplace(x, y, z):
    """True inside the fireplace or its unsafe heat zone."""
    fireplace_x = 0.5
    fireplace_y = 1.1
    fireplace_z = 0.4
    fireplace_length = 0.6
    fireplace_width = 0.4
    fireplace_height = 0.8
    H_0 = 1000
    alpha = 0.5
    H_safe = 50
    d_safe = 0.5
    distance = math.sqrt((x - fireplace_x) ** 2 + (y - fireplace_y) ** 2 + z ** 2)
    heat_intensity = H_0 / (4 * 3.14159 * (distance ** 2)) * (1 - alpha)
    within_fireplace = (
        abs(x - fireplace_x) <= fireplace_length / 2 and
        abs(y - fireplace_y) <= fireplace_width / 2 and
        abs(z - fireplace_z) <= fireplace_height / 2)
    return within_fireplace or heat_intensity > H_safe or distance < d_safe
```
'''

FIXTURES: dict[str, dict] = {
    "camera": {
        "completion": _S1_CAMERA,
        "bbox": {"min": [-0.2, -0.3, 0.0], "max": [5.0, 4.8, 0.5]},
    },
    "hole": {
        "completion": _S2_HOLE,
        "bbox": {"min": [-2.1, -3.0, -0.2], "max": [-0.1, -1.0, 0.7]},
    },
    "kitchen": {
        "completion": _S3_KITCHEN,
        "bbox": {"min": [2.2, 0.2, -0.5], "max": [4.8, 4.3, 1.5]},
    },
    "fireplace": {
        "completion": _S4_FIREPLACE,
        "bbox": {"min": [-0.4, 0.2, -0.9], "max": [1.4, 2.0, 0.9]},
    },
}

_KEYWORDS = (
    ("camera", "camera"),
    ("hole", "hole"),
    ("kitchen", "kitchen"),
    ("fireplace", "fireplace"),
    ("heat", "fireplace"),
)


def select_fixture(instruction: str) -> str:
    text = instruction.lower()
    for keyword, name in _KEYWORDS:
        if keyword in text:
            return name
    raise UnknownFixtureName(
        f"no fixture matches instruction {instruction!r}; "
        f"known fixtures: {sorted(FIXTURES)}"
    )
