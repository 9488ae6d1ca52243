from pathlib import Path

import pytest

from stpr_bridge import SIGNATURE_BLOCK, SYSTEM_INSTRUCTION, PromptBundle, assemble_prompt

GOLDEN_DIR = Path(__file__).resolve().parent / "golden"

S4_INSTRUCTION = "Do not get close to the fireplace; it is dangerously hot."
S4_PARAMS = {
    "x": 0.5, "y": 1.1, "z": 0.0,
    "H_0": 1000.0, "alpha": 0.5, "H_safe": 50.0, "d_safe": 0.5,
}


def s4_bundle(house_env) -> PromptBundle:
    return assemble_prompt(S4_INSTRUCTION, house_env, S4_PARAMS)


def test_s4_prompt_matches_golden(house_env):
    golden = (GOLDEN_DIR / "s4_prompt.txt").read_text(encoding="utf-8")
    assert s4_bundle(house_env).render() == golden


def test_four_parts_rendered_in_order(house_env):
    bundle = s4_bundle(house_env)
    text = bundle.render()
    positions = [
        text.index(bundle.system_instruction),
        text.index(bundle.environment_block),
        text.index(bundle.constraint_block),
        text.index(bundle.signature_block),
    ]
    assert positions == sorted(positions)
    assert bundle.system_instruction == SYSTEM_INSTRUCTION


def test_parameters_render_without_float_noise(house_env):
    block = s4_bundle(house_env).constraint_block
    assert "H_0 = 1000" in block
    assert "1000.0" not in block
    assert "d_safe = 0.5" in block
    assert S4_INSTRUCTION in block
    assert block.index(S4_INSTRUCTION) < block.index("H_0 = 1000")


def test_signature_block_is_verbatim(house_env):
    bundle = s4_bundle(house_env)
    assert bundle.signature_block == SIGNATURE_BLOCK
    assert "def is_in_constraints_OBJ(x, y, z):" in SIGNATURE_BLOCK
    assert "True if point is forbidden" in SIGNATURE_BLOCK


def test_environment_block_lists_every_object(house_env):
    block = s4_bundle(house_env).environment_block
    assert len(house_env["objects"]) == 15
    for obj in house_env["objects"]:
        assert f"- {obj['name']}:" in block


def test_empty_params_omit_parameter_section(house_env):
    block = assemble_prompt("Stay away from the hole.", house_env, {}).constraint_block
    assert "relevant parameters" not in block
    assert "Stay away from the hole." in block


def test_empty_instruction_rejected(house_env):
    with pytest.raises(ValueError):
        assemble_prompt("", house_env, {})


def test_empty_part_rejected():
    with pytest.raises(ValueError):
        PromptBundle("sys", "", "constraint", "sig")
