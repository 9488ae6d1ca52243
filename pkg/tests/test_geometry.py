import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stpr import (
    Aabb,
    And,
    BoxRegion,
    EnvironmentModel,
    FrustumRegion,
    GeometryError,
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

BOUNDS = Aabb(Point3(-10, -10, -10), Point3(10, 10, 10))

coords = st.floats(min_value=-9.5, max_value=9.5, allow_nan=False)
points = st.builds(Point3, coords, coords, coords)


def unit_box(margin=0.0):
    return BoxRegion(Aabb(Point3(0, 0, 0), Point3(1, 1, 1)), margin)


# ---------------------------------------------------------------- primitives


def test_point_rejects_non_finite():
    with pytest.raises(GeometryError):
        Point3(0.0, math.nan, 0.0)


def test_aabb_rejects_inverted():
    with pytest.raises(GeometryError):
        Aabb(Point3(0, 0, 0), Point3(-1, 0, 0))


def test_box_interior_is_strict():
    b = unit_box()
    assert evaluate(b, Point3(0.5, 0.5, 0.5))
    # every face, edge, and corner point is allowed
    for p in [Point3(0, 0.5, 0.5), Point3(1, 0.5, 0.5), Point3(0.5, 0, 0.5),
              Point3(0.5, 1, 0.5), Point3(0.5, 0.5, 0), Point3(0.5, 0.5, 1),
              Point3(0, 0, 0), Point3(1, 1, 1)]:
        assert not evaluate(b, p)


def test_box_margin_inflates():
    b = unit_box(margin=0.2)
    assert evaluate(b, Point3(-0.1, 0.5, 0.5))
    assert not evaluate(b, Point3(-0.2, 0.5, 0.5))


def test_sphere_boundary_is_strict():
    s = SphereRegion(Point3(0, 0, 0), 1.0)
    assert evaluate(s, Point3(0.99, 0, 0))
    assert not evaluate(s, Point3(1.0, 0, 0))


def test_half_space_requires_unit_normal():
    with pytest.raises(GeometryError):
        HalfSpaceRegion((1.0, 1.0, 0.0), 0.0)
    h = HalfSpaceRegion((0.0, 0.0, 1.0), 0.5)
    assert evaluate(h, Point3(0, 0, 0.49))
    assert not evaluate(h, Point3(0, 0, 0.5))


def test_frustum_wedge_membership():
    f = FrustumRegion(Point3(0, 0, 0), yaw=0.0, horizontal_fov=math.pi / 2,
                      near_clip=1.0, far_clip=5.0)
    assert evaluate(f, Point3(2, 0, 7))  # unbounded z by default
    assert evaluate(f, Point3(2, 1.9, 0))  # within 45 degrees
    assert not evaluate(f, Point3(2, 2.1, 0))
    assert not evaluate(f, Point3(0.5, 0, 0))  # inside near clip
    assert not evaluate(f, Point3(6, 0, 0))  # past far clip
    assert not evaluate(f, Point3(-2, 0, 0))  # behind


def test_frustum_z_limits():
    f = FrustumRegion(Point3(0, 0, 0), 0.0, 1.0, 0.1, 5.0, z_min=0.0, z_max=0.5)
    assert evaluate(f, Point3(2, 0, 0.0))
    assert evaluate(f, Point3(2, 0, 0.5))
    assert not evaluate(f, Point3(2, 0, 0.51))


def test_frustum_yaw_wraparound():
    f = FrustumRegion(Point3(0, 0, 0), yaw=math.pi, horizontal_fov=0.5,
                      near_clip=0.0, far_clip=5.0)
    assert evaluate(f, Point3(-2, 0, 0))
    assert evaluate(f, Point3(-2, 0.2, 0))
    assert evaluate(f, Point3(-2, -0.2, 0))


HEAT = HeatFieldRegion(
    source=Point3(0.5, 1.1, 0.0),
    source_box=Aabb(Point3(0.2, 0.9, 0.0), Point3(0.8, 1.3, 0.8)),
    h0=1000.0,
    alpha=0.5,
    h_safe=50.0,
    d_safe=0.5,
)


def test_heat_intensity_examples():
    # at d = 2 m the intensity is ~9.95 < h_safe, so the point is allowed
    d = 2.0
    intensity = HEAT.h0 * (1 - HEAT.alpha) / (4 * math.pi * d * d)
    assert intensity == pytest.approx(9.947, abs=1e-3)
    assert not evaluate(HEAT, Point3(HEAT.source.x + d, HEAT.source.y, 0.0))
    # d_safe dominates close in even if the box is avoided
    assert evaluate(HEAT, Point3(HEAT.source.x, HEAT.source.y, 0.45))


def test_heat_forbidden_radius():
    r = HEAT.intensity_radius()
    assert r == pytest.approx(math.sqrt(500.0 / (4 * math.pi * 50.0)), abs=1e-12)
    assert HEAT.forbidden_radius() == r  # intensity dominates d_safe here


def test_combinators():
    a = unit_box()
    b = BoxRegion(Aabb(Point3(0.5, 0, 0), Point3(1.5, 1, 1)))
    p_both = Point3(0.75, 0.5, 0.5)
    p_only_a = Point3(0.25, 0.5, 0.5)
    assert evaluate(And((a, b)), p_both)
    assert not evaluate(And((a, b)), p_only_a)
    assert evaluate(Or((a, b)), p_only_a)
    assert evaluate(Not(b), p_only_a)
    with pytest.raises(GeometryError):
        And(())


# ------------------------------------------------------------ property tests


@settings(max_examples=200, deadline=None)
@given(points)
def test_de_morgan_pointwise(p):
    a = unit_box()
    b = SphereRegion(Point3(1, 1, 1), 1.5)
    lhs = evaluate(Not(And((a, b))), p)
    rhs = evaluate(Or((Not(a), Not(b))), p)
    assert lhs == rhs


@settings(max_examples=100, deadline=None)
@given(points)
def test_bbox_is_sound_overapproximation(p):
    exprs = [
        unit_box(0.3),
        SphereRegion(Point3(2, -3, 1), 2.0),
        FrustumRegion(Point3(0, 0, 0), 1.0, 1.2, 0.5, 6.0),
        HEAT,
        Or((unit_box(), SphereRegion(Point3(4, 4, 4), 1.0))),
        Not(unit_box()),
    ]
    for expr in exprs:
        if evaluate(expr, p) and BOUNDS.contains_closed(p):
            box = forbidden_region_bbox(expr, BOUNDS).box
            assert box.contains_closed(p, tol=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.0, max_value=0.6), st.floats(min_value=0.2, max_value=6.0))
def test_frustum_is_symmetric_about_yaw(off, r):
    f = FrustumRegion(Point3(0, 0, 0), yaw=0.7, horizontal_fov=1.3,
                      near_clip=0.1, far_clip=5.0)
    plus = Point3(r * math.cos(f.yaw + off), r * math.sin(f.yaw + off), 0.0)
    minus = Point3(r * math.cos(f.yaw - off), r * math.sin(f.yaw - off), 0.0)
    assert evaluate(f, plus) == evaluate(f, minus)


@settings(max_examples=50, deadline=None)
@given(st.lists(points, min_size=1, max_size=20))
def test_evaluate_many_matches_scalar(pts):
    exprs = [
        unit_box(0.1),
        SphereRegion(Point3(0, 0, 0), 2.0),
        HalfSpaceRegion((0.0, 1.0, 0.0), -1.0),
        FrustumRegion(Point3(1, 1, 0), -2.0, 1.0, 0.0, 4.0, z_min=-1.0, z_max=1.0),
        HEAT,
        Not(Or((unit_box(), SphereRegion(Point3(3, 3, 3), 1.0)))),
    ]
    arr = np.array([[p.x, p.y, p.z] for p in pts])
    for expr in exprs:
        mask = evaluate_many(expr, arr)
        assert mask.tolist() == [evaluate(expr, p) for p in pts]


# -------------------------------------------------------------------- bboxes


def test_bbox_half_space_clamps_to_bounds():
    res = forbidden_region_bbox(HalfSpaceRegion((1.0, 0.0, 0.0), 0.0), BOUNDS)
    assert res.clamped
    assert res.box == BOUNDS


def test_bbox_disjoint_and_is_degenerate():
    a = unit_box()
    b = BoxRegion(Aabb(Point3(5, 5, 5), Point3(6, 6, 6)))
    res = forbidden_region_bbox(And((a, b)), BOUNDS)
    assert res.box.volume() == 0.0


def test_bbox_sphere_is_tight():
    res = forbidden_region_bbox(SphereRegion(Point3(1, 2, 3), 2.0), BOUNDS)
    assert res.box == Aabb(Point3(-1, 0, 1), Point3(3, 4, 5))
    assert not res.clamped


def test_bbox_heat_covers_forbidden_radius():
    res = forbidden_region_bbox(HEAT, BOUNDS).box
    r = HEAT.forbidden_radius()
    s = HEAT.source
    assert res.contains_closed(Point3(s.x + r, s.y, s.z))
    assert res.contains_closed(Point3(s.x, s.y - r, s.z))


# ---------------------------------------------------------------------- JSON


def test_expr_json_round_trip():
    expr = Or((
        unit_box(0.25),
        And((SphereRegion(Point3(1, 2, 3), 1.5),
             Not(HalfSpaceRegion((0.0, 0.0, 1.0), 0.1)))),
        FrustumRegion(Point3(4, 4, 2), 3.1, 1.4, 0.1, 5.0, z_min=0.0, z_max=0.5),
        HEAT,
    ))
    assert expr_from_json(expr_to_json(expr)) == expr


def test_expr_json_unknown_kind():
    with pytest.raises(GeometryError):
        expr_from_json({"kind": "torus"})


# --------------------------------------------------------------- environment


def test_environment_rejects_duplicate_names():
    box = Aabb(Point3(0, 0, 0), Point3(1, 1, 1))
    with pytest.raises(GeometryError):
        EnvironmentModel(objects=(SceneObject("a", box), SceneObject("a", box)), bounds=BOUNDS)


def test_environment_rejects_out_of_bounds_object():
    box = Aabb(Point3(9, 9, 9), Point3(11, 11, 11))
    with pytest.raises(GeometryError):
        EnvironmentModel(objects=(SceneObject("a", box),), bounds=BOUNDS)
