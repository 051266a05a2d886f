"""Property-based checks of the scoring invariants."""

import math

from hypothesis import given, settings
from hypothesis import strategies as st

from shoulderscore import (
    Landmark,
    ShoulderObservation,
    evaluate_pose,
    horizontal_score,
    shoulder_tilt_score,
)

# Deltas are kept well above the degeneracy guard so the closed forms apply.
_delta = st.floats(min_value=1e-4, max_value=20.0, allow_nan=False)
_signed_delta = st.builds(lambda m, s: m if s else -m, _delta, st.booleans())
_coord = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
_vis = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def observations(draw):
    x = draw(_coord)
    y = draw(_coord)
    z = draw(_coord)
    dx = draw(_signed_delta)
    dy = draw(_signed_delta)
    dz = draw(_signed_delta)
    vl = draw(_vis)
    vr = draw(_vis)
    return ShoulderObservation(
        Landmark(x + dx / 2, y + dy / 2, z + dz / 2, vl),
        Landmark(x - dx / 2, y - dy / 2, z - dz / 2, vr),
    )


def swapped(o):
    return ShoulderObservation(o.right, o.left)


@given(observations())
def test_scores_and_angles_stay_in_range(o):
    r = evaluate_pose(o)
    assert 0.0 <= r.horizontal_score <= 1.0
    assert 0.0 <= r.tilt_score <= 1.0
    assert 0.0 <= r.combined_score <= 1.0
    assert 0.0 <= r.yaw_angle_deg <= 90.0
    assert 0.0 <= r.roll_angle_deg <= 90.0


@given(observations())
def test_left_right_swap_is_exact(o):
    a = evaluate_pose(o)
    b = evaluate_pose(swapped(o))
    assert a == b


@given(observations(), _coord, _coord, _coord)
def test_translation_leaves_scores_unchanged(o, ax, ay, az):
    moved = ShoulderObservation(
        Landmark(o.left.x + ax, o.left.y + ay, o.left.z + az, o.left.visibility),
        Landmark(o.right.x + ax, o.right.y + ay, o.right.z + az, o.right.visibility),
    )
    a = evaluate_pose(o)
    b = evaluate_pose(moved)
    assert math.isclose(a.horizontal_score, b.horizontal_score, abs_tol=1e-9)
    assert math.isclose(a.tilt_score, b.tilt_score, abs_tol=1e-9)
    assert math.isclose(a.combined_score, b.combined_score, abs_tol=1e-9)


@given(observations(), st.floats(min_value=1e-3, max_value=1e3))
def test_uniform_scaling_leaves_scores_unchanged(o, k):
    scaled = ShoulderObservation(
        Landmark(k * o.left.x, k * o.left.y, k * o.left.z, o.left.visibility),
        Landmark(k * o.right.x, k * o.right.y, k * o.right.z, o.right.visibility),
    )
    a = evaluate_pose(o)
    b = evaluate_pose(scaled)
    assert math.isclose(a.horizontal_score, b.horizontal_score, abs_tol=1e-9)
    assert math.isclose(a.tilt_score, b.tilt_score, abs_tol=1e-9)
    assert math.isclose(a.yaw_angle_deg, b.yaw_angle_deg, abs_tol=1e-9)
    assert math.isclose(a.roll_angle_deg, b.roll_angle_deg, abs_tol=1e-9)


@given(
    st.floats(min_value=1e-3, max_value=10.0),
    st.floats(min_value=0.0, max_value=50.0),
    st.floats(min_value=1e-2, max_value=10.0),
)
def test_widening_depth_gap_strictly_lowers_horizontal_score(dx, dz, gap):
    near = ShoulderObservation(Landmark(dx, 0, dz, 1.0), Landmark(0, 0, 0, 1.0))
    far = ShoulderObservation(Landmark(dx, 0, dz + gap, 1.0), Landmark(0, 0, 0, 1.0))
    s_near, yaw_near = horizontal_score(near)
    s_far, yaw_far = horizontal_score(far)
    assert s_far < s_near
    assert yaw_far > yaw_near


@given(
    st.floats(min_value=1e-3, max_value=10.0),
    st.floats(min_value=0.0, max_value=50.0),
    st.floats(min_value=1e-2, max_value=10.0),
)
def test_widening_height_gap_strictly_lowers_tilt_score(dx, dy, gap):
    near = ShoulderObservation(Landmark(dx, dy, 0, 1.0), Landmark(0, 0, 0, 1.0))
    far = ShoulderObservation(Landmark(dx, dy + gap, 0, 1.0), Landmark(0, 0, 0, 1.0))
    s_near, roll_near = shoulder_tilt_score(near)
    s_far, roll_far = shoulder_tilt_score(far)
    assert s_far < s_near
    assert roll_far > roll_near


@given(observations())
def test_angles_and_scores_agree(o):
    # With symmetric visibility the horizontal score is exactly cos(yaw);
    # the tilt score is always the linear ramp of the roll angle.
    sym = ShoulderObservation(
        Landmark(o.left.x, o.left.y, o.left.z, 0.8),
        Landmark(o.right.x, o.right.y, o.right.z, 0.8),
    )
    h, yaw = horizontal_score(sym)
    t, roll = shoulder_tilt_score(sym)
    assert math.isclose(h, math.cos(math.radians(yaw)), abs_tol=1e-12)
    assert math.isclose(t, 1.0 - roll / 90.0, abs_tol=1e-12)


@given(observations())
def test_combined_score_bounded_by_components(o):
    r = evaluate_pose(o)
    lo = min(r.horizontal_score, r.tilt_score)
    hi = max(r.horizontal_score, r.tilt_score)
    slack = 1e-15
    assert lo - slack <= r.combined_score <= hi + slack


@given(_signed_delta, _signed_delta)
def test_tilt_matches_arctan_form(dx, dy):
    o = ShoulderObservation(Landmark(dx, dy, 0, 1.0), Landmark(0, 0, 0, 1.0))
    score, _ = shoulder_tilt_score(o)
    direct = 1.0 - (2.0 / math.pi) * math.atan2(abs(dy), abs(dx))
    assert math.isclose(score, direct, abs_tol=1e-12)


@settings(max_examples=25)
@given(observations())
def test_evaluation_is_deterministic(o):
    assert evaluate_pose(o) == evaluate_pose(o)
