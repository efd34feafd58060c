import numpy as np
import pytest
from dataclasses import replace
from hypothesis import given, settings
from hypothesis import strategies as st

from magrobot.model import ForceCurve, FrictionRunSpec, default_robot, default_scene
from magrobot.statics import (breakdown_from_magnetic, find_peak, force_breakdown, margin,
                              plan_offset, run_friction_trace)

N_NO_MAGNETS = 2.651702355575709e-06


def bare_scene():
    r = replace(default_robot(), magnets=())
    return replace(default_scene(), base_robot=r)


def test_no_magnets_no_motion():
    b = force_breakdown(bare_scene())
    assert b.normal == pytest.approx(N_NO_MAGNETS, rel=1e-12)
    assert b.f_friction == pytest.approx(1.3258511777878546e-07, rel=1e-12)
    assert b.f_drag == 0.0 and b.f_shear == 0.0
    assert not b.lift_off
    np.testing.assert_array_equal(b.f_magnetic, np.zeros(3))


def test_aligned_robots_do_not_advance(scene):
    b = force_breakdown(scene, speed=0.005)
    assert abs(b.f_magnetic[0]) < 1e-12
    assert b.net_x == pytest.approx(-b.f_drag - b.f_friction, abs=1e-12)
    assert b.net_x < 0


def test_attraction_adds_exactly_to_normal(scene):
    f = np.array([0.0, 0.0, -3e-3])
    with_m = breakdown_from_magnetic(scene, f, 0.0)
    without = breakdown_from_magnetic(scene, np.zeros(3), 0.0)
    assert with_m.normal - without.normal == pytest.approx(3e-3, rel=1e-12)


def test_lift_off():
    b = breakdown_from_magnetic(default_scene(), [0.0, 0.0, 1e-3], 0.0)
    assert b.normal == 0.0 and b.f_friction == 0.0
    assert b.lift_off


def test_literal_convention_adds_buoyancy(scene):
    phys = breakdown_from_magnetic(scene, np.zeros(3), 0.0)
    lit = breakdown_from_magnetic(replace(scene, convention="literal"), np.zeros(3), 0.0)
    assert lit.normal - phys.normal == pytest.approx(2 * phys.f_buoyancy, rel=1e-12)


def _reconstruct_net_z(b):
    if b.convention == "literal":
        return b.normal + b.f_magnetic[2] + b.f_diamagnetic[2] + b.f_adhesive - b.f_gravity \
            - b.f_electrostatic - b.f_buoyancy
    return b.normal + b.f_magnetic[2] + b.f_diamagnetic[2] + b.f_adhesive + b.f_buoyancy \
        - b.f_gravity - b.f_electrostatic


@given(st.floats(-1e-2, 1e-2), st.floats(-1e-2, 1e-2), st.floats(-1e-2, 1e-2),
       st.floats(0, 1e-5), st.floats(0, 1e-5), st.floats(0, 0.1),
       st.sampled_from(["physical", "literal"]))
def test_breakdown_self_consistent(fx, fy, fz, fa, fes, v, conv):
    s = replace(default_scene(), f_adhesive=fa, f_electrostatic=fes, convention=conv)
    b = breakdown_from_magnetic(s, [fx, fy, fz], v)
    assert b.net_z == _reconstruct_net_z(b)
    assert b.net_x == b.f_magnetic[0] - b.f_friction - b.f_drag
    assert b.f_friction == s.wounding_robot.friction_coeff * b.normal
    assert b.normal >= 0.0
    if not b.lift_off:
        assert b.net_z == pytest.approx(0.0, abs=1e-15)


def test_diamagnetic_term_enters_z_balance(scene):
    s = replace(scene, include_diamagnetic=True, x_offset=100e-6)
    b = force_breakdown(s)
    assert b.f_diamagnetic[2] != 0.0
    assert b.f_diamagnetic[0] == 0.0
    ref = force_breakdown(replace(s, include_diamagnetic=False))
    assert b.normal == pytest.approx(ref.normal - b.f_diamagnetic[2], rel=1e-12)


# --- friction trace ----------------------------------------------------------

@pytest.fixture(scope="module")
def trace(scene):
    return run_friction_trace(scene)


def test_trace_reproduces_friction(trace):
    assert len(trace) == 101
    assert trace.max_static_friction == pytest.approx(1.32e-9, rel=0.2)
    assert np.all(trace.normal >= 0)
    np.testing.assert_allclose(trace.offsets, 0.005 * trace.times)


def test_trace_at_rest(scene):
    t = run_friction_trace(scene, FrictionRunSpec(speed=0.0))
    np.testing.assert_array_equal(t.friction, 0.0)
    np.testing.assert_array_equal(t.drag, 0.0)


def test_trace_step_independent(scene, trace):
    fine = run_friction_trace(scene, FrictionRunSpec(dt=0.005))
    assert len(fine) == 201
    assert fine.max_static_friction == pytest.approx(trace.max_static_friction, rel=1e-9)
    np.testing.assert_allclose(fine.normal[::2], trace.normal, rtol=1e-12)


def test_trace_deterministic(scene, trace):
    again = run_friction_trace(scene)
    for name in ("times", "friction", "drag", "normal", "coulomb"):
        np.testing.assert_array_equal(getattr(again, name), getattr(trace, name))


def test_trace_bad_spec(scene):
    with pytest.raises(ValueError):
        run_friction_trace(scene, FrictionRunSpec(dt=0.0))


# --- peak and planner --------------------------------------------------------

def test_peak_of_monotone_curve():
    c = ForceCurve(np.arange(5.0), np.column_stack([np.arange(5.0), np.zeros(5), np.zeros(5)]))
    assert find_peak(c) == (4.0, 4.0)


def test_peak_tie_goes_to_smaller_offset():
    fx = np.array([0.0, 2.0, 1.0, 2.0])
    c = ForceCurve(np.arange(4.0), np.column_stack([fx, np.zeros(4), np.zeros(4)]))
    assert find_peak(c) == (1.0, 2.0)


def test_default_peak(curve):
    d, f = find_peak(curve)
    assert abs(d - 150e-6) <= 10e-6 + 1e-12
    assert f == pytest.approx(4.64e-3, rel=0.5)


def test_plan_zero_requirement(scene, curve):
    plan = plan_offset(scene, curve, 0.0, speed=0.005)
    assert plan.feasible
    lo, hi = plan.window
    assert lo <= plan.peak_offset <= hi


def test_plan_infeasible(scene, curve):
    p0 = plan_offset(scene, curve, 0.0, speed=0.005)
    plan = plan_offset(scene, curve, 2 * p0.peak_margin, speed=0.005)
    assert not plan.feasible
    assert plan.window is None


def test_plan_boundary_at_known_margin(scene, curve):
    req = margin(scene, 100e-6, 0.005)
    lo, hi = plan_offset(scene, curve, req, speed=0.005).window
    assert abs(lo - 100e-6) <= 1e-6


def test_plan_negative_requirement(scene, curve):
    with pytest.raises(ValueError):
        plan_offset(scene, curve, -1.0)


@settings(max_examples=3, deadline=None)
@given(st.floats(0.1, 0.9))
def test_plan_window_consistent(scene, curve, frac):
    p0 = plan_offset(scene, curve, 0.0, speed=0.005)
    req = frac * p0.peak_margin
    lo, hi = plan_offset(scene, curve, req, speed=0.005).window
    for d in np.linspace(lo, hi, 12)[1:-1]:
        assert margin(scene, d, 0.005) >= req - 1e-12
    for d in (lo, hi):
        if 0.0 < d < 500e-6:
            assert margin(scene, d, 0.005) == pytest.approx(req, abs=1e-9)
