import numpy as np
import pytest
from dataclasses import replace
from hypothesis import given, settings
from hypothesis import strategies as st

from magrobot import sweep as sweep_mod
from magrobot.magnetostatics import FieldSource, force_between_robots, magnet_forces
from magrobot.model import ForceCurve, SweepSpec
from magrobot.sweep import SweepError, check_sweep_spec, curve_stats, run_em_sweep, scene_hash


def test_default_sweep_shape(curve):
    assert len(curve.offsets) == 51
    assert curve.forces.shape == (51, 3)
    assert curve.offsets[0] == 0.0 and curve.offsets[-1] == pytest.approx(500e-6)
    assert curve.metadata["quad_order"] == 8


def test_single_point_sweep(scene):
    c = run_em_sweep(scene, SweepSpec(120e-6, 120e-6, 10e-6))
    assert len(c.offsets) == 1
    np.testing.assert_array_equal(c.forces[0], force_between_robots(scene.with_offset(120e-6)))


def test_rerun_and_threads_identical(scene, curve):
    np.testing.assert_array_equal(run_em_sweep(scene).forces, curve.forces)
    np.testing.assert_array_equal(run_em_sweep(scene, threads=3).forces, curve.forces)


@settings(max_examples=15, deadline=None)
@given(st.floats(0, 1e-4), st.floats(1e-6, 5e-5), st.integers(0, 4))
def test_sample_count(start, step, n):
    spec = SweepSpec(start, start + n * step, step)
    assert check_sweep_spec(spec) == []
    assert len(spec.offsets()) == n + 1


def test_bad_specs():
    assert "step must be positive" in check_sweep_spec(SweepSpec(step=0.0))
    assert check_sweep_spec(SweepSpec(start=1e-4, end=0.0))
    assert check_sweep_spec(SweepSpec(end=15e-6, step=10e-6))


def test_bad_spec_refused(scene):
    with pytest.raises(ValueError):
        run_em_sweep(scene, SweepSpec(step=-1.0))


def test_lateral_null_at_zero(curve):
    fmax = np.abs(curve.forces[:, 0]).max()
    assert abs(curve.forces[0, 0]) <= 1e-6 * fmax
    assert np.abs(curve.forces[:, 1]).max() <= 1e-6 * fmax


def test_vertical_force_even_in_offset(scene):
    # mirror the base array to negative offsets by hand; scenes keep offsets >= 0
    for d in (50e-6, 200e-6):
        f_pos = force_between_robots(scene.with_offset(d))
        src = FieldSource([m.translated([-2 * d, 0, 0]) for m in scene.with_offset(d).base_magnets()])
        f_neg = magnet_forces(scene.wounding_magnets(), src).sum(axis=0)
        assert f_neg[2] == pytest.approx(f_pos[2], rel=1e-12)
        assert f_neg[0] == pytest.approx(-f_pos[0], rel=1e-12)


def test_failure_reports_offset(scene, monkeypatch):
    real = sweep_mod.force_between_robots

    def flaky(s, *a, **k):
        if abs(s.x_offset - 30e-6) < 1e-12:
            raise ArithmeticError("boom")
        return real(s, *a, **k)

    monkeypatch.setattr(sweep_mod, "force_between_robots", flaky)
    with pytest.raises(SweepError) as info:
        run_em_sweep(scene, SweepSpec(0.0, 50e-6, 10e-6))
    assert info.value.offset == pytest.approx(30e-6)
    assert "3.000000000e-05" in str(info.value)


def test_scene_hash_tracks_scene(scene):
    assert scene_hash(scene) == scene_hash(replace(scene))
    assert scene_hash(scene) != scene_hash(replace(scene, z_gap=0.5e-3))


def _synthetic(fx):
    d = np.linspace(0.0, 1.0, len(fx))
    return ForceCurve(d, np.column_stack([fx, np.zeros(len(fx)), -np.ones(len(fx))]))


def test_stats_sine():
    d = np.linspace(0, 2 * np.pi, 101)
    c = ForceCurve(d, np.column_stack([np.sin(d), np.zeros(101), np.cos(d)]))
    st_ = curve_stats(c)
    assert st_["x"].max_offset == pytest.approx(np.pi / 2, abs=np.pi / 100)
    assert st_["x"].zero_crossings == pytest.approx((np.pi,), abs=1e-3)
    assert st_["z"].zero_crossings == pytest.approx((np.pi / 2, 3 * np.pi / 2), abs=1e-3)
    assert [s[2] for s in st_["x"].monotone_segments] == [1, -1, 1]
    assert st_["y"].zero_crossings == ()


def test_stats_constant():
    s = curve_stats(_synthetic(np.full(5, 2.0)))["x"]
    assert s.zero_crossings == ()
    assert s.max_offset == 0.0
    assert s.monotone_segments == ((0.0, 1.0, 0),)


def test_stats_linear_crossing():
    s = curve_stats(_synthetic(np.array([-3.0, -1.0, 1.0, 3.0])))["x"]
    assert s.zero_crossings == pytest.approx((0.5,), abs=1e-15)


def test_stats_default_curve(curve):
    s = curve_stats(curve)
    assert abs(s["x"].max_offset - 150e-6) <= 10e-6 + 1e-12
    assert s["z"].min_offset == 0.0  # strongest attraction when aligned
