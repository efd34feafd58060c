"""Force balance, friction trace and offset planning for the wounding robot.

The z-balance is solved for the contact normal force

    physical:  N = max(0, F_G + F_ES - F_B - F_A - F_M,z)
    literal:   N = max(0, F_G + F_ES + F_B - F_A - F_M,z)

where F_M,z is the signed (upward positive) magnetic force.  The
"literal" convention groups buoyancy with the downward terms, as the
balance is often written; it is kept for comparison only.  Coulomb
friction is mu N; the x-balance is net_x = F_M,x - F_f - F_D.
"""

from dataclasses import dataclass, replace

import numpy as np

from .diamagnetics import dia_force_volume
from .hydrodynamics import body_forces, drag_force, wall_shear_friction
from .magnetostatics import DEFAULT_QUAD_ORDER, FieldSource, force_between_robots
from .model import ForceBreakdown, ForceCurve, FrictionRunSpec, Scene, _axis_index, check_scene, vec3
from .numerics import find_root

DIA_QUAD_ORDER = 8


def _net_z(normal, fmz, f_a, f_g, f_es, f_b, convention):
    if convention == "literal":
        return normal + fmz + f_a - f_g - f_es - f_b
    return normal + fmz + f_a + f_b - f_g - f_es


def breakdown_from_magnetic(scene: Scene, f_magnetic, speed: float,
                            f_diamagnetic=(0.0, 0.0, 0.0)) -> ForceBreakdown:
    """Close the force balance for a given magnetic force vector."""
    robot = scene.wounding_robot
    f_g, f_b = body_forces(robot, scene.fluid, scene.constants)
    f_d = drag_force(scene.fluid, robot.cross_section_area, speed, scene.d_h)
    f_shear = wall_shear_friction(scene.fluid, robot.bottom_area, speed, scene.shear_gap)
    f_m = vec3(f_magnetic)
    f_dia = vec3(f_diamagnetic)
    fmz = f_m[2] + f_dia[2]
    f_a, f_es = scene.f_adhesive, scene.f_electrostatic
    b_sign = 1.0 if scene.convention == "literal" else -1.0
    unclamped = f_g + f_es + b_sign * f_b - f_a - fmz
    normal = max(0.0, unclamped)
    f_f = robot.friction_coeff * normal
    return ForceBreakdown(
        f_magnetic=f_m, f_gravity=f_g, f_buoyancy=f_b, f_drag=f_d,
        f_electrostatic=f_es, f_adhesive=f_a, normal=normal, f_friction=f_f,
        f_shear=f_shear,
        net_x=f_m[0] - f_f - f_d,
        net_z=_net_z(normal, fmz, f_a, f_g, f_es, f_b, scene.convention),
        f_diamagnetic=f_dia, lift_off=unclamped < 0, convention=scene.convention,
    )


def force_breakdown(scene: Scene, speed: float = 0.0,
                    quad_order: int = DEFAULT_QUAD_ORDER) -> ForceBreakdown:
    """Every force of the balance on the wounding robot at ``speed`` (m/s)."""
    check_scene(scene)
    if scene.wounding_robot.magnets and scene.base_robot.magnets:
        f_m = force_between_robots(scene, quad_order)
    else:
        f_m = np.zeros(3)
    f_dia = np.zeros(3)
    if scene.include_diamagnetic and scene.base_robot.magnets:
        f = dia_force_volume(scene.wounding_body(), FieldSource(scene.base_magnets()), DIA_QUAD_ORDER)
        f_dia = np.array([0.0, 0.0, f[2]])
    return breakdown_from_magnetic(scene, f_m, speed, f_dia)


@dataclass(frozen=True)
class FrictionTrace:
    times: np.ndarray
    friction: np.ndarray  # viscous wall-shear channel
    drag: np.ndarray
    normal: np.ndarray
    coulomb: np.ndarray
    offsets: np.ndarray

    @property
    def max_static_friction(self) -> float:
        return float(np.max(self.friction))

    def __len__(self):
        return len(self.times)


def run_friction_trace(scene: Scene, spec: FrictionRunSpec = FrictionRunSpec(),
                       quad_order: int = DEFAULT_QUAD_ORDER) -> FrictionTrace:
    """Quasi-static trace of the dragged robot.

    Sample k sits at offset x_offset + k * speed * dt; the robot moves at
    ``spec.speed`` throughout, so drag and shear are evaluated at that
    speed while the magnetic force (and hence N) follows the geometry.
    """
    check_scene(scene)
    if not (spec.duration > 0 and 0 < spec.dt <= spec.duration):
        raise ValueError("friction run needs duration > 0 and 0 < dt <= duration")
    times = spec.times()
    offsets = scene.x_offset + spec.speed * times
    rows = [force_breakdown(scene.with_offset(d), spec.speed, quad_order) for d in offsets]
    return FrictionTrace(
        times=times,
        friction=np.array([b.f_shear for b in rows]),
        drag=np.array([b.f_drag for b in rows]),
        normal=np.array([b.normal for b in rows]),
        coulomb=np.array([b.f_friction for b in rows]),
        offsets=offsets,
    )


def find_peak(curve: ForceCurve, component="x"):
    """(offset, value) of the largest sample; ties go to the smaller offset."""
    vals = curve.forces[:, _axis_index(component)]
    i = int(np.argmax(vals))  # argmax returns the first maximum
    return float(curve.offsets[i]), float(vals[i])


@dataclass(frozen=True)
class OffsetPlan:
    window: tuple | None  # (lo, hi) in metres, None when infeasible
    peak_offset: float
    peak_force_x: float
    required_force: float
    peak_margin: float

    @property
    def feasible(self) -> bool:
        return self.window is not None


def margin(scene: Scene, offset: float, speed: float,
           quad_order: int = DEFAULT_QUAD_ORDER) -> float:
    """F_M,x - F_f - F_D at ``offset``: the pull left over for the cells."""
    return force_breakdown(scene.with_offset(offset), speed, quad_order).net_x


def plan_offset(scene: Scene, curve: ForceCurve, required_force: float, speed: float = 0.0,
                tol: float = 1e-9, quad_order: int = DEFAULT_QUAD_ORDER) -> OffsetPlan:
    """Offsets at which the robot can still deliver ``required_force``.

    The sampled curve gives margins at the sweep offsets; every sign
    change of margin - required_force between neighbouring samples is
    refined with :func:`find_root` on the directly evaluated margin.  The
    reported window spans the contiguous feasible run containing the best
    sample.  Feasible stretches narrower than one sweep step and lying
    wholly between samples are not resolved.
    """
    if required_force < 0:
        raise ValueError("required force must be non-negative")
    offsets = curve.offsets
    margins = np.array([breakdown_from_magnetic(scene.with_offset(d), f, speed).net_x
                        for d, f in zip(offsets, curve.forces)])
    peak_offset, peak_fx = find_peak(curve, "x")
    best = int(np.argmax(margins))
    plan = OffsetPlan(None, peak_offset, peak_fx, required_force, float(margins[best]))
    excess = margins - required_force
    if excess[best] < 0:
        return plan

    def g(d):
        return margin(scene, d, speed, quad_order) - required_force

    lo_i = best
    while lo_i > 0 and excess[lo_i - 1] >= 0:
        lo_i -= 1
    hi_i = best
    while hi_i < len(offsets) - 1 and excess[hi_i + 1] >= 0:
        hi_i += 1
    lo = offsets[lo_i] if lo_i == 0 else find_root(g, offsets[lo_i - 1], offsets[lo_i], tol)
    hi = offsets[hi_i] if hi_i == len(offsets) - 1 else find_root(g, offsets[hi_i], offsets[hi_i + 1], tol)
    return replace(plan, window=(float(lo), float(hi)))
