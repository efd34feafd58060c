"""Domain types, physical constants and the default two-robot scene.

Frame conventions
-----------------
* World frame: z up, gravity along -z.  The base robot sits below the
  wounding robot; the sweep variable moves the base robot along +x.
* A robot's body frame has its origin at the body centroid.  ``length``
  runs along y (the robot centreline, along which the magnets are placed
  in line), ``width`` along x and ``height`` along z.
* ``Scene.x_offset`` is the lead of the base robot's centreline ahead of
  the wounding robot's centreline along +x.  With attracting arrays the
  lateral magnetic pull on the wounding robot is then along +x.
* ``Scene.z_gap`` separates the two magnet planes (mean magnet centre
  heights), not the bodies.

All lengths are metres, forces newtons, flux densities tesla.
"""

from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

MU0 = 4e-7 * np.pi

# Defaults that the source leaves open; see README "Model defaults".
NDFEB_REMANENCE = 1.2  # T
NDFEB_DENSITY = 7500.0  # kg/m^3
SU8_DENSITY = 1190.0  # kg/m^3
WATER_DENSITY = 1000.0
WATER_VISCOSITY = 1e-3
WATER_SUSCEPTIBILITY = -2.0e-5

BODY_LENGTH = 2e-3
BODY_WIDTH = 0.25e-3
BODY_HEIGHT = 0.4e-3
MAGNET_DIAMETER = 0.25e-3
MAGNET_HEIGHT = 0.25e-3
FRICTION_COEFF = 0.05

# Result of magrobot.calibration.calibrate_z_gap for the default robots:
# the 150 um peak target would need the bodies to interpenetrate, so the
# fit stops at the contact gap (bodies touching), where the peak sits at
# ~160 um.
CALIBRATED_Z_GAP = 4e-4
# mu * A_bottom * v / F with F = 1.32 nN, v = 5 mm/s, A_bottom = 2 mm x 0.25 mm
CALIBRATED_SHEAR_GAP = WATER_VISCOSITY * BODY_LENGTH * BODY_WIDTH * 0.005 / 1.32e-9


def vec3(v) -> np.ndarray:
    """Read-only float array of shape (3,)."""
    a = np.array(v, dtype=float).reshape(3)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class PhysConstants:
    g: float = 9.81

    @property
    def mu0(self) -> float:
        return MU0


def _arrays_key(obj, names):
    return tuple(getattr(obj, n).tobytes() if isinstance(getattr(obj, n), np.ndarray)
                 else getattr(obj, n) for n in names)


@dataclass(frozen=True, eq=False)
class CylMagnet:
    """Axially magnetised cylinder; ``magnetization`` is signed along ``axis``."""

    center: np.ndarray
    axis: np.ndarray
    radius: float
    height: float
    magnetization: float
    density: float = NDFEB_DENSITY

    def __post_init__(self):
        object.__setattr__(self, "center", vec3(self.center))
        object.__setattr__(self, "axis", vec3(self.axis))

    def _key(self):
        return _arrays_key(self, ("center", "axis", "radius", "height", "magnetization", "density"))

    def __eq__(self, other):
        return isinstance(other, CylMagnet) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def volume(self) -> float:
        return np.pi * self.radius**2 * self.height

    @property
    def moment(self) -> np.ndarray:
        """Dipole moment vector, A m^2."""
        return self.magnetization * self.volume * self.axis

    def translated(self, offset) -> "CylMagnet":
        return replace(self, center=self.center + np.asarray(offset, dtype=float))


@dataclass(frozen=True)
class RobotBody:
    length: float = BODY_LENGTH
    width: float = BODY_WIDTH
    height: float = BODY_HEIGHT
    density: float = SU8_DENSITY
    magnets: tuple = ()
    friction_coeff: float = FRICTION_COEFF

    def __post_init__(self):
        object.__setattr__(self, "magnets", tuple(self.magnets))

    @property
    def half_extents(self) -> np.ndarray:
        return vec3([0.5 * self.width, 0.5 * self.length, 0.5 * self.height])

    @property
    def volume(self) -> float:
        return self.length * self.width * self.height

    @property
    def cross_section_area(self) -> float:
        # face normal to the direction of travel (+x)
        return self.length * self.height

    @property
    def bottom_area(self) -> float:
        return self.length * self.width

    @property
    def magnet_plane_z(self) -> float:
        if not self.magnets:
            return 0.0
        return float(np.mean([m.center[2] for m in self.magnets]))


@dataclass(frozen=True)
class Fluid:
    density: float = WATER_DENSITY
    dynamic_viscosity: float = WATER_VISCOSITY


@dataclass(frozen=True, eq=False)
class DiamagneticBody:
    """Axis-aligned cuboid with linear magnetisation M = (chi / mu0) B."""

    center: np.ndarray
    half_extents: np.ndarray
    susceptibility: float = WATER_SUSCEPTIBILITY

    def __post_init__(self):
        object.__setattr__(self, "center", vec3(self.center))
        object.__setattr__(self, "half_extents", vec3(self.half_extents))

    def _key(self):
        return _arrays_key(self, ("center", "half_extents", "susceptibility"))

    def __eq__(self, other):
        return isinstance(other, DiamagneticBody) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


@dataclass(frozen=True)
class Scene:
    base_robot: RobotBody
    wounding_robot: RobotBody
    z_gap: float = CALIBRATED_Z_GAP
    x_offset: float = 0.0
    fluid: Fluid = field(default_factory=Fluid)
    constants: PhysConstants = field(default_factory=PhysConstants)
    f_adhesive: float = 0.0
    f_electrostatic: float = 0.0
    shear_gap: float = CALIBRATED_SHEAR_GAP
    # None -> wounding robot height
    hydraulic_diameter: float | None = None
    # "physical": buoyancy acts upward; "literal": buoyancy grouped with the
    # downward terms
    convention: str = "physical"
    include_diamagnetic: bool = False
    body_susceptibility: float = WATER_SUSCEPTIBILITY

    def base_origin(self) -> np.ndarray:
        return vec3([self.x_offset, 0.0, -self.base_robot.magnet_plane_z])

    def wounding_origin(self) -> np.ndarray:
        return vec3([0.0, 0.0, self.z_gap - self.wounding_robot.magnet_plane_z])

    def base_magnets(self) -> tuple:
        o = self.base_origin()
        return tuple(m.translated(o) for m in self.base_robot.magnets)

    def wounding_magnets(self) -> tuple:
        o = self.wounding_origin()
        return tuple(m.translated(o) for m in self.wounding_robot.magnets)

    def wounding_body(self) -> DiamagneticBody:
        r = self.wounding_robot
        return DiamagneticBody(self.wounding_origin(), r.half_extents, self.body_susceptibility)

    @property
    def d_h(self) -> float:
        if self.hydraulic_diameter is None:
            return self.wounding_robot.height
        return self.hydraulic_diameter

    def with_offset(self, x_offset: float) -> "Scene":
        return replace(self, x_offset=float(x_offset))


@dataclass(frozen=True)
class ForceBreakdown:
    """All forces on the wounding robot at one configuration.

    Scalars are magnitudes with the sign carried by the balance equations;
    ``f_magnetic`` and ``f_diamagnetic`` are signed world-frame vectors.
    ``f_shear`` is the viscous wall-shear channel, reported next to (not
    inside) the Coulomb friction ``f_friction``.
    """

    f_magnetic: np.ndarray
    f_gravity: float
    f_buoyancy: float
    f_drag: float
    f_electrostatic: float
    f_adhesive: float
    normal: float
    f_friction: float
    f_shear: float
    net_x: float
    net_z: float
    f_diamagnetic: np.ndarray = field(default_factory=lambda: vec3([0.0, 0.0, 0.0]))
    lift_off: bool = False
    convention: str = "physical"


@dataclass(frozen=True)
class SweepSpec:
    start: float = 0.0
    end: float = 500e-6
    step: float = 10e-6

    @property
    def count(self) -> int:
        return int(np.floor((self.end - self.start) / self.step * (1 + 1e-12) + 1e-9)) + 1

    def offsets(self) -> np.ndarray:
        return self.start + self.step * np.arange(self.count)


@dataclass(frozen=True)
class FrictionRunSpec:
    duration: float = 1.0
    dt: float = 0.01
    speed: float = 0.005

    @property
    def count(self) -> int:
        return int(round(self.duration / self.dt)) + 1

    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.count)


@dataclass(frozen=True)
class ForceCurve:
    """Sampled force on the wounding robot versus offset.

    ``forces`` has shape (n, 3).  ``metadata`` carries the scene hash and a
    timestamp and is not part of equality.
    """

    offsets: np.ndarray
    forces: np.ndarray
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        offsets = np.array(self.offsets, dtype=float).reshape(-1)
        forces = np.array(self.forces, dtype=float).reshape(-1, 3)
        if len(offsets) == 0:
            raise ValueError("a force curve needs at least one sample")
        if len(offsets) != len(forces):
            raise ValueError("offsets and forces differ in length")
        if np.any(np.diff(offsets) <= 0):
            raise ValueError("offsets must be strictly increasing")
        offsets.setflags(write=False)
        forces.setflags(write=False)
        object.__setattr__(self, "offsets", offsets)
        object.__setattr__(self, "forces", forces)

    def __len__(self):
        return len(self.offsets)

    def __eq__(self, other):
        if not isinstance(other, ForceCurve):
            return NotImplemented
        return (np.array_equal(self.offsets, other.offsets)
                and np.array_equal(self.forces, other.forces))

    def component(self, axis) -> np.ndarray:
        return self.forces[:, _axis_index(axis)]


def _axis_index(axis) -> int:
    if isinstance(axis, str):
        return "xyz".index(axis.lower())
    return int(axis)


# ---------------------------------------------------------------------------
# default configuration

def default_magnets(remanence: float = NDFEB_REMANENCE, body_length: float = BODY_LENGTH,
                  diameter: float = MAGNET_DIAMETER, height: float = MAGNET_HEIGHT,
                  density: float = NDFEB_DENSITY, count: int = 3) -> tuple:
    """Magnets in line along the body centreline, magnetised +z.

    Centres sit at mid-height of the body and at the midpoints of
    ``count`` equal segments of its length, so the array is symmetric
    about both vertical planes through the centroid.
    """
    seg = body_length / count
    ys = -0.5 * body_length + seg * (np.arange(count) + 0.5)
    M = remanence / MU0
    return tuple(CylMagnet([0.0, y, 0.0], [0.0, 0.0, 1.0], 0.5 * diameter, height, M, density)
                 for y in ys)


def default_robot(remanence: float = NDFEB_REMANENCE, body_density: float = SU8_DENSITY,
                magnet_density: float = NDFEB_DENSITY, **dims) -> RobotBody:
    body = RobotBody(density=body_density, **dims)
    mags = default_magnets(remanence, body.length, density=magnet_density)
    return replace(body, magnets=mags)


def default_scene(remanence: float = NDFEB_REMANENCE, **overrides) -> Scene:
    """The default scene: two identical robots with attracting arrays."""
    return Scene(default_robot(remanence), default_robot(remanence), **overrides)


def contact_z_gap(scene: Scene) -> float:
    """Smallest z_gap at which the two bodies do not interpenetrate."""
    b, w = scene.base_robot, scene.wounding_robot
    return 0.5 * (b.height + w.height) + w.magnet_plane_z - b.magnet_plane_z


# ---------------------------------------------------------------------------
# validation

class Violation(NamedTuple):
    code: str
    message: str


class InvalidSceneError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in self.violations))


def _finite(*vals) -> bool:
    return all(np.all(np.isfinite(np.asarray(v, dtype=float))) for v in vals)


def _magnet_violations(m: CylMagnet, where: str) -> list:
    out = []
    if not _finite(m.center, m.axis, m.radius, m.height, m.magnetization, m.density):
        out.append(Violation("non_finite", f"{where}: magnet has non-finite values"))
        return out
    if abs(np.linalg.norm(m.axis) - 1.0) > 1e-12:
        out.append(Violation("axis_not_unit", f"{where}: magnet axis must be a unit vector"))
    if not m.radius > 0:
        out.append(Violation("magnet_radius", f"{where}: magnet radius must be positive"))
    if not m.height > 0:
        out.append(Violation("magnet_height", f"{where}: magnet height must be positive"))
    if not m.density > 0:
        out.append(Violation("magnet_density", f"{where}: magnet density must be positive"))
    return out


def _magnet_in_box(m: CylMagnet, half: np.ndarray, tol: float = 1e-12) -> bool:
    # axis-aligned bounding box of a cylinder with arbitrary axis
    a = np.abs(m.axis)
    ext = 0.5 * m.height * a + m.radius * np.sqrt(np.clip(1.0 - a**2, 0.0, None))
    return bool(np.all(np.abs(m.center) + ext <= half + tol))


def robot_violations(robot: RobotBody, where: str = "robot") -> list:
    out = []
    dims = {"length": robot.length, "width": robot.width, "height": robot.height,
            "density": robot.density}
    for name, val in dims.items():
        if not _finite(val):
            out.append(Violation("non_finite", f"{where}: {name} is not finite"))
        elif not val > 0:
            out.append(Violation(f"body_{name}", f"{where}: {name} must be positive"))
    if not (_finite(robot.friction_coeff) and 0.0 <= robot.friction_coeff <= 1.0):
        out.append(Violation("friction_coeff", f"{where}: friction_coeff must lie in [0, 1]"))
    for i, m in enumerate(robot.magnets):
        v = _magnet_violations(m, f"{where} magnet {i}")
        out.extend(v)
        if not v and all(d > 0 for d in dims.values()):
            if not _magnet_in_box(m, robot.half_extents):
                out.append(Violation("magnet_outside_body", f"{where} magnet {i}: magnet outside body"))
    return out


def validate_scene(scene: Scene) -> list:
    """Every invariant violation of ``scene``; an empty list means valid."""
    out = []
    out += robot_violations(scene.base_robot, "base robot")
    out += robot_violations(scene.wounding_robot, "wounding robot")
    if not _finite(scene.z_gap) or not scene.z_gap > 0:
        out.append(Violation("z_gap", "z_gap must be positive"))
    if not _finite(scene.x_offset) or not scene.x_offset >= 0:
        out.append(Violation("x_offset", "x_offset must be non-negative"))
    for name in ("f_adhesive", "f_electrostatic"):
        val = getattr(scene, name)
        if not _finite(val) or not val >= 0:
            out.append(Violation(name, f"{name} must be non-negative"))
    if not _finite(scene.shear_gap) or not scene.shear_gap > 0:
        out.append(Violation("shear_gap", "shear_gap must be positive"))
    if scene.hydraulic_diameter is not None and not (
            _finite(scene.hydraulic_diameter) and scene.hydraulic_diameter > 0):
        out.append(Violation("hydraulic_diameter", "hydraulic_diameter must be positive"))
    if not (_finite(scene.fluid.density) and scene.fluid.density > 0):
        out.append(Violation("fluid_density", "fluid density must be positive"))
    if not (_finite(scene.fluid.dynamic_viscosity) and scene.fluid.dynamic_viscosity > 0):
        out.append(Violation("fluid_viscosity", "fluid viscosity must be positive"))
    if not (_finite(scene.constants.g) and scene.constants.g > 0):
        out.append(Violation("gravity", "g must be positive"))
    if scene.convention not in ("physical", "literal"):
        out.append(Violation("convention", "convention must be 'physical' or 'literal'"))
    if not (_finite(scene.body_susceptibility) and abs(scene.body_susceptibility) < 1):
        out.append(Violation("susceptibility", "body susceptibility must satisfy |chi| < 1"))
    if not out and _bodies_overlap(scene):
        out.append(Violation("robots_overlap", "robot bodies overlap"))
    return out


def _bodies_overlap(scene: Scene) -> bool:
    d = np.abs(scene.wounding_origin() - scene.base_origin())
    reach = scene.wounding_robot.half_extents + scene.base_robot.half_extents
    return bool(np.all(d < reach - 1e-15))


def check_scene(scene: Scene) -> None:
    violations = validate_scene(scene)
    if violations:
        raise InvalidSceneError(violations)
