"""Run configuration: a sectioned key = value text format (INI style).

Every key is optional; omitted keys take the default scene.  Recognised
sections and keys::

    [scene]        x_offset, f_adhesive, f_electrostatic, hydraulic_diameter,
                   convention (physical | literal), include_diamagnetic,
                   body_susceptibility
    [constants]    g
    [fluid]        density, viscosity
    [robot]        length, width, height, friction_coeff   (both robots)
    [magnets]      count, diameter, height                 (both robots)
    [calibration]  remanence, body_density, magnet_density, shear_gap,
                   z_gap (a number, or "calibrate")
    [base_robot], [wounding_robot]
                   length, width, height, density, friction_coeff
    [base_magnet.N], [wounding_magnet.N]
                   center, axis, radius, height, magnetization, density
                   (if present, replace that robot's generated array)
    [sweep]        start, end, step
    [friction]     duration, dt, speed
    [run]          output_path, quad_order, model (exact | dipole)

Lengths in metres.  Vectors are written ``x, y, z``.
"""

import configparser
import re
from dataclasses import dataclass, field, replace

from .magnetostatics import DEFAULT_QUAD_ORDER, FieldModel
from .model import (MU0, BODY_HEIGHT, BODY_LENGTH, BODY_WIDTH, CALIBRATED_SHEAR_GAP, CALIBRATED_Z_GAP,
                    FRICTION_COEFF, MAGNET_DIAMETER, MAGNET_HEIGHT, NDFEB_DENSITY, NDFEB_REMANENCE,
                    SU8_DENSITY, WATER_SUSCEPTIBILITY, CylMagnet, Fluid, FrictionRunSpec,
                    PhysConstants, RobotBody, Scene, SweepSpec, default_magnets, validate_scene)


class ConfigError(ValueError):
    """Malformed or invalid configuration."""


class ConfigParseError(ConfigError):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ConfigValidationError(ConfigError):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("invalid configuration:\n" + "\n".join(f"  - {p}" for p in self.problems))


@dataclass(frozen=True)
class RunConfig:
    scene: Scene
    sweep: SweepSpec = SweepSpec()
    friction: FrictionRunSpec = FrictionRunSpec()
    output_path: str | None = None
    quad_order: int = DEFAULT_QUAD_ORDER
    model: FieldModel = FieldModel.EXACT
    calibrate_z_gap: bool = False
    calibration: dict = field(default_factory=dict, compare=False)


_KEYS = {
    "scene": {"x_offset", "f_adhesive", "f_electrostatic", "hydraulic_diameter", "convention",
              "include_diamagnetic", "body_susceptibility"},
    "constants": {"g"},
    "fluid": {"density", "viscosity"},
    "robot": {"length", "width", "height", "friction_coeff"},
    "magnets": {"count", "diameter", "height"},
    "calibration": {"remanence", "body_density", "magnet_density", "shear_gap", "z_gap"},
    "base_robot": {"length", "width", "height", "density", "friction_coeff"},
    "wounding_robot": {"length", "width", "height", "density", "friction_coeff"},
    "sweep": {"start", "end", "step"},
    "friction": {"duration", "dt", "speed"},
    "run": {"output_path", "quad_order", "model"},
}
_MAGNET_KEYS = {"center", "axis", "radius", "height", "magnetization", "density"}
_MAGNET_SECTION = re.compile(r"^(base|wounding)_magnet\.(\d+)$")


def _locate(text, section, key):
    current = None
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1].strip()
        elif current == section and "=" in s:
            k = s.split("=", 1)[0].strip().lower()
            if k == key:
                return n, line.index("=") + 2
    return None, None


class _Reader:
    """Typed access to a parsed document, collecting every problem."""

    def __init__(self, parser, text):
        self.p = parser
        self.text = text
        self.problems = []

    def _raw(self, section, key):
        if self.p.has_section(section) and self.p.has_option(section, key):
            return self.p.get(section, key)
        return None

    def _bad(self, section, key, what):
        line, col = _locate(self.text, section, key)
        where = f" (line {line}, column {col})" if line else ""
        self.problems.append(f"[{section}] {key}: {what}{where}")

    def float(self, section, key, default):
        raw = self._raw(section, key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            self._bad(section, key, f"expected a number, got {raw!r}")
            return default

    def int(self, section, key, default):
        raw = self._raw(section, key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            self._bad(section, key, f"expected an integer, got {raw!r}")
            return default

    def bool(self, section, key, default):
        raw = self._raw(section, key)
        if raw is None:
            return default
        try:
            return self.p.getboolean(section, key)
        except ValueError:
            self._bad(section, key, f"expected true/false, got {raw!r}")
            return default

    def str(self, section, key, default, choices=None):
        raw = self._raw(section, key)
        if raw is None:
            return default
        if choices is not None and raw not in choices:
            self._bad(section, key, f"expected one of {sorted(choices)}, got {raw!r}")
            return default
        return raw

    def vec(self, section, key, default):
        raw = self._raw(section, key)
        if raw is None:
            return default
        try:
            vals = [float(v) for v in raw.split(",")]
        except ValueError:
            vals = []
        if len(vals) != 3:
            self._bad(section, key, f"expected three comma-separated numbers, got {raw!r}")
            return default
        return vals


def _parse_document(text):
    parser = configparser.ConfigParser(interpolation=None, default_section="__unused__",
                                       inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigParseError("key outside any [section]", exc.lineno, 1) from exc
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
        raise ConfigParseError(exc.message.split(": ", 1)[-1], exc.lineno, 1) from exc
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigParseError(f"cannot parse {line.strip()!r}", lineno, 1) from exc
    for section in parser.sections():
        m = _MAGNET_SECTION.match(section)
        allowed = _MAGNET_KEYS if m else _KEYS.get(section)
        if allowed is None:
            line, _ = _locate_section(text, section)
            raise ConfigParseError(f"unknown section [{section}]", line, 1)
        for key in parser.options(section):
            if key not in allowed:
                line, _ = _locate(text, section, key)
                raise ConfigParseError(f"unknown key {key!r} in [{section}]", line, 1)
    return parser


def _locate_section(text, section):
    for n, line in enumerate(text.splitlines(), 1):
        if line.strip() == f"[{section}]":
            return n, 1
    return None, None


def _robot(r: _Reader, role, defaults, magnet_cfg):
    sec = f"{role}_robot"
    body = RobotBody(
        length=r.float(sec, "length", defaults["length"]),
        width=r.float(sec, "width", defaults["width"]),
        height=r.float(sec, "height", defaults["height"]),
        density=r.float(sec, "density", defaults["density"]),
        friction_coeff=r.float(sec, "friction_coeff", defaults["friction_coeff"]),
    )
    explicit = sorted(
        (int(m.group(2)), s) for s in r.p.sections()
        if (m := _MAGNET_SECTION.match(s)) and m.group(1) == role
    )
    if explicit:
        mags = []
        for _, s in explicit:
            mags.append(CylMagnet(
                center=r.vec(s, "center", [0.0, 0.0, 0.0]),
                axis=r.vec(s, "axis", [0.0, 0.0, 1.0]),
                radius=r.float(s, "radius", 0.5 * MAGNET_DIAMETER),
                height=r.float(s, "height", MAGNET_HEIGHT),
                magnetization=r.float(s, "magnetization", magnet_cfg["remanence"] / MU0),
                density=r.float(s, "density", magnet_cfg["magnet_density"]),
            ))
        return replace(body, magnets=tuple(mags))
    count = magnet_cfg["count"]
    if count < 0:
        r.problems.append("[magnets] count: must be non-negative")
        count = 0
    if count == 0:
        return body
    if not body.length > 0:
        return body
    mags = default_magnets(magnet_cfg["remanence"], body.length, magnet_cfg["diameter"],
                         magnet_cfg["height"], magnet_cfg["magnet_density"], count)
    return replace(body, magnets=mags)


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a configuration document."""
    parser = _parse_document(text)
    r = _Reader(parser, text)

    remanence = r.float("calibration", "remanence", NDFEB_REMANENCE)
    magnet_cfg = {
        "count": r.int("magnets", "count", 3),
        "diameter": r.float("magnets", "diameter", MAGNET_DIAMETER),
        "height": r.float("magnets", "height", MAGNET_HEIGHT),
        "remanence": remanence,
        "magnet_density": r.float("calibration", "magnet_density", NDFEB_DENSITY),
    }
    robot_defaults = {
        "length": r.float("robot", "length", BODY_LENGTH),
        "width": r.float("robot", "width", BODY_WIDTH),
        "height": r.float("robot", "height", BODY_HEIGHT),
        "density": r.float("calibration", "body_density", SU8_DENSITY),
        "friction_coeff": r.float("robot", "friction_coeff", FRICTION_COEFF),
    }
    base = _robot(r, "base", robot_defaults, magnet_cfg)
    wounding = _robot(r, "wounding", robot_defaults, magnet_cfg)

    z_raw = r.str("calibration", "z_gap", None)
    calibrate = z_raw is not None and z_raw.strip().lower() == "calibrate"
    z_gap = CALIBRATED_Z_GAP if calibrate else r.float("calibration", "z_gap", CALIBRATED_Z_GAP)

    hd = r.str("scene", "hydraulic_diameter", None)
    scene = Scene(
        base_robot=base,
        wounding_robot=wounding,
        z_gap=z_gap,
        x_offset=r.float("scene", "x_offset", 0.0),
        fluid=Fluid(r.float("fluid", "density", 1000.0), r.float("fluid", "viscosity", 1e-3)),
        constants=PhysConstants(r.float("constants", "g", 9.81)),
        f_adhesive=r.float("scene", "f_adhesive", 0.0),
        f_electrostatic=r.float("scene", "f_electrostatic", 0.0),
        shear_gap=r.float("calibration", "shear_gap", CALIBRATED_SHEAR_GAP),
        hydraulic_diameter=None if hd is None else r.float("scene", "hydraulic_diameter", None),
        convention=r.str("scene", "convention", "physical", {"physical", "literal"}),
        include_diamagnetic=r.bool("scene", "include_diamagnetic", False),
        body_susceptibility=r.float("scene", "body_susceptibility", WATER_SUSCEPTIBILITY),
    )
    sweep = SweepSpec(r.float("sweep", "start", 0.0), r.float("sweep", "end", 500e-6),
                      r.float("sweep", "step", 10e-6))
    friction = FrictionRunSpec(r.float("friction", "duration", 1.0), r.float("friction", "dt", 0.01),
                               r.float("friction", "speed", 0.005))
    quad_order = r.int("run", "quad_order", DEFAULT_QUAD_ORDER)
    model = FieldModel(r.str("run", "model", "exact", {"exact", "dipole"}))
    output_path = r.str("run", "output_path", None)

    problems = list(r.problems)
    problems += [v.message for v in validate_scene(scene)]
    problems += _spec_problems(sweep, friction, quad_order)
    if problems:
        raise ConfigValidationError(problems)
    calib = {"remanence": remanence, "z_gap": scene.z_gap, "shear_gap": scene.shear_gap}
    return RunConfig(scene, sweep, friction, output_path, quad_order, model, calibrate, calib)


def _spec_problems(sweep, friction, quad_order):
    from .sweep import check_sweep_spec
    out = check_sweep_spec(sweep)
    if not friction.duration > 0:
        out.append("duration must be positive")
    if not 0 < friction.dt <= friction.duration:
        out.append("dt must lie in (0, duration]")
    if friction.speed < 0:
        out.append("speed must be non-negative")
    if quad_order < 1:
        out.append("quad_order must be >= 1")
    return out


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    return parse_config(text)


def _f(x) -> str:
    return repr(float(x))


def scene_to_text(scene: Scene) -> str:
    """Serialise a scene so that :func:`parse_config` rebuilds it exactly."""
    lines = ["[scene]",
             f"x_offset = {_f(scene.x_offset)}",
             f"f_adhesive = {_f(scene.f_adhesive)}",
             f"f_electrostatic = {_f(scene.f_electrostatic)}",
             f"convention = {scene.convention}",
             f"include_diamagnetic = {str(scene.include_diamagnetic).lower()}",
             f"body_susceptibility = {_f(scene.body_susceptibility)}"]
    if scene.hydraulic_diameter is not None:
        lines.append(f"hydraulic_diameter = {_f(scene.hydraulic_diameter)}")
    lines += ["", "[constants]", f"g = {_f(scene.constants.g)}",
              "", "[fluid]", f"density = {_f(scene.fluid.density)}",
              f"viscosity = {_f(scene.fluid.dynamic_viscosity)}",
              "", "[calibration]", f"z_gap = {_f(scene.z_gap)}", f"shear_gap = {_f(scene.shear_gap)}"]
    for role, robot in (("base", scene.base_robot), ("wounding", scene.wounding_robot)):
        lines += ["", f"[{role}_robot]", f"length = {_f(robot.length)}", f"width = {_f(robot.width)}",
                  f"height = {_f(robot.height)}", f"density = {_f(robot.density)}",
                  f"friction_coeff = {_f(robot.friction_coeff)}"]
        if not robot.magnets:
            continue
        for i, m in enumerate(robot.magnets):
            lines += ["", f"[{role}_magnet.{i}]",
                      "center = " + ", ".join(_f(c) for c in m.center),
                      "axis = " + ", ".join(_f(c) for c in m.axis),
                      f"radius = {_f(m.radius)}", f"height = {_f(m.height)}",
                      f"magnetization = {_f(m.magnetization)}", f"density = {_f(m.density)}"]
    if not (scene.base_robot.magnets and scene.wounding_robot.magnets):
        lines += ["", "[magnets]", "count = 0"]
    return "\n".join(lines) + "\n"
