"""Lumped fluid and body forces on a surface-bound micro robot."""

import numpy as np

from .model import Fluid, PhysConstants, RobotBody


def reynolds(fluid: Fluid, speed: float, hydraulic_diameter: float) -> float:
    """Re = rho v D_h / mu."""
    if not hydraulic_diameter > 0:
        raise ValueError("hydraulic diameter must be positive")
    if speed < 0:
        raise ValueError("speed must be non-negative")
    return fluid.density * speed * hydraulic_diameter / fluid.dynamic_viscosity


def drag_coefficient(re: float) -> float:
    """Sphere-type correlation C_d = 24/Re (1 + Re^(2/3) / 6)."""
    if not re > 0:
        raise ValueError("drag coefficient is undefined for Re <= 0")
    return float(24.0 / re * (1.0 + np.cbrt(re) ** 2 / 6.0))


def drag_force(fluid: Fluid, area: float, speed: float, hydraulic_diameter: float) -> float:
    """Magnitude of the drag 1/2 C_d rho A v^2 (it opposes the motion)."""
    if not area > 0:
        raise ValueError("area must be positive")
    if speed == 0:
        return 0.0
    re = reynolds(fluid, speed, hydraulic_diameter)
    # 1/2 C_d rho A v^2 with the 24/Re cancelled; stays finite when Re underflows
    stokes = 12.0 * fluid.dynamic_viscosity * area * speed / hydraulic_diameter
    return float(stokes * (1.0 + np.cbrt(re) ** 2 / 6.0))


def robot_mass_volume(robot: RobotBody):
    """(mass, displaced volume).  Magnets displace body material."""
    v_mag = sum(m.volume for m in robot.magnets)
    m_mag = sum(m.volume * m.density for m in robot.magnets)
    v_body = robot.volume
    mass = (v_body - v_mag) * robot.density + m_mag
    return mass, v_body


def body_forces(robot: RobotBody, fluid: Fluid, constants: PhysConstants = PhysConstants()):
    """(gravity, buoyancy) magnitudes in newtons."""
    mass, volume = robot_mass_volume(robot)
    return mass * constants.g, volume * fluid.density * constants.g


def wall_shear_friction(fluid: Fluid, bottom_area: float, speed: float, shear_gap: float) -> float:
    """Couette estimate mu A v / gap of the viscous drag on the robot's underside."""
    if not shear_gap > 0:
        raise ValueError("shear gap must be positive")
    return fluid.dynamic_viscosity * bottom_area * abs(speed) / shear_gap


def stokes_drag_ratio(fluid: Fluid, area: float, speeds, hydraulic_diameter: float) -> np.ndarray:
    """F_D / v over a set of speeds; constant in the creeping-flow limit."""
    speeds = np.asarray(speeds, dtype=float)
    return np.array([drag_force(fluid, area, v, hydraulic_diameter) / v for v in speeds])
