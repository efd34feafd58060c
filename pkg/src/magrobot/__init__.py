"""Semi-analytic force simulator for magnetically coupled micro robots.

A stationary base robot drags a surface-bound wounding robot through the
magnetic coupling of two in-line arrays of NdFeB cylinders.  The package
computes the coupling force versus lateral offset, closes the contact
force balance, traces viscous friction over a drag run, and plans the
offset window that still leaves a required pulling force.
"""

from .model import (CylMagnet, DiamagneticBody, Fluid, ForceBreakdown, ForceCurve, FrictionRunSpec,
                    PhysConstants, RobotBody, Scene, SweepSpec, default_robot, default_scene,
                    validate_scene)
from .numerics import elliptic_ke, find_root, gauss_legendre, grad_central
from .magnetostatics import (FieldModel, FieldSource, b_cylinder_exact, b_dipole, b_total,
                             force_between_robots, force_on_magnet, pitch_moment)
from .diamagnetics import dia_force_surface, dia_force_volume
from .hydrodynamics import (body_forces, drag_coefficient, drag_force, reynolds,
                            wall_shear_friction)
from .statics import FrictionTrace, OffsetPlan, find_peak, force_breakdown, plan_offset, run_friction_trace
from .sweep import curve_stats, run_em_sweep
from .config import RunConfig, parse_config, scene_to_text
from .csvio import write_force_curve_csv, write_friction_csv
from .cli import cli_main

__version__ = "0.1.0"
