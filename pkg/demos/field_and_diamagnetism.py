"""
Field of one magnet and the push on water
==========================================

The exact field of a cylinder is compared with the point-dipole field,
then the weak diamagnetic push on a small cube of water is computed by
both the volume and the surface integral.
"""

import numpy as np

from magrobot import (CylMagnet, DiamagneticBody, FieldModel, FieldSource, b_cylinder_exact,
                      b_dipole, dia_force_surface, dia_force_volume)
from magrobot.model import MU0

magnet = CylMagnet([0, 0, 0], [0, 0, 1], 0.125e-3, 0.25e-3, 1.2 / MU0)

for n in (1, 2, 5, 10, 20):
    p = np.array([0.0, 0.0, n * 0.25e-3])
    be, bd = b_cylinder_exact(magnet, p)[2], b_dipole(magnet, p)[2]
    print(f"{n:2d} diameters: exact {be:.4e} T  dipole {bd:.4e} T  ratio {bd / be:.4f}")

water = DiamagneticBody([0, 0, -1e-3], [0.05e-3] * 3, -2e-5)
src = FieldSource([magnet], FieldModel.EXACT)
print("volume form :", dia_force_volume(water, src))
print("surface form:", dia_force_surface(water, src))
