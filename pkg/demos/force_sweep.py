"""
Lateral pull between two magnet-carrying robots
================================================

Two identical robots each carry three NdFeB cylinders in a line.  The
wounding robot rides on top of the base robot; sliding the base robot
sideways drags the wounding robot along.  Here we sweep the sideways
offset and look at where the pull is strongest.
"""

import numpy as np

from magrobot import curve_stats, default_scene, find_peak, run_em_sweep

scene = default_scene()
curve = run_em_sweep(scene)

# F_x is the useful pull, F_z presses the robots together
for d, (fx, fy, fz) in zip(curve.offsets[::5], curve.forces[::5]):
    print(f"offset {d * 1e6:6.1f} um   Fx {fx * 1e3:7.3f} mN   Fz {fz * 1e3:7.3f} mN")

d, fx = find_peak(curve)
print(f"\npeak pull {fx * 1e3:.3f} mN at {d * 1e6:.0f} um")

# F_y vanishes by mirror symmetry of the in-line arrays
print("largest |Fy|:", np.abs(curve.forces[:, 1]).max(), "N")

stats = curve_stats(curve)
print("Fx rises then falls:", [s[2] for s in stats["x"].monotone_segments])
