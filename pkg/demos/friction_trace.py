"""
Friction while the wounding robot is dragged
=============================================

The wounding robot slides over the substrate at 5 mm/s for one second.
Two friction channels are reported: viscous shear in the thin fluid film
under the robot and Coulomb friction from the contact normal force.
"""

from magrobot import default_scene, run_friction_trace, write_friction_csv

scene = default_scene(x_offset=100e-6)
trace = run_friction_trace(scene)

print(f"{len(trace)} samples")
print(f"max viscous friction  {trace.max_static_friction * 1e9:.3f} nN")
print(f"drag                  {trace.drag[0] * 1e9:.3f} nN")
print(f"Coulomb friction      {trace.coulomb.min() * 1e6:.2f} .. {trace.coulomb.max() * 1e6:.2f} uN")

# over 5 mm of travel the arrays drift out of register; where the pull turns
# upward the robot lifts off and Coulomb friction drops to zero
write_friction_csv(trace, "friction_trace.csv")
