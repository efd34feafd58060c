"""
Choosing an offset that delivers a given force
===============================================

The planner asks: over which offsets is the pull, minus friction and
drag, still at least the force needed to move the cells?
"""

from magrobot import default_scene, plan_offset, run_em_sweep

scene = default_scene()
curve = run_em_sweep(scene)
speed = 0.005

for required in (0.0, 1e-3, 3e-3, 1e-2):
    plan = plan_offset(scene, curve, required, speed)
    if plan.feasible:
        lo, hi = plan.window
        print(f"need {required * 1e3:5.1f} mN -> offsets {lo * 1e6:6.1f} .. {hi * 1e6:6.1f} um")
    else:
        print(f"need {required * 1e3:5.1f} mN -> out of reach (best margin {plan.peak_margin * 1e3:.2f} mN)")
