"""Parametric offset sweep of the robot-robot magnetic force."""

import hashlib
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .magnetostatics import DEFAULT_QUAD_ORDER, FieldModel, force_between_robots
from .model import ForceCurve, Scene, SweepSpec, check_scene


class SweepError(RuntimeError):
    """Force evaluation failed at one offset; the sweep was abandoned."""

    def __init__(self, offset, cause):
        self.offset = offset
        super().__init__(f"force evaluation failed at offset {offset:.9e} m: {cause}")


def check_sweep_spec(spec: SweepSpec) -> list:
    problems = []
    if not spec.step > 0:
        problems.append("step must be positive")
    if not spec.start <= spec.end:
        problems.append("start must not exceed end")
    if spec.start < 0:
        problems.append("start must be non-negative")
    if not problems:
        n = (spec.end - spec.start) / spec.step
        if abs(n - round(n)) > 1e-9 * max(1.0, abs(n)):
            problems.append("(end - start) must be a whole number of steps")
    return problems


def scene_hash(scene: Scene) -> str:
    from .config import scene_to_text
    return hashlib.sha256(scene_to_text(scene).encode()).hexdigest()


def run_em_sweep(scene: Scene, spec: SweepSpec = SweepSpec(), quad_order: int = DEFAULT_QUAD_ORDER,
                 threads: int = 1, model=FieldModel.EXACT) -> ForceCurve:
    """Force on the wounding robot at each offset of ``spec``.

    Offsets are independent; with ``threads > 1`` they are evaluated
    concurrently and reassembled in offset order, giving the same curve
    bit for bit.
    """
    check_scene(scene)
    problems = check_sweep_spec(spec)
    if problems:
        raise ValueError("; ".join(problems))
    offsets = spec.offsets()

    def one(d):
        try:
            return force_between_robots(scene.with_offset(d), quad_order, model)
        except Exception as exc:  # noqa: BLE001 - reraised with the offset attached
            raise SweepError(d, exc) from exc

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            forces = list(pool.map(one, offsets))
    else:
        forces = [one(d) for d in offsets]
    meta = {"scene_hash": scene_hash(scene), "timestamp": time.time(),
            "quad_order": quad_order, "model": FieldModel(model).value}
    return ForceCurve(offsets, np.array(forces), meta)


@dataclass(frozen=True)
class AxisStats:
    max_offset: float
    max_value: float
    min_offset: float
    min_value: float
    zero_crossings: tuple
    monotone_segments: tuple  # (start_offset, end_offset, +1 | -1 | 0)


def _zero_crossings(d, v, atol):
    v = np.where(np.abs(v) <= atol, 0.0, v)
    nz = np.flatnonzero(v)
    out = []
    for i, j in zip(nz[:-1], nz[1:]):
        if v[i] * v[j] < 0:
            out.append(float(d[i] - v[i] * (d[j] - d[i]) / (v[j] - v[i])))
    return tuple(out)


def _monotone_segments(d, v):
    if len(v) == 1:
        return ((float(d[0]), float(d[0]), 0),)
    signs = np.sign(np.diff(v)).astype(int)
    segs = []
    start = 0
    for k in range(1, len(signs) + 1):
        if k == len(signs) or signs[k] != signs[start]:
            segs.append((float(d[start]), float(d[k]), int(signs[start])))
            start = k
    return tuple(segs)


def curve_stats(curve: ForceCurve, rel_zero: float = 1e-9) -> dict:
    """Per-axis extrema, zero crossings and monotone runs.

    Values within ``rel_zero`` of the axis's largest magnitude count as
    zero; a crossing is a sign change between non-zero samples, placed by
    linear interpolation.  Extrema ties resolve to the smaller offset.
    """
    stats = {}
    d = curve.offsets
    for k, name in enumerate("xyz"):
        v = curve.forces[:, k]
        atol = rel_zero * float(np.max(np.abs(v)))
        imax = int(np.argmax(v))
        imin = int(np.argmin(v))
        stats[name] = AxisStats(float(d[imax]), float(v[imax]), float(d[imin]), float(v[imin]),
                                _zero_crossings(d, v, atol), _monotone_segments(d, v))
    return stats
