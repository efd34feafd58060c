"""CSV output for force curves and friction traces.

Both files are UTF-8 with LF line endings, a fixed header line, values in
scientific notation with 9 significant digits and exactly one newline
after the last row.
"""

import numpy as np

from .model import ForceCurve

CURVE_HEADER = "offset_m,fx_N,fy_N,fz_N"
TRACE_HEADER = "t_s,friction_N,drag_N,normal_N"


def _fmt(v) -> str:
    return f"{float(v):.8e}"


def _write(path, header, rows):
    text = header + "\n" + "".join(",".join(_fmt(v) for v in row) + "\n" for row in rows)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def write_force_curve_csv(curve: ForceCurve, path) -> None:
    rows = np.column_stack([curve.offsets, curve.forces])
    _write(path, CURVE_HEADER, rows)


def write_friction_csv(trace, path) -> None:
    rows = np.column_stack([trace.times, trace.friction, trace.drag, trace.normal])
    _write(path, TRACE_HEADER, rows)


def read_force_curve_csv(path) -> ForceCurve:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != CURVE_HEADER:
            raise ValueError(f"unexpected header {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return ForceCurve(data[:, 0], data[:, 1:4])
