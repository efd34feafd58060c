"""Command-line entry point.

Exit codes: 0 success, 1 configuration / validation error, 2 numerical
failure.  Diagnostics go to stderr; successful runs write nothing there.
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from .calibration import calibrate_z_gap
from .config import ConfigError, RunConfig, load_config, parse_config
from .csvio import write_force_curve_csv, write_friction_csv
from .magnetostatics import FieldSource, OverlapError, b_total
from .model import InvalidSceneError
from .numerics import NumericalError
from .statics import plan_offset, run_friction_trace
from .sweep import SweepError, run_em_sweep


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(f"{self.prog}: {message}")


def _point(text):
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z in metres, got {text!r}")
    return np.array(vals)


def build_parser():
    p = _Parser(prog="magrobot", description="Magnetic micro-robot force simulator.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="configuration file (defaults if omitted)")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for the sweep")

    f = sub.add_parser("field", help="flux density of all magnets at a point")
    common(f)
    f.add_argument("--at", type=_point, required=True, metavar="X,Y,Z")

    s = sub.add_parser("sweep", help="offset sweep of the magnetic force, written as CSV")
    common(s)
    s.add_argument("--out", help="CSV path (else [run] output_path)")

    fr = sub.add_parser("friction", help="quasi-static friction trace, written as CSV")
    common(fr)
    fr.add_argument("--out", help="CSV path (else [run] output_path)")

    pl = sub.add_parser("plan", help="offset window that delivers a required force")
    common(pl)
    pl.add_argument("--required-force", type=float, required=True, metavar="NEWTON")
    pl.add_argument("--speed", type=float, default=None,
                    help="robot speed in m/s (default: [friction] speed)")
    pl.add_argument("--out", help="optional CSV path for the sweep")
    return p


def _load(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else parse_config("")
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    if cfg.calibrate_z_gap:
        z = calibrate_z_gap(cfg.scene, quad_order=cfg.quad_order)
        cfg = replace(cfg, scene=replace(cfg.scene, z_gap=z))
    return cfg


def _out_path(args, cfg):
    path = getattr(args, "out", None) or cfg.output_path
    if path is None:
        raise ConfigError("no output path: pass --out or set [run] output_path")
    return path


def _run(args, out):
    cfg = _load(args)
    if args.command == "field":
        source = FieldSource(cfg.scene.base_magnets() + cfg.scene.wounding_magnets(), cfg.model)
        b = b_total(source, args.at)
        print(" ".join(f"{v:.9e}" for v in b), file=out)
    elif args.command == "sweep":
        path = _out_path(args, cfg)
        curve = run_em_sweep(cfg.scene, cfg.sweep, cfg.quad_order, args.threads, cfg.model)
        write_force_curve_csv(curve, path)
    elif args.command == "friction":
        path = _out_path(args, cfg)
        trace = run_friction_trace(cfg.scene, cfg.friction, cfg.quad_order)
        write_friction_csv(trace, path)
    elif args.command == "plan":
        if args.required_force < 0:
            raise ConfigError("--required-force must be non-negative")
        speed = cfg.friction.speed if args.speed is None else args.speed
        curve = run_em_sweep(cfg.scene, cfg.sweep, cfg.quad_order, args.threads, cfg.model)
        if args.out:
            write_force_curve_csv(curve, args.out)
        plan = plan_offset(cfg.scene, curve, args.required_force, speed, quad_order=cfg.quad_order)
        if plan.feasible:
            lo, hi = plan.window
            print(f"feasible offset window: {lo:.9e} .. {hi:.9e} m", file=out)
        else:
            print("no feasible offset", file=out)
        print(f"peak lateral force: {plan.peak_force_x:.9e} N at {plan.peak_offset:.9e} m", file=out)
        print(f"peak margin: {plan.peak_margin:.9e} N", file=out)
    return 0


def cli_main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return _run(args, out)
    except _ArgumentError as exc:
        print(str(exc), file=err)
        return 1
    except (ConfigError, InvalidSceneError, OverlapError) as exc:
        print(f"error: {exc}", file=err)
        return 1
    except (NumericalError, SweepError) as exc:
        print(f"numerical failure: {exc}", file=err)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return 1


def main():  # pragma: no cover - console script
    sys.exit(cli_main())
