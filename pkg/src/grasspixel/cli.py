"""Command-line entry point: ``grasspixel measure | fit | repeat | animate | render``.

Exit codes:
    0  success
    1  gate failure (span, monotonicity or mapping) or infeasible mapping input
    2  usage error (bad flags)
    3  configuration error (malformed config, missing referenced file)
    4  validation error (input violates a precondition)
    5  I/O error (unreadable image or file)
    6  evaluation or checker region outside the image
"""

import argparse
import json
import logging
import os
from pathlib import Path
import sys

import numpy as np

from .calibration import read_samples_csv, write_samples_csv, group_by_position
from .colorcore import Ciede2000Params
from .display import (
    BUNDLED_SCRIPTS,
    AnimationScript,
    MixModel,
    MotorSpec,
    compile_script,
    load_bundled_script,
    render_animation,
    render_frame,
)
from .errors import (
    ConfigError,
    FittingError,
    GrassPixelError,
    InfeasibleMappingError,
    NonMonotoneError,
    RegionError,
    ValidationError,
)
from .images import ImageReadError, write_image
from .repeatability import DEFAULT_TOLERANCE, analyze_repeats
from .scalefit import ScaleMapping, ScaleSpec, run_procedure
from .serialize import dump_json
from .session import load_session, measure_session

EXIT_OK = 0
EXIT_GATE = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_VALIDATION = 4
EXIT_IO = 5
EXIT_REGION = 6

OUTPUT_DIR_ENV = "GRASSPIXEL_OUTPUT_DIR"

log = logging.getLogger("grasspixel")


def _default_out(name):
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / name


def _read_json(path, what):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"{what} not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} {path} is not valid JSON: {exc}") from exc


def _parse_position(text):
    try:
        h, d, theta = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("position must be H,D,THETA") from None
    return (h, d, theta)


def load_mapping(path, position=None):
    """Read a mapping from a ``fit`` report (any position) or a bare mapping file."""
    data = _read_json(path, "mapping")
    if "reports" in data:
        reports = data["reports"]
        if position is not None:
            reports = [r for r in reports if r.get("camera_position") and tuple(r["camera_position"]) == position]
        if len(reports) != 1:
            raise ValidationError(
                f"{path}: found {len(reports)} matching reports; select one with --position H,D,THETA"
            )
        data = reports[0]
    mapping = ScaleMapping.from_dict(data)
    if not mapping.feasible:
        raise InfeasibleMappingError(f"mapping in {path} is infeasible: {mapping.reason}")
    return mapping


def cmd_measure(args):
    samples = []
    configs = [load_session(p) for p in args.config]
    for config in configs:
        got, corrections = measure_session(config, linear_mean=args.linear_mean)
        for entry, corr in zip(config.images, corrections):
            log.info("%s: correction residual rms %.3g", entry.path.name, corr.residual_rms)
        samples.extend(got)
    out = args.output
    if out is None and configs[0].output_dir is not None:
        configs[0].output_dir.mkdir(parents=True, exist_ok=True)
        out = configs[0].output_dir / "samples.csv"
    out = out or _default_out("samples.csv")
    write_samples_csv(out, samples)
    print(f"wrote {len(samples)} samples to {out}")
    return EXIT_OK


def cmd_fit(args):
    samples = read_samples_csv(args.samples)
    spec = ScaleSpec(args.levels, args.tolerance, args.min_span, Ciede2000Params(*args.k))
    reports = [run_procedure(g, spec, args.grid_step) for g in group_by_position(samples).values()]
    if not reports:
        raise ValidationError("sample CSV is empty")
    n_ok = sum(r.feasible for r in reports)
    doc = {
        "scale": {"n_levels": spec.n_levels, "tolerance": spec.tolerance, "min_span": spec.min_span},
        "n_positions": len(reports),
        "n_feasible": n_ok,
        "reports": [r.to_dict() for r in reports],
    }
    out = args.output or _default_out("scale_report.json")
    dump_json(doc, out)
    for r in reports:
        status = "ok" if r.feasible else f"FAILED at {r.failed_stage}: {r.reason}"
        lengths = r.mapping.chosen_lengths if r.feasible else ""
        print(f"position {r.camera_position}: {status} {lengths}")
    print(f"{n_ok}/{len(reports)} positions feasible; report in {out}")
    return EXIT_OK if n_ok == len(reports) else EXIT_GATE


def cmd_repeat(args):
    samples = read_samples_csv(args.samples)
    report = analyze_repeats(samples, args.tolerance)
    out = args.output or _default_out("repeatability.json")
    dump_json(report.to_dict(), out)
    if args.deltas_csv:
        report.write_deltas_csv(args.deltas_csv)
    for g in report.groups:
        print(f"position {g.camera_position} length {g.length_mm:g} mm: {g.n_within}/{g.n_repetitions}")
    print(f"{report.n_within}/{report.n_total} within tolerance {report.tolerance:g}; report in {out}")
    return EXIT_OK


def _load_script(ref):
    if ref in BUNDLED_SCRIPTS and not Path(ref).exists():
        return load_bundled_script(ref)
    return AnimationScript.from_dict(_read_json(ref, "script"))


def _load_mix(path):
    if path is None:
        return None
    try:
        return MixModel.from_dict(_read_json(path, "mix config"))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"mix config {path} is malformed: {exc!r}") from exc


def cmd_animate(args):
    script = _load_script(args.script)
    if args.interval is not None:
        script = AnimationScript(script.shape, script.keyframes, args.interval, script.n_levels, script.name)
    mapping = load_mapping(args.mapping, args.position)
    motor = MotorSpec(args.steps_per_rotation, args.lead, args.step_rate)
    schedule = compile_script(script, mapping, motor)
    out = Path(args.output or _default_out(script.name))
    out.mkdir(parents=True, exist_ok=True)
    schedule.write_csv(out / "schedule.csv")
    print(f"wrote {len(schedule.commands)} commands to {out / 'schedule.csv'}")
    mix = _load_mix(args.mix)
    if mix is not None:
        frames, _ = render_animation(script, mapping, mix, scale_px=args.scale_px, out_dir=out)
        print(f"wrote {len(frames)} frames and manifest.json to {out}")
    return EXIT_OK


def cmd_render(args):
    data = _read_json(args.levels, "levels")
    levels = np.asarray(data["levels"] if isinstance(data, dict) else data)
    mapping = load_mapping(args.mapping, args.position)
    mix = _load_mix(args.mix)
    frame = render_frame(levels, mapping, mix, scale_px=args.scale_px)
    out = args.output or _default_out("frame.ppm")
    write_image(out, frame)
    print(f"wrote {out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="grasspixel", description="Grass pixel color scale calibration and animation.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="measure grass colors from session images")
    p.add_argument("config", nargs="+", help="session config JSON (one per camera position)")
    p.add_argument("-o", "--output", help="samples CSV path")
    p.add_argument("--linear-mean", action="store_true", help="average the region in linear RGB")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("fit", help="run the color scale setting procedure")
    p.add_argument("samples", help="samples CSV")
    p.add_argument("-o", "--output", help="report JSON path")
    p.add_argument("--levels", type=int, default=5)
    p.add_argument("--tolerance", type=float, default=3.0)
    p.add_argument("--min-span", type=float, default=12.0)
    p.add_argument("--grid-step", type=float, default=1e-3)
    p.add_argument("--k", type=float, nargs=3, default=(1.0, 1.0, 1.0), metavar=("KL", "KC", "KH"))
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("repeat", help="repeatability analysis")
    p.add_argument("samples", help="samples CSV with repetition column")
    p.add_argument("-o", "--output", help="report JSON path")
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
    p.add_argument("--deltas-csv", help="also write per-repetition deltas here")
    p.set_defaults(func=cmd_repeat)

    for name, func, helptext in (
        ("animate", cmd_animate, "compile a keyframe script (and render frames with --mix)"),
        ("render", cmd_render, "render one level matrix to a PPM/PNG frame"),
    ):
        p = sub.add_parser(name, help=helptext)
        if name == "animate":
            p.add_argument("script", help=f"script JSON or bundled name {BUNDLED_SCRIPTS}")
        else:
            p.add_argument("levels", help="JSON level matrix or {'levels': matrix}")
        p.add_argument("mapping", help="fit report or mapping JSON")
        p.add_argument("--position", type=_parse_position, help="H,D,THETA to select from a multi-position report")
        p.add_argument("--mix", required=name == "render", help="mix config JSON with yellow/green sRGB colors")
        p.add_argument("--scale-px", type=int, default=16)
        p.add_argument("-o", "--output")
        if name == "animate":
            p.add_argument("--interval", type=float, default=None, help="keyframe interval in s (script value, 1.0 by default)")
            p.add_argument("--steps-per-rotation", type=int, default=200)
            p.add_argument("--lead", type=float, default=6.0, help="lead screw lead in mm")
            p.add_argument("--step-rate", type=float, default=500.0, help="motor step rate in Hz")
        p.set_defaults(func=func)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RegionError as exc:
        print(f"region error: {exc}", file=sys.stderr)
        return EXIT_REGION
    except (InfeasibleMappingError, NonMonotoneError) as exc:
        print(f"gate failure: {exc}", file=sys.stderr)
        return EXIT_GATE
    except (ValidationError, FittingError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ImageReadError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except GrassPixelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
