"""Keyframe animations for a grid of grass pixels.

A script is a sequence of level matrices. Compilation turns each level into
the mapped green length and the corresponding stepper position; rendering
simulates what a viewer sees by blending the yellow and green grass colors
in linear RGB according to the visible green area fraction.
"""

from dataclasses import dataclass, field
from importlib import resources
import csv
import json
import math
from pathlib import Path
import warnings

import numpy as np

from .colorcore import SrgbColor, linear_to_srgb, srgb_to_linear
from .errors import InfeasibleMappingError, ValidationError
from .images import quantize, write_image
from .serialize import dump_json, fmt, num

BUNDLED_SCRIPTS = ("letter_n", "cross", "rain", "wave")
SCHEDULE_CSV_COLUMNS = ["timestamp_s", "row", "col", "length_mm", "steps"]


class ResponseTimeWarning(UserWarning):
    """Keyframe interval shorter than the worst-case motor travel time."""


@dataclass(frozen=True)
class PixelGeometry:
    surface_mm: float = 24.0
    slit_width_mm: float = 5.4
    yellow_length_mm: float = 10.0
    green_range_mm: tuple = (0.0, 15.0)
    n_slits: int = 2

    def __post_init__(self):
        lo, hi = self.green_range_mm
        if not (0 < self.slit_width_mm < self.surface_mm):
            raise ValidationError("slit width must be positive and smaller than the pixel face")
        if not (0 <= lo < hi):
            raise ValidationError(f"invalid green range {self.green_range_mm}")
        if self.n_slits < 1:
            raise ValidationError("need at least one slit")

    @property
    def slit_area_fraction(self):
        return min(1.0, self.n_slits * self.slit_width_mm / self.surface_mm)


@dataclass(frozen=True)
class MotorSpec:
    steps_per_rotation: int = 200
    lead_mm: float = 6.0
    # 500 steps is full travel (15 mm); 500 Hz gives the 1.0 s full-travel time
    step_rate_hz: float = 500.0

    def __post_init__(self):
        if not (self.steps_per_rotation > 0 and self.lead_mm > 0 and self.step_rate_hz > 0):
            raise ValidationError("motor parameters must be strictly positive")

    @property
    def mm_per_step(self):
        return self.lead_mm / self.steps_per_rotation


@dataclass(frozen=True)
class AnimationScript:
    shape: tuple
    keyframes: tuple
    keyframe_interval_s: float = 1.0
    n_levels: int = 5
    name: str = "animation"

    def __post_init__(self):
        rows, cols = (int(v) for v in self.shape)
        if rows < 1 or cols < 1:
            raise ValidationError(f"invalid grid shape {self.shape}")
        if not self.keyframe_interval_s > 0:
            raise ValidationError("keyframe interval must be positive")
        if not self.keyframes:
            raise ValidationError("script has no keyframes")
        frames = []
        for k, kf in enumerate(self.keyframes):
            a = np.asarray(kf)
            if a.shape != (rows, cols):
                raise ValidationError(f"keyframe {k} has shape {a.shape}, expected {(rows, cols)}")
            if not np.all(a == np.round(a)):
                raise ValidationError(f"keyframe {k} contains non-integer levels")
            a = a.astype(int)
            if a.min() < 0 or a.max() >= self.n_levels:
                raise ValidationError(f"keyframe {k} has levels outside 0..{self.n_levels - 1}")
            a.setflags(write=False)
            frames.append(a)
        object.__setattr__(self, "shape", (rows, cols))
        object.__setattr__(self, "keyframes", tuple(frames))

    def timestamps(self):
        return [k * self.keyframe_interval_s for k in range(len(self.keyframes))]

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(
                shape=(d["rows"], d["cols"]),
                keyframes=tuple(d["keyframes"]),
                keyframe_interval_s=float(d.get("keyframe_interval_s", 1.0)),
                n_levels=int(d.get("n_levels", 5)),
                name=d.get("name", "animation"),
            )
        except KeyError as exc:
            raise ValidationError(f"script is missing field {exc}") from exc

    def to_dict(self):
        return {
            "name": self.name,
            "rows": self.shape[0],
            "cols": self.shape[1],
            "n_levels": self.n_levels,
            "keyframe_interval_s": self.keyframe_interval_s,
            "keyframes": [kf.tolist() for kf in self.keyframes],
        }

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def load_bundled_script(name):
    """One of the demo motifs: ``letter_n``, ``cross``, ``rain`` or ``wave``."""
    if name not in BUNDLED_SCRIPTS:
        raise ValidationError(f"unknown bundled script {name!r}; choose from {BUNDLED_SCRIPTS}")
    text = resources.files("grasspixel").joinpath("scripts", f"{name}.json").read_text()
    return AnimationScript.from_dict(json.loads(text))


@dataclass(frozen=True)
class MixModel:
    """Spatial additive mixing of yellow and green grass.

    ``coverage`` maps a green length to the visible green area fraction. The
    default is linear in length, 0 at the shortest length and ``f_max`` at
    the longest; this is a simulation assumption, not a measured response.
    """

    yellow: SrgbColor
    green: SrgbColor
    f_max: float = 1.0
    green_range_mm: tuple = (0.0, 15.0)
    coverage_fn: object = field(default=None, compare=False)

    def __post_init__(self):
        for name in ("yellow", "green"):
            c = getattr(self, name)
            if not isinstance(c, SrgbColor):
                object.__setattr__(self, name, SrgbColor(*map(float, c)))
        if not (0.0 <= self.f_max <= 1.0):
            raise ValidationError(f"f_max must lie in [0, 1], got {self.f_max!r}")
        lo, hi = self.green_range_mm
        if not lo < hi:
            raise ValidationError(f"invalid green range {self.green_range_mm}")

    @classmethod
    def from_geometry(cls, yellow, green, geometry):
        return cls(yellow, green, geometry.slit_area_fraction, geometry.green_range_mm)

    def coverage(self, length_mm):
        if self.coverage_fn is not None:
            f = float(self.coverage_fn(length_mm))
            if not 0.0 <= f <= 1.0:
                raise ValidationError(f"coverage({length_mm}) = {f} outside [0, 1]")
            return f
        lo, hi = self.green_range_mm
        x = min(max((length_mm - lo) / (hi - lo), 0.0), 1.0)
        return self.f_max * x

    def blend_linear(self, f):
        y = srgb_to_linear(self.yellow)
        g = srgb_to_linear(self.green)
        return (1.0 - f) * y + f * g

    @classmethod
    def from_dict(cls, d):
        return cls(
            tuple(d["yellow"]),
            tuple(d["green"]),
            float(d.get("f_max", 1.0)),
            tuple(d.get("green_range_mm", (0.0, 15.0))),
        )


def level_to_length(level, mapping):
    if not mapping.feasible:
        raise InfeasibleMappingError(f"mapping is infeasible: {mapping.reason}")
    if int(level) != level or not (0 <= level < mapping.n_levels):
        raise ValidationError(f"level {level!r} outside 0..{mapping.n_levels - 1}")
    length = mapping.levels[int(level)].chosen_length_mm
    if length is None:
        raise InfeasibleMappingError(f"level {level} has no chosen length")
    return float(length)


def length_to_steps(length_mm, motor=None, geometry=None):
    """Absolute step position from home; rounds half away from zero."""
    motor = motor or MotorSpec()
    lo, hi = (geometry or PixelGeometry()).green_range_mm
    if not (lo <= length_mm <= hi):
        raise ValidationError(f"length {length_mm} mm outside green range [{lo}, {hi}]")
    x = length_mm / motor.lead_mm * motor.steps_per_rotation
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def steps_to_length(steps, motor=None):
    motor = motor or MotorSpec()
    return steps * motor.lead_mm / motor.steps_per_rotation


@dataclass(frozen=True)
class Command:
    timestamp_s: float
    row: int
    col: int
    length_mm: float
    steps: int


@dataclass(frozen=True)
class CommandSchedule:
    commands: tuple
    shape: tuple
    n_keyframes: int
    warnings: tuple = ()

    def positions(self, keyframe):
        """Step positions of all pixels at one keyframe, as a (rows, cols) array."""
        rows, cols = self.shape
        per = rows * cols
        out = np.empty(per, dtype=int)
        for i, c in enumerate(self.commands[keyframe * per : (keyframe + 1) * per]):
            out[i] = c.steps
        return out.reshape(rows, cols)

    def write_csv(self, path_or_file):
        def _write(fh):
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(SCHEDULE_CSV_COLUMNS)
            for c in self.commands:
                w.writerow([fmt(c.timestamp_s), c.row, c.col, fmt(c.length_mm), c.steps])

        if hasattr(path_or_file, "write"):
            _write(path_or_file)
        else:
            with open(path_or_file, "w", newline="") as fh:
                _write(fh)


def compile_script(script, mapping, motor=None, geometry=None):
    """Per keyframe and pixel: target length and absolute motor position."""
    motor = motor or MotorSpec()
    if mapping.n_levels < script.n_levels:
        raise ValidationError(f"mapping has {mapping.n_levels} levels, script needs {script.n_levels}")
    lengths = [level_to_length(n, mapping) for n in range(script.n_levels)]
    steps = [length_to_steps(x, motor, geometry) for x in lengths]

    commands = []
    prev = None
    worst = 0
    for k, (ts, kf) in enumerate(zip(script.timestamps(), script.keyframes)):
        pos = np.array(steps)[kf]
        if prev is not None:
            worst = max(worst, int(np.abs(pos - prev).max()))
        prev = pos
        for (r, c), level in np.ndenumerate(kf):
            commands.append(Command(ts, r, c, lengths[level], steps[level]))

    notes = []
    travel_s = worst / motor.step_rate_hz
    if travel_s > script.keyframe_interval_s:
        msg = (
            f"worst-case travel {worst} steps takes {travel_s:.3g} s at {motor.step_rate_hz:g} Hz, "
            f"longer than the {script.keyframe_interval_s:g} s keyframe interval"
        )
        warnings.warn(msg, ResponseTimeWarning, stacklevel=2)
        notes.append(msg)
    return CommandSchedule(tuple(commands), script.shape, len(script.keyframes), tuple(notes))


def render_frame(levels, mapping, mix, geometry=None, scale_px=16):
    """Simulated 8-bit sRGB frame; each grass pixel becomes a scale_px square."""
    levels = np.asarray(levels)
    if levels.ndim != 2:
        raise ValidationError("levels must be a 2-D matrix")
    if int(scale_px) != scale_px or scale_px < 1:
        raise ValidationError(f"scale_px must be a positive integer, got {scale_px!r}")
    palette = np.empty((mapping.n_levels, 3), dtype=np.uint8)
    for n in range(mapping.n_levels):
        f = mix.coverage(level_to_length(n, mapping))
        palette[n] = quantize(linear_to_srgb(mix.blend_linear(f)))
    if levels.min() < 0 or levels.max() >= mapping.n_levels or not np.all(levels == np.round(levels)):
        raise ValidationError(f"levels must be integers in 0..{mapping.n_levels - 1}")
    img = palette[levels.astype(int)]
    return np.repeat(np.repeat(img, scale_px, axis=0), scale_px, axis=1)


def render_animation(script, mapping, mix, geometry=None, scale_px=16, out_dir=None):
    """Render every keyframe; optionally write PPM frames plus manifest.json.

    Returns ``(frames, manifest)``.
    """
    frames = [render_frame(kf, mapping, mix, geometry, scale_px) for kf in script.keyframes]
    entries = [
        {"index": k, "timestamp_s": num(ts), "file": f"frame_{k:03d}.ppm"}
        for k, ts in enumerate(script.timestamps())
    ]
    manifest = {
        "script": script.name,
        "shape": list(script.shape),
        "scale_px": int(scale_px),
        "keyframe_interval_s": num(script.keyframe_interval_s),
        "frames": entries,
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for frame, entry in zip(frames, entries):
            write_image(out / entry["file"], frame)
        dump_json(manifest, out / "manifest.json")
    return frames, manifest
