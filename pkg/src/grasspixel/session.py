"""Session configuration files and the image-to-sample measurement run.

A session describes one camera position: the reference image (the capture at
minimum green length), the list of captures with their green lengths, the
square evaluation region and where the 24 checker patches sit in the frame.
Relative paths are resolved against the config file's directory.

Example::

    {
      "camera_position": {"h": 1.2, "d": 1.0, "theta": 0},
      "reference_image": "len_00.00.png",
      "region": {"x": 40, "y": 10, "width": 32, "height": 32},
      "checker": {"patch_size": 6,
                  "patches": [{"id": "A1", "x": 2, "y": 50}, ...]},
      "images": [{"path": "len_00.00.png", "length_mm": 0.0, "repetition": 0}, ...],
      "scale": {"n_levels": 5, "tolerance": 3.0, "min_span": 12.0},
      "output_dir": "out"
    }
"""

from dataclasses import dataclass
import json
from pathlib import Path

from .calibration import (
    EvaluationRegion,
    MeasuredSample,
    apply_correction,
    fit_correction,
    measure_patch,
    sample_patches,
)
from .colorcore import Ciede2000Params
from .errors import ConfigError, ValidationError
from .images import read_image
from .scalefit import ScaleSpec


@dataclass(frozen=True)
class ImageEntry:
    path: Path
    length_mm: float
    repetition: int = 0


@dataclass(frozen=True)
class SessionConfig:
    camera_position: tuple
    reference_image: Path
    region: EvaluationRegion
    patch_regions: tuple
    patch_ids: tuple
    images: tuple
    scale: ScaleSpec
    output_dir: Path = None

    def check_paths(self):
        missing = [p for p in (self.reference_image, *(e.path for e in self.images)) if not p.is_file()]
        if missing:
            raise ConfigError("missing file(s): " + ", ".join(str(p) for p in missing))


def _region(d, what):
    try:
        if "size" in d:
            return EvaluationRegion(int(d["x"]), int(d["y"]), int(d["size"]), int(d["size"]))
        return EvaluationRegion(int(d["x"]), int(d["y"]), int(d["width"]), int(d["height"]))
    except KeyError as exc:
        raise ConfigError(f"{what} is missing {exc}") from exc
    except ValidationError as exc:
        raise ConfigError(f"{what}: {exc}") from exc


def parse_session(data, base_dir="."):
    base = Path(base_dir)
    try:
        pos = data["camera_position"]
        position = (float(pos["h"]), float(pos["d"]), float(pos["theta"]))
        reference = base / data["reference_image"]
        region = _region(data["region"], "region")
        checker = data["checker"]
        size = int(checker.get("patch_size", 0))
        patch_regions, patch_ids = [], []
        for i, p in enumerate(checker["patches"]):
            spec = dict(p)
            if "size" not in spec and "width" not in spec:
                spec["size"] = size
            patch_regions.append(_region(spec, f"checker patch {i}"))
            patch_ids.append(str(p.get("id", f"P{i + 1:02d}")))
        images = tuple(
            ImageEntry(base / e["path"], float(e["length_mm"]), int(e.get("repetition", 0)))
            for e in data["images"]
        )
        scale_opts = dict(data.get("scale", {}))
        if "params" in scale_opts:
            scale_opts["params"] = Ciede2000Params(**scale_opts["params"])
        scale = ScaleSpec(**scale_opts)
        out = data.get("output_dir")
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed session config: {exc!r}") from exc
    if len(patch_regions) != 24:
        raise ConfigError(f"checker layout needs 24 patches, got {len(patch_regions)}")
    return SessionConfig(
        position, reference, region, tuple(patch_regions), tuple(patch_ids), images, scale,
        base / out if out else None,
    )


def load_session(path):
    path = Path(path)
    try:
        with open(path) as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_session(data, path.parent)


def measure_session(config, linear_mean=False):
    """Correct every capture toward the reference checker and measure it.

    Returns ``(samples, corrections)`` in the order images are listed.
    """
    config.check_paths()
    if not config.images:
        raise ValidationError("session lists no images")
    reference = read_image(config.reference_image)
    ref_patches = sample_patches(reference, config.patch_regions, config.patch_ids)
    samples, corrections = [], []
    for entry in config.images:
        image = read_image(entry.path)
        observed = sample_patches(image, config.patch_regions, config.patch_ids)
        correction = fit_correction(observed, ref_patches)
        lab = measure_patch(apply_correction(image, correction), config.region, linear_mean)
        samples.append(MeasuredSample(entry.length_mm, lab, config.camera_position, entry.repetition))
        corrections.append(correction)
    return samples, corrections
