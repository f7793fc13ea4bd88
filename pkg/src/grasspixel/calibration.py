"""From a developed sRGB photograph to a measured grass color in CIELAB.

Pipeline per image: fit an affine correction in linear RGB from the color
checker patches toward the reference frame (the minimum-length capture),
apply it, crop the square evaluation region and average its sRGB values,
then convert the mean to CIELAB.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .colorcore import LabColor, SrgbColor, linear_to_srgb, srgb_to_lab, srgb_to_linear
from .errors import FittingError, RegionError, ValidationError

N_CHECKER_PATCHES = 24
PROTOCOL_ANGLES = (0.0, 30.0, 60.0, 90.0)
DEVICE_RANGE_MM = (0.0, 15.0)

SAMPLE_CSV_COLUMNS = ["length_mm", "L", "a", "b", "h", "d", "theta", "repetition"]


@dataclass(frozen=True)
class CheckerPatchSet:
    """The 24 patch colors of a color checker, in a fixed order."""

    colors: tuple
    ids: tuple = None

    def __post_init__(self):
        colors = tuple(c if isinstance(c, SrgbColor) else SrgbColor(*map(float, c)) for c in self.colors)
        object.__setattr__(self, "colors", colors)
        if len(colors) != N_CHECKER_PATCHES:
            raise ValidationError(f"expected {N_CHECKER_PATCHES} checker patches, got {len(colors)}")
        ids = tuple(self.ids) if self.ids is not None else tuple(f"P{i + 1:02d}" for i in range(len(colors)))
        if len(ids) != len(colors) or len(set(ids)) != len(ids):
            raise ValidationError("checker patch identifiers must be unique, one per patch")
        object.__setattr__(self, "ids", ids)

    def as_array(self):
        return np.array([tuple(c) for c in self.colors])


@dataclass(frozen=True)
class CorrectionMatrix:
    """Affine map ``ref_linear = matrix @ obs_linear + offset``."""

    matrix: np.ndarray
    offset: np.ndarray
    residual_rms: float = 0.0

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        o = np.asarray(self.offset, dtype=float)
        if m.shape != (3, 3) or o.shape != (3,):
            raise ValidationError("correction needs a 3x3 matrix and a 3-vector offset")
        if not (np.all(np.isfinite(m)) and np.all(np.isfinite(o))):
            raise ValidationError("correction matrix must be finite")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "offset", o)

    @classmethod
    def identity(cls):
        return cls(np.eye(3), np.zeros(3), 0.0)

    def apply_linear(self, rgb):
        return np.asarray(rgb) @ self.matrix.T + self.offset


@dataclass(frozen=True)
class EvaluationRegion:
    """Square crop ``image[y:y+height, x:x+width]``."""

    x: int
    y: int
    width: int
    height: int

    def __post_init__(self):
        if self.width != self.height:
            raise ValidationError(f"evaluation region must be square, got {self.width}x{self.height}")
        if self.width <= 0:
            raise ValidationError("evaluation region is empty")
        if self.x < 0 or self.y < 0:
            raise ValidationError("evaluation region has negative origin")

    def check_inside(self, shape):
        h, w = shape[:2]
        if self.x + self.width > w or self.y + self.height > h:
            raise RegionError(
                f"region ({self.x}, {self.y}, {self.width}, {self.height}) exceeds image bounds {w}x{h}"
            )

    def crop(self, image):
        self.check_inside(image.shape)
        return image[self.y : self.y + self.height, self.x : self.x + self.width]


@dataclass(frozen=True)
class MeasuredSample:
    green_length_mm: float
    lab: LabColor
    camera_position: tuple = (0.0, 0.0, 0.0)
    repetition: int = 0

    def __post_init__(self):
        lo, hi = DEVICE_RANGE_MM
        if not (lo <= self.green_length_mm <= hi):
            raise ValidationError(f"green length {self.green_length_mm} mm outside [{lo}, {hi}]")
        if not isinstance(self.lab, LabColor):
            object.__setattr__(self, "lab", LabColor.from_array(self.lab))
        object.__setattr__(self, "camera_position", tuple(float(v) for v in self.camera_position))


def fit_correction(observed, reference):
    """Least-squares affine fit from observed to reference checker patches.

    The fit is done in linear RGB over all 24 patches. Raises
    :class:`FittingError` when the patches do not span an affine basis.
    """
    obs = srgb_to_linear(observed.as_array())
    ref = srgb_to_linear(reference.as_array())
    design = np.hstack([obs, np.ones((len(obs), 1))])
    if np.linalg.matrix_rank(design) < 4:
        raise FittingError("checker patches are rank deficient; cannot fit an affine correction")
    coef, *_ = np.linalg.lstsq(design, ref, rcond=None)
    matrix, offset = coef[:3].T, coef[3]
    resid = design @ coef - ref
    rms = float(np.sqrt(np.mean(resid**2)))
    return CorrectionMatrix(matrix, offset, rms)


def apply_correction(image, correction):
    """Correct a float sRGB image; result is clamped to [0, 1] and re-encoded."""
    lin = correction.apply_linear(srgb_to_linear(image))
    return linear_to_srgb(np.clip(lin, 0.0, 1.0))


def sample_patches(image, regions, ids=None):
    """Mean sRGB color of each checker patch region in ``image``."""
    colors = [region.crop(image).reshape(-1, 3).mean(axis=0) for region in regions]
    return CheckerPatchSet(tuple(np.clip(colors, 0.0, 1.0)), ids)


def measure_patch(image, region, linear_mean=False):
    """Mean color of the evaluation region as CIELAB.

    The mean is taken over gamma-encoded sRGB values. ``linear_mean=True``
    averages in linear RGB instead.
    """
    pixels = region.crop(np.asarray(image, dtype=float)).reshape(-1, 3)
    if pixels.size == 0:
        raise ValidationError("evaluation region is empty")
    if linear_mean:
        mean_lin = srgb_to_linear(pixels).mean(axis=0)
        mean = linear_to_srgb(mean_lin)
    else:
        mean = pixels.mean(axis=0)
    return LabColor.from_array(srgb_to_lab(np.clip(mean, 0.0, 1.0)))


def write_samples_csv(path_or_file, samples, fmt=".9g"):
    def _write(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SAMPLE_CSV_COLUMNS)
        for s in samples:
            h, d, theta = s.camera_position
            row = [s.green_length_mm, *s.lab, h, d, theta]
            writer.writerow([format(v, fmt) for v in row] + [s.repetition])

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with open(path_or_file, "w", newline="") as fh:
            _write(fh)


def read_samples_csv(path_or_file):
    def _read(fh):
        reader = csv.DictReader(fh)
        missing = set(SAMPLE_CSV_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValidationError(f"sample CSV missing columns: {sorted(missing)}")
        out = []
        for lineno, row in enumerate(reader, start=2):
            try:
                out.append(
                    MeasuredSample(
                        float(row["length_mm"]),
                        LabColor(float(row["L"]), float(row["a"]), float(row["b"])),
                        (float(row["h"]), float(row["d"]), float(row["theta"])),
                        int(row["repetition"]),
                    )
                )
            except ValueError as exc:
                raise ValidationError(f"sample CSV line {lineno}: {exc}") from exc
        return out

    if hasattr(path_or_file, "read"):
        return _read(path_or_file)
    with open(path_or_file, newline="") as fh:
        return _read(fh)


def group_by_position(samples):
    """Split samples by camera position, each group sorted by length."""
    groups = {}
    for s in samples:
        groups.setdefault(s.camera_position, []).append(s)
    return {pos: sorted(g, key=lambda s: (s.green_length_mm, s.repetition)) for pos, g in sorted(groups.items())}
