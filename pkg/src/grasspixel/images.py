"""Reading and writing sRGB images (PNG or binary PPM, 8 or 16 bit).

Images are handled in memory as float64 arrays of shape (H, W, 3) holding
gamma-encoded sRGB in [0, 1], channel order R, G, B.
"""

from pathlib import Path

import cv2
import numpy as np

from .errors import ValidationError

SUPPORTED_SUFFIXES = {".png", ".ppm"}


class ImageReadError(OSError):
    pass


def read_image(path):
    path = Path(path)
    if path.suffix.lower() not in SUPPORTED_SUFFIXES:
        raise ValidationError(f"unsupported image format: {path.name}")
    raw = cv2.imread(str(path), cv2.IMREAD_UNCHANGED)
    if raw is None:
        raise ImageReadError(f"cannot read image {path}")
    if raw.ndim == 2:
        raw = np.repeat(raw[..., None], 3, axis=2)
    elif raw.shape[2] == 4:
        raw = raw[..., :3]
    if raw.dtype == np.uint8:
        scale = 255.0
    elif raw.dtype == np.uint16:
        scale = 65535.0
    else:
        raise ValidationError(f"{path.name}: unsupported sample type {raw.dtype}")
    return raw[..., ::-1].astype(np.float64) / scale


def quantize(image, bits=8):
    """Round a float sRGB image to unsigned integers of the given depth."""
    if bits not in (8, 16):
        raise ValidationError("bits must be 8 or 16")
    top = 255 if bits == 8 else 65535
    dtype = np.uint8 if bits == 8 else np.uint16
    return np.round(np.clip(image, 0.0, 1.0) * top).astype(dtype)


def write_image(path, image, bits=8):
    """Write a float sRGB image; the format follows the file suffix."""
    path = Path(path)
    if path.suffix.lower() not in SUPPORTED_SUFFIXES:
        raise ValidationError(f"unsupported image format: {path.name}")
    data = image if image.dtype in (np.uint8, np.uint16) else quantize(image, bits)
    if not cv2.imwrite(str(path), np.ascontiguousarray(data[..., ::-1])):
        raise OSError(f"cannot write image {path}")
