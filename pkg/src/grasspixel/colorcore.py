"""Color space conversions and color-difference formulas.

All conversion functions work on array-likes whose last axis holds the three
channels, so they apply equally to a single color, a list of colors or a
whole image. The small value types below are accepted anywhere an array is.

Reference white is D65/2 deg with Y normalized to 1.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import ValidationError

__all__ = [
    "SrgbColor",
    "XyzColor",
    "LabColor",
    "Ciede2000Params",
    "D65_WHITE",
    "SRGB_TO_XYZ",
    "XYZ_TO_SRGB",
    "srgb_to_linear",
    "linear_to_srgb",
    "linear_to_xyz",
    "xyz_to_linear",
    "xyz_to_lab",
    "lab_to_xyz",
    "srgb_to_lab",
    "lab_to_srgb",
    "delta_e76",
    "delta_e00",
    "delta_e00_scalar",
]

# IEC 61966-2-1 primaries at 7 decimals
SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)

# white point taken as the matrix image of sRGB white, (0.95047, 1.0000001,
# 1.08883), so that white lands exactly on L*=100, a*=b*=0
D65_WHITE = SRGB_TO_XYZ.sum(axis=1)
XYZ_TO_SRGB = np.linalg.inv(SRGB_TO_XYZ)

_EOTF_THRESHOLD = 0.04045
# exact image of the decoding threshold, so encode(decode(c)) == c across the joint
_OETF_THRESHOLD = _EOTF_THRESHOLD / 12.92
_LAB_DELTA = 6.0 / 29.0
_RANGE_EPS = 1e-12


class _Triple:
    __slots__ = ()

    def __iter__(self):
        return iter(self.astuple())

    def __array__(self, dtype=None, copy=None):
        return np.array(self.astuple(), dtype=dtype or float)

    def astuple(self):
        raise NotImplementedError


@dataclass(frozen=True)
class SrgbColor(_Triple):
    """Gamma-encoded sRGB color with channels in [0, 1]."""

    r: float
    g: float
    b: float

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValidationError(f"sRGB channel {name}={v!r} outside [0, 1]")

    @classmethod
    def from_8bit(cls, r, g, b):
        return cls(r / 255.0, g / 255.0, b / 255.0)

    def astuple(self):
        return (self.r, self.g, self.b)


@dataclass(frozen=True)
class XyzColor(_Triple):
    """CIE 1931 tristimulus values, D65 white, white Y = 1."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        for name in ("x", "y", "z"):
            v = getattr(self, name)
            if not v >= 0.0:
                raise ValidationError(f"XYZ component {name}={v!r} is negative")

    def astuple(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class LabColor(_Triple):
    """A CIELAB color (L*, a*, b*)."""

    l_star: float
    a_star: float
    b_star: float

    @classmethod
    def from_array(cls, values):
        l, a, b = (float(v) for v in np.asarray(values, dtype=float).reshape(3))
        return cls(l, a, b)

    def astuple(self):
        return (self.l_star, self.a_star, self.b_star)


@dataclass(frozen=True)
class Ciede2000Params:
    """Parametric weighting factors of CIEDE2000; 1 under reference conditions."""

    k_l: float = 1.0
    k_c: float = 1.0
    k_h: float = 1.0

    def __post_init__(self):
        for name in ("k_l", "k_c", "k_h"):
            v = getattr(self, name)
            if not v > 0.0:
                raise ValidationError(f"{name} must be strictly positive, got {v!r}")


def _as_channels(values, name="color"):
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim == 0 or arr.shape[-1] != 3:
        raise ValidationError(f"{name} must have a trailing axis of length 3, got shape {arr.shape}")
    return arr


def _check_unit_range(arr, name):
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains non-finite values")
    if arr.min(initial=0.0) < -_RANGE_EPS or arr.max(initial=0.0) > 1.0 + _RANGE_EPS:
        raise ValidationError(f"{name} channels must lie in [0, 1]")


def srgb_to_linear(srgb):
    """Decode gamma-encoded sRGB in [0, 1] to linear RGB (IEC 61966-2-1)."""
    c = _as_channels(srgb, "sRGB")
    _check_unit_range(c, "sRGB")
    c = np.clip(c, 0.0, 1.0)
    return np.where(c <= _EOTF_THRESHOLD, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def linear_to_srgb(rgb):
    """Encode linear RGB in [0, 1] to gamma-encoded sRGB."""
    c = _as_channels(rgb, "linear RGB")
    _check_unit_range(c, "linear RGB")
    c = np.clip(c, 0.0, 1.0)
    out = np.where(c <= _OETF_THRESHOLD, c * 12.92, 1.055 * c ** (1.0 / 2.4) - 0.055)
    return np.where(c >= 1.0, 1.0, out)


def linear_to_xyz(rgb):
    c = _as_channels(rgb, "linear RGB")
    _check_unit_range(c, "linear RGB")
    return c @ SRGB_TO_XYZ.T


def xyz_to_linear(xyz):
    """Inverse of :func:`linear_to_xyz`; out-of-gamut results are not clipped."""
    return _as_channels(xyz, "XYZ") @ XYZ_TO_SRGB.T


def _lab_f(t):
    d3 = _LAB_DELTA**3
    return np.where(t > d3, np.cbrt(t), t / (3.0 * _LAB_DELTA**2) + 4.0 / 29.0)


def _lab_f_inv(f):
    return np.where(f > _LAB_DELTA, f**3, 3.0 * _LAB_DELTA**2 * (f - 4.0 / 29.0))


def xyz_to_lab(xyz, white=D65_WHITE):
    """CIE XYZ to CIELAB relative to ``white``."""
    c = _as_channels(xyz, "XYZ")
    if not np.all(np.isfinite(c)):
        raise ValidationError("XYZ contains non-finite values")
    if c.min(initial=0.0) < -_RANGE_EPS:
        raise ValidationError("XYZ components must be nonnegative")
    f = _lab_f(np.clip(c, 0.0, None) / np.asarray(white))
    fx, fy, fz = f[..., 0], f[..., 1], f[..., 2]
    return np.stack([116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)], axis=-1)


def lab_to_xyz(lab, white=D65_WHITE):
    c = _as_channels(lab, "Lab")
    fy = (c[..., 0] + 16.0) / 116.0
    fx = fy + c[..., 1] / 500.0
    fz = fy - c[..., 2] / 200.0
    return _lab_f_inv(np.stack([fx, fy, fz], axis=-1)) * np.asarray(white)


def srgb_to_lab(srgb):
    return xyz_to_lab(linear_to_xyz(srgb_to_linear(srgb)))


def lab_to_srgb(lab, clip=True):
    """CIELAB to gamma-encoded sRGB; out-of-gamut colors are clipped when ``clip``."""
    rgb = xyz_to_linear(lab_to_xyz(lab))
    if not clip:
        if rgb.min() < -1e-9 or rgb.max() > 1 + 1e-9:
            raise ValidationError("Lab color is outside the sRGB gamut")
    return linear_to_srgb(np.clip(rgb, 0.0, 1.0))


def _maybe_scalar(x):
    return float(x) if np.ndim(x) == 0 else x


def delta_e76(p, q):
    """CIE76 color difference: Euclidean distance in CIELAB."""
    d = _as_channels(p, "Lab") - _as_channels(q, "Lab")
    return _maybe_scalar(np.sqrt(np.sum(d * d, axis=-1)))


_POW25_7 = 25.0**7


def delta_e00(p, q, params=None):
    """CIEDE2000 color difference between Lab colors ``p`` and ``q``.

    Inputs broadcast against each other along leading axes. Hue arithmetic
    is carried out in degrees with hue angles normalized to [0, 360); the
    returned value is a float for a single pair and an array otherwise.
    """
    params = params or Ciede2000Params()
    lab1 = _as_channels(p, "Lab")
    lab2 = _as_channels(q, "Lab")
    L1, a1, b1 = lab1[..., 0], lab1[..., 1], lab1[..., 2]
    L2, a2, b2 = lab2[..., 0], lab2[..., 1], lab2[..., 2]

    c_mean = 0.5 * (np.hypot(a1, b1) + np.hypot(a2, b2))
    c7 = c_mean**7
    g = 0.5 * (1.0 - np.sqrt(c7 / (c7 + _POW25_7)))
    a1p = (1.0 + g) * a1
    a2p = (1.0 + g) * a2
    c1p = np.hypot(a1p, b1)
    c2p = np.hypot(a2p, b2)
    # atan2(0, 0) is 0, which is the required hue for achromatic colors
    h1p = np.mod(np.degrees(np.arctan2(b1, a1p)), 360.0)
    h2p = np.mod(np.degrees(np.arctan2(b2, a2p)), 360.0)

    chroma_prod = c1p * c2p
    achromatic = chroma_prod == 0.0
    dh = h2p - h1p
    dh = np.where(dh > 180.0, dh - 360.0, np.where(dh < -180.0, dh + 360.0, dh))
    dh = np.where(achromatic, 0.0, dh)

    dL = L2 - L1
    dC = c2p - c1p
    dH = 2.0 * np.sqrt(chroma_prod) * np.sin(np.radians(dh) / 2.0)

    L_bar = 0.5 * (L1 + L2)
    C_bar = 0.5 * (c1p + c2p)
    h_sum = h1p + h2p
    h_bar = np.where(
        np.abs(h1p - h2p) <= 180.0,
        0.5 * h_sum,
        np.where(h_sum < 360.0, 0.5 * (h_sum + 360.0), 0.5 * (h_sum - 360.0)),
    )
    h_bar = np.where(achromatic, h_sum, h_bar)

    T = (
        1.0
        - 0.17 * np.cos(np.radians(h_bar - 30.0))
        + 0.24 * np.cos(np.radians(2.0 * h_bar))
        + 0.32 * np.cos(np.radians(3.0 * h_bar + 6.0))
        - 0.20 * np.cos(np.radians(4.0 * h_bar - 63.0))
    )
    d_theta = 30.0 * np.exp(-(((h_bar - 275.0) / 25.0) ** 2))
    C_bar7 = C_bar**7
    R_C = 2.0 * np.sqrt(C_bar7 / (C_bar7 + _POW25_7))
    L50 = (L_bar - 50.0) ** 2
    S_L = 1.0 + 0.015 * L50 / np.sqrt(20.0 + L50)
    S_C = 1.0 + 0.045 * C_bar
    S_H = 1.0 + 0.015 * C_bar * T
    R_T = -np.sin(np.radians(2.0 * d_theta)) * R_C

    tl = dL / (params.k_l * S_L)
    tc = dC / (params.k_c * S_C)
    th = dH / (params.k_h * S_H)
    # R_T term can push the sum a hair below zero for near-identical colors
    total = np.maximum(tl * tl + tc * tc + th * th + R_T * tc * th, 0.0)
    return _maybe_scalar(np.sqrt(total))


def _scalar_lab(values):
    """Plain float triple from a LabColor or length-3 sequence."""
    l, a, b = values
    return (float(l), float(a), float(b))


def delta_e00_scalar(p, q, params=None):
    """Pure-Python CIEDE2000 for one pair; same result as :func:`delta_e00`.

    Roughly 20x faster than the vectorized path for a single pair, which
    matters inside root finding loops.
    """
    params = params or Ciede2000Params()
    L1, a1, b1 = _scalar_lab(p)
    L2, a2, b2 = _scalar_lab(q)
    c_mean = 0.5 * (math.hypot(a1, b1) + math.hypot(a2, b2))
    c7 = c_mean**7
    g = 0.5 * (1.0 - math.sqrt(c7 / (c7 + _POW25_7)))
    a1p, a2p = (1.0 + g) * a1, (1.0 + g) * a2
    c1p, c2p = math.hypot(a1p, b1), math.hypot(a2p, b2)
    h1p = math.degrees(math.atan2(b1, a1p)) % 360.0
    h2p = math.degrees(math.atan2(b2, a2p)) % 360.0
    chroma_prod = c1p * c2p
    h_sum = h1p + h2p
    if chroma_prod == 0.0:
        dh = 0.0
        h_bar = h_sum
    else:
        dh = h2p - h1p
        if dh > 180.0:
            dh -= 360.0
        elif dh < -180.0:
            dh += 360.0
        if abs(h1p - h2p) <= 180.0:
            h_bar = 0.5 * h_sum
        elif h_sum < 360.0:
            h_bar = 0.5 * (h_sum + 360.0)
        else:
            h_bar = 0.5 * (h_sum - 360.0)
    dL = L2 - L1
    dC = c2p - c1p
    dH = 2.0 * math.sqrt(chroma_prod) * math.sin(math.radians(dh) / 2.0)
    L_bar = 0.5 * (L1 + L2)
    C_bar = 0.5 * (c1p + c2p)
    T = (
        1.0
        - 0.17 * math.cos(math.radians(h_bar - 30.0))
        + 0.24 * math.cos(math.radians(2.0 * h_bar))
        + 0.32 * math.cos(math.radians(3.0 * h_bar + 6.0))
        - 0.20 * math.cos(math.radians(4.0 * h_bar - 63.0))
    )
    d_theta = 30.0 * math.exp(-(((h_bar - 275.0) / 25.0) ** 2))
    C_bar7 = C_bar**7
    R_C = 2.0 * math.sqrt(C_bar7 / (C_bar7 + _POW25_7))
    L50 = (L_bar - 50.0) ** 2
    S_L = 1.0 + 0.015 * L50 / math.sqrt(20.0 + L50)
    S_C = 1.0 + 0.045 * C_bar
    S_H = 1.0 + 0.015 * C_bar * T
    R_T = -math.sin(math.radians(2.0 * d_theta)) * R_C
    tl = dL / (params.k_l * S_L)
    tc = dC / (params.k_c * S_C)
    th = dH / (params.k_h * S_H)
    return math.sqrt(max(tl * tl + tc * tc + th * th + R_T * tc * th, 0.0))
