"""Frozen fixture values.

STRAIGHT_T was produced by ``oracles.grid_scan_t`` (two nested 1e6-point grid
scans), one value per 0.75 mm sample so that consecutive samples are equal
CIEDE2000 steps (span / 20) apart along the segment. The non-monotone pair
and the curved-fixture amplitude came from brute-force searches with
``oracles.profile``; tests re-verify each property.
"""

import numpy as np

from grasspixel.calibration import MeasuredSample

STRAIGHT_G0 = (40.0, -5.0, 20.0)
STRAIGHT_G4 = (55.0, -25.0, 5.0)
STRAIGHT_SPAN = 23.265097049691736
STRAIGHT_T = [
    0.0, 0.04378423707450315, 0.08756725240204025, 0.13153541032794486,
    0.17585996415378075, 0.2206940754492428, 0.2661703220253793, 0.3123991899421104,
    0.3594688909534168, 0.40744653895929167, 0.45638036632708795, 0.5063024136285315,
    0.557231092648484, 0.6091732108817486, 0.6621253759580382, 0.7160750626686018,
    0.7710019423676702, 0.8268803008965987, 0.8836834735436877, 0.9413911451252761, 1.0,
]
LENGTHS_MM = [round(0.75 * k, 2) for k in range(21)]

# perpendicular bump in (a*, b*) with this peak amplitude pushes every
# interior minimum above 3.0
CURVED_AMPLITUDE = 8.0

LIGHTNESS_G0 = (40.0, 0.0, 0.0)
LIGHTNESS_G4 = (70.0, 0.0, 0.0)

# derivative of the distance profile is negative on roughly 11% of [0, 1]
NON_MONOTONE_G0 = (35.6, -12.0, -6.4)
NON_MONOTONE_G4 = (24.5, 37.4, -46.7)

POSITION = (1.2, 1.0, 0.0)


def straight_labs():
    g0, g4 = np.array(STRAIGHT_G0), np.array(STRAIGHT_G4)
    return [g0 + t * (g4 - g0) for t in STRAIGHT_T]


def curved_labs(amplitude=CURVED_AMPLITUDE):
    g0, g4 = np.array(STRAIGHT_G0), np.array(STRAIGHT_G4)
    d = g4 - g0
    perp = np.array([0.0, -d[2], d[1]])
    perp /= np.linalg.norm(perp)
    return [g0 + t * d + amplitude * np.sin(np.pi * t) * perp for t in STRAIGHT_T]


def as_samples(labs, position=POSITION):
    return [MeasuredSample(x, lab, position) for x, lab in zip(LENGTHS_MM, labs)]


def straight_samples():
    return as_samples(straight_labs())


def curved_samples():
    return as_samples(curved_labs())


def span_pair(span):
    """Lightness-only pair centred on L*=50, where S_L = 1 and dE00 = |dL|."""
    return (50.0 - span / 2, 0.0, 0.0), (50.0 + span / 2, 0.0, 0.0)


# golden rendering setup
GOLDEN_LENGTHS = (0.0, 3.75, 7.5, 11.25, 15.0)
GOLDEN_YELLOW = (0.78, 0.69, 0.33)
GOLDEN_GREEN = (0.18, 0.45, 0.12)
GOLDEN_F_MAX = 0.9
GOLDEN_SCALE_PX = 4
