"""Repeatability of repeated measurements at a fixed length and camera position.

For each (camera position, length) group the reference color is the
per-channel mean in CIELAB; every repetition is compared to it with
CIEDE2000 and counted when within tolerance.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .colorcore import Ciede2000Params, LabColor, delta_e00
from .errors import ValidationError
from .serialize import fmt, num

DEFAULT_TOLERANCE = 2.0
PROTOCOL_LENGTHS_MM = (0.00, 3.75, 7.50, 11.25, 15.00)
PROTOCOL_REPETITIONS = 10


@dataclass(frozen=True)
class RepeatGroup:
    camera_position: tuple
    length_mm: float
    reference: LabColor
    repetitions: tuple
    delta_e00: tuple
    tolerance: float

    @property
    def n_within(self):
        return sum(d <= self.tolerance for d in self.delta_e00)

    @property
    def n_repetitions(self):
        return len(self.delta_e00)

    def to_dict(self):
        return {
            "camera_position": list(self.camera_position),
            "length_mm": num(self.length_mm),
            "reference": [num(v) for v in self.reference],
            "repetitions": list(self.repetitions),
            "delta_e00": [num(v) for v in self.delta_e00],
            "n_within": self.n_within,
            "n_repetitions": self.n_repetitions,
        }


@dataclass(frozen=True)
class RepeatabilityReport:
    groups: tuple
    tolerance: float

    @property
    def n_within(self):
        return sum(g.n_within for g in self.groups)

    @property
    def n_total(self):
        return sum(g.n_repetitions for g in self.groups)

    def to_dict(self):
        return {
            "tolerance": num(self.tolerance),
            "n_within": self.n_within,
            "n_total": self.n_total,
            "groups": [g.to_dict() for g in self.groups],
        }

    def write_deltas_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["h", "d", "theta", "length_mm", "repetition", "delta_e00", "within"])
            for g in self.groups:
                for rep, de in zip(g.repetitions, g.delta_e00):
                    w.writerow([*map(fmt, g.camera_position), fmt(g.length_mm), rep, fmt(de), int(de <= g.tolerance)])


def analyze_repeats(samples, tolerance=DEFAULT_TOLERANCE, params=None):
    if not tolerance > 0:
        raise ValidationError(f"tolerance must be positive, got {tolerance!r}")
    params = params or Ciede2000Params()
    grouped = {}
    for s in samples:
        grouped.setdefault((s.camera_position, s.green_length_mm), []).append(s)

    groups = []
    for (pos, length), members in sorted(grouped.items()):
        if len(members) < 2:
            raise ValidationError(f"group {pos} @ {length} mm has {len(members)} repetition(s), need >= 2")
        members = sorted(members, key=lambda s: s.repetition)
        labs = np.array([tuple(s.lab) for s in members])
        ref = labs.mean(axis=0)
        de = np.atleast_1d(delta_e00(ref, labs, params))
        groups.append(
            RepeatGroup(
                pos,
                length,
                LabColor.from_array(ref),
                tuple(s.repetition for s in members),
                tuple(float(x) for x in de),
                float(tolerance),
            )
        )
    return RepeatabilityReport(tuple(groups), float(tolerance))
