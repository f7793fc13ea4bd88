"""
Fitting a five-level color scale
================================

Build 21 synthetic measurements (0 to 15 mm in 0.75 mm steps) whose colors
move along a straight CIELAB line, then run the full procedure: span gate,
monotonicity check, equal-step targets and nearest-sample mapping.

A second run bends the same colors away from the line; the interior levels
then have no sample within the 3.0 tolerance and the mapping is rejected.
"""

import numpy as np

from grasspixel import LabColor, MeasuredSample, run_procedure

g0 = np.array([40.0, -5.0, 20.0])
g4 = np.array([55.0, -25.0, 5.0])
lengths = [0.75 * k for k in range(21)]

# colors spaced evenly in t; the targets will not fall on these exactly
straight = [MeasuredSample(x, LabColor.from_array(g0 + x / 15 * (g4 - g0))) for x in lengths]
report = run_procedure(straight)

print("span dE00(G0, G4):", round(report.span_check.span, 3))
print("monotone:", report.monotonicity.is_monotone, " min slope:", round(report.monotonicity.min_derivative, 3))
print("target t:", [round(t, 4) for t in report.targets.t])
for lvl in report.mapping.levels:
    print(f"  level {lvl.level}: {lvl.chosen_length_mm:5.2f} mm  min dE00 {lvl.min_delta_e00:.3f}  "
          f"candidates {len(lvl.candidates)}")

# bend the colors perpendicular to the segment in the a*b* plane
d = g4 - g0
perp = np.array([0.0, -d[2], d[1]]) / np.hypot(d[1], d[2])
curved = [
    MeasuredSample(x, LabColor.from_array(g0 + x / 15 * d + 8.0 * np.sin(np.pi * x / 15) * perp))
    for x in lengths
]
bad = run_procedure(curved)
print()
print("curved colors:", "feasible" if bad.feasible else f"failed at {bad.failed_stage}")
print("  interior minima:", [round(m, 2) for m in bad.mapping.min_delta_e00[1:-1]])
