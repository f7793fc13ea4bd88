"""
Repeatability of a grass color
==============================

Ten repeated measurements at each of five lengths. Each repetition is
compared with the mean color of its group; a repetition counts as stable
when its CIEDE2000 distance to that mean is at most 2.0.
"""

import numpy as np

from grasspixel import LabColor, MeasuredSample, analyze_repeats

rng = np.random.default_rng(0)
base = {0.0: (58, -2, 38), 3.75: (55, -9, 33), 7.5: (51, -15, 27), 11.25: (48, -19, 22), 15.0: (45, -22, 18)}

samples = []
for length, lab in base.items():
    for rep in range(1, 11):
        noise = rng.normal(0, 0.5, 3)
        samples.append(MeasuredSample(length, LabColor.from_array(np.add(lab, noise)), (1.2, 1.0, 0.0), rep))

# one badly lit capture at 7.5 mm
k = next(i for i, s in enumerate(samples) if s.green_length_mm == 7.5 and s.repetition == 4)
L, a, b = samples[k].lab
samples[k] = MeasuredSample(7.5, LabColor(L + 6, a, b), (1.2, 1.0, 0.0), 4)

report = analyze_repeats(samples)
for g in report.groups:
    worst = max(g.delta_e00)
    print(f"{g.length_mm:5.2f} mm: {g.n_within}/{g.n_repetitions} within 2.0 (worst {worst:.2f})")
print(f"overall {report.n_within}/{report.n_total}")
