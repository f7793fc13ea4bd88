"""
Color differences between grass colors
======================================

Convert a few sRGB grass colors to CIELAB and compare them with CIE76 and
CIEDE2000. CIEDE2000 weights lightness, chroma and hue separately and
comes out noticeably smaller than CIE76 for these saturated colors.
"""

import numpy as np

from grasspixel import delta_e00, delta_e76, srgb_to_lab

# dry (yellow) and fresh (green) grass, plus two mixtures in between
names = ["yellow", "mix 1", "mix 2", "green"]
rgb = np.array([
    [0.78, 0.69, 0.33],
    [0.60, 0.62, 0.27],
    [0.42, 0.55, 0.20],
    [0.18, 0.45, 0.12],
])
lab = srgb_to_lab(rgb)
for name, (L, a, b) in zip(names, lab):
    print(f"{name:7s} L*={L:6.2f} a*={a:7.2f} b*={b:7.2f}")

print()
print("pair              dE76    dE00")
for i in range(len(names) - 1):
    d76 = delta_e76(lab[i], lab[i + 1])
    d00 = delta_e00(lab[i], lab[i + 1])
    print(f"{names[i]:>7s} - {names[i + 1]:7s} {d76:7.2f} {d00:7.2f}")

# all pairs in one vectorized call
i, j = np.triu_indices(len(lab), k=1)
print()
print("largest dE00 between any two colors:", round(float(np.max(delta_e00(lab[i], lab[j]))), 2))
