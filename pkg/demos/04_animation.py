"""
Animating a 3 x 3 grass display
===============================

Compile the bundled "letter_n" motif into motor commands and render the
keyframes as enlarged PPM frames. Pass an output directory as the first
argument to keep the files; otherwise a temporary directory is used.
"""

import sys
import tempfile
from pathlib import Path

from grasspixel import MixModel, compile_script, load_bundled_script, render_animation
from grasspixel.scalefit import ScaleMapping

# lengths per level, as a fitted mapping would give them
mapping = ScaleMapping.from_lengths((0.0, 5.25, 8.25, 10.5, 15.0))
script = load_bundled_script("letter_n")

schedule = compile_script(script, mapping)
print(f"{len(schedule.commands)} commands over {schedule.n_keyframes} keyframes")
for k in range(3):
    print(f"t={script.timestamps()[k]:.1f} s steps:\n{schedule.positions(k)}")

mix = MixModel(yellow=(0.78, 0.69, 0.33), green=(0.18, 0.45, 0.12), f_max=0.9)
out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="grasspixel_"))
frames, manifest = render_animation(script, mapping, mix, scale_px=32, out_dir=out)
schedule.write_csv(out / "schedule.csv")
print(f"wrote {len(frames)} frames, manifest.json and schedule.csv to {out}")
