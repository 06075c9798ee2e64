"""Illumination body of the square: volume bounds against the closed form 8t + 2t^2.

Beyond an edge the overshoot grows linearly with the distance; beyond a corner
it is the sum of the two edge excesses.  That gives four 2 x t strips plus four
right triangles with legs t.
"""
from pathlib import Path

from floatillum import cube
from floatillum.illumination import illumination_volume_bounds
from floatillum.plot import overlay_svg

K = cube(2)
for t in (0.2, 0.05, 0.01):
    lo, hi, _ = illumination_volume_bounds(K, t, 512)
    print(f"t = {t:<5} lower {lo:.6f}  exact {8 * t + 2 * t * t:.6f}  upper {hi:.6f}")

out = Path("square_overlay.svg")
out.write_text(overlay_svg(K, 0.1))
print(f"wrote {out}")
