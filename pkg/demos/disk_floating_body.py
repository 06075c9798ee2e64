"""Greedy inscribed polygon of the unit disk and the floating disk it must contain.

For the disk, K_t is a concentric disk whose radius solves segment_area(1 - r) = t.
The greedy polygon should hug that disk from outside while staying inside K.
"""
import math

import numpy as np
from scipy.optimize import brentq

from floatillum import Ball, greedy_inscribed
from floatillum.caps import segment_area

K = Ball.unit(2)
for frac in (1e-3, 3e-4, 1e-4):
    t = frac * math.pi
    r = 1 - brentq(lambda h: float(segment_area(h)) - t, 1e-12, 1.0)
    P, run = greedy_inscribed(K, t, seed=0)
    # the inscribed radius of P must be at least r for K_t to fit inside
    inradius = float(P.b.min())
    print(f"t/vol = {frac:.0e}: n = {run.n:3d}, floating radius {r:.6f}, "
          f"polygon inradius {inradius:.6f}, slack {inradius - r:+.2e}, "
          f"vol(K \\ P) = {math.pi - P.volume_exact():.3e}")
