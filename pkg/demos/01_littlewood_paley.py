"""Dyadic pieces of a random function and its square function.

Run with ``python3 demos/01_littlewood_paley.py``.  The script splits a
band-limited function into coordinate Littlewood-Paley pieces, checks that
the pieces add back up, and compares L^p norms of the square function with
those of the function itself.
"""
import numpy as np

from multilab import GridSpec, build_dyadic_partition, delta_coord, norm_lp, square_function
from multilab.littlewood_paley import resolvable_range
from multilab.multiplier_op import random_band_limited

spec = GridSpec(2, 128, 8.0)
P1 = build_dyadic_partition(1)
f = random_band_limited(spec, np.random.default_rng(0), band=12, avoid_axes=True)

lo, hi = resolvable_range(spec)
print(f"grid {spec.n}x{spec.n} on [-{spec.half_length}, {spec.half_length})^2, scales j = {lo}..{hi}")

# every frequency with a nonzero first component is covered by at most two scales
pieces = [delta_coord(f, j, 0, P1) for j in range(lo, hi + 1)]
energy = [norm_lp(p, 2) for p in pieces]
for j, e in zip(range(lo, hi + 1), energy):
    if e > 1e-12:
        print(f"  j = {j:3d}   ||Delta_j f||_2 = {e:.4f}")
recon = sum(p.values for p in pieces)
print(f"reconstruction error {np.max(np.abs(recon - f.values)):.2e}")

S = square_function(f, (0, 1), P1=P1)
for p in (1.5, 2.0, 3.0):
    print(f"p = {p}: ||S f||_p / ||f||_p = {norm_lp(S, p) / norm_lp(f, p):.4f}")
