"""Localized Sobolev norms of homogeneous symbols across dyadic scales.

For a symbol of degree 0 the function xi -> sigma(2^j xi) psi(xi) does not
depend on j, so the per-scale profile is flat and its maximum is the
smoothness constant.  A symbol that is not homogeneous shows a trend.
"""
import numpy as np

from multilab import GridSpec, build_dyadic_partition, hormander_constant
from multilab.sobolev import Family, SmoothnessSpec
from multilab.symbols import Symbol, calderon_symbol, cone_partition

G = GridSpec(2, 128, 4.0)
P = build_dyadic_partition(2)
spec = SmoothnessSpec(Family.COORDINATEWISE, 2, 1, 0.8, r=1.5)

for sigma in (calderon_symbol(), *cone_partition(2, 1)):
    rep = hormander_constant(sigma, P, spec, G, jrange=(-4, 4))
    print(f"{sigma.name:10s} A = {rep.value:9.4f}   spread over j = {rep.spread:.1e}")

# exp(-|xi|^2) decays, so its localized norms fall off at large scales
bump = Symbol(2, 1, lambda xi: np.exp(-(xi**2).sum(axis=(-2, -1))), name="gaussian")
rep = hormander_constant(bump, P, spec, G, jrange=(-4, 4))
print("gaussian symbol profile:", ", ".join(f"j={j}: {v:.3f}" for j, v in rep.profile.items()))
