"""Empirical L^p1 x L^p2 -> L^p ratios for the Calderon commutator symbol.

The ratios are lower bounds for the operator norm.  Because the inputs
keep a fixed physical band, refining the grid only refines the norms, so
the maxima settle as N grows.
"""
from multilab.experiments import operator_norm_study

study = operator_norm_study(Ns=(256, 512, 1024), trials=100, seed=0)
print("max ratio over 100 seeded trials")
for (p1, p2), maxima in study.items():
    p = 1 / (1 / p1 + 1 / p2)
    row = "  ".join(f"{m:.6f}" for m in maxima)
    print(f"  (p1, p2, p) = ({p1:g}, {p2:g}, {p:g}):  {row}")
