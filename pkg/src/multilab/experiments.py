"""Preset experiments shared by the command line and the acceptance suite.

The randomized studies keep the box and the spectral band fixed in
physical units, so doubling N only refines the quadrature of the norms.
"""
from __future__ import annotations

import math

import numpy as np

from .commutator import calderon_c1_direct, calderon_c1_multiplier, calderon_cn
from .grid import GridSpec, SampledFunction, norm_lp, sample
from .littlewood_paley import build_dyadic_partition, square_function
from .multiplier_op import MultilinearPlan, estimate_operator_norm, random_band_limited
from .symbols import calderon_symbol

__all__ = [
    "relative_l2",
    "gaussian_pair",
    "c1_crosscheck",
    "separable_cn_check",
    "square_function_ratios",
    "operator_norm_study",
    "OPERATOR_NORM_EXPONENTS",
]

OPERATOR_NORM_EXPONENTS = ((2.0, 2.0), (4.0, 4.0), (3.0, 1.5))


def relative_l2(u, v) -> float:
    u = u.values if isinstance(u, SampledFunction) else np.asarray(u)
    v = v.values if isinstance(v, SampledFunction) else np.asarray(v)
    return float(np.linalg.norm(u - v) / np.linalg.norm(v))


def gaussian_pair(spec: GridSpec, shift: float = 0.3) -> tuple[SampledFunction, SampledFunction]:
    """f = exp(-pi x^2) and a = exp(-pi (x - shift)^2) (per axis product in 2D)."""
    if spec.dim == 1:
        f = sample(lambda x: np.exp(-math.pi * x**2), spec)
        a = sample(lambda x: np.exp(-math.pi * (x - shift) ** 2), spec)
    else:
        f = sample(lambda *xs: np.exp(-math.pi * sum(x**2 for x in xs)), spec)
        a = sample(lambda *xs: np.exp(-math.pi * sum((x - shift) ** 2 for x in xs)), spec)
    return f, a


def c1_crosscheck(N: int = 1024, L: float = 16.0, pad: int = 4, jobs: int = 1):
    """Direct quadrature against the multiplier route on a Gaussian pair.

    Returns (relative L2 discrepancy, direct, multiplier).
    """
    spec = GridSpec(1, N, L)
    f, a = gaussian_pair(spec)
    d = calderon_c1_direct(f, a)
    m = calderon_c1_multiplier(f, a, pad=pad, jobs=jobs)
    return relative_l2(d, m), d, m


def separable_cn_check(N: int = 256, L: float = 8.0, mode: str = "direct", pad: int | None = None, K=None) -> float:
    """Relative L2 gap between the 2D commutator and the tensor of 1D ones.

    Inputs are f(x1, x2) = f1(x1) f2(x2), a(u1, u2) = a1(u1) a2(u2) with
    Gaussians of different centres and widths in the two slots.
    """
    g1, g2 = GridSpec(1, N, L), GridSpec(2, N, L)
    f1 = lambda x: np.exp(-math.pi * x**2)  # noqa: E731
    f2 = lambda x: np.exp(-math.pi * (x / 1.2) ** 2)  # noqa: E731
    a1 = lambda x: np.exp(-math.pi * (x - 0.3) ** 2)  # noqa: E731
    a2 = lambda x: np.exp(-math.pi * (x + 0.2) ** 2)  # noqa: E731
    F = sample(lambda x, y: f1(x) * f2(y), g2)
    A = sample(lambda x, y: a1(x) * a2(y), g2)
    out = calderon_cn(F, A, mode=mode, pad=pad, K=K)
    one = lambda f, a: calderon_cn(sample(f, g1), sample(a, g1), mode=mode, pad=pad, K=K).values  # noqa: E731
    return relative_l2(out.values, np.outer(one(f1, a1), one(f2, a2)))


def square_function_ratios(
    N: int,
    L: float = 8.0,
    band: int = 8,
    p_list=(1.5, 2.0, 3.0),
    trials: int = 50,
    seed: int = 0,
    axes=(0, 1),
) -> dict[float, np.ndarray]:
    """||S f||_p / ||f||_p for seeded random band-limited f on a 2D grid.

    ``S`` is the iterated coordinate square function over ``axes``.
    Frequencies with a zero component are excluded, since coordinate
    projections annihilate them.
    """
    spec = GridSpec(2, N, L)
    P1 = build_dyadic_partition(1)
    out = {p: np.empty(trials) for p in p_list}
    for t, child in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        f = random_band_limited(spec, np.random.default_rng(child), band, avoid_axes=True)
        S = square_function(f, axes, P1=P1)
        for p in p_list:
            out[p][t] = norm_lp(S, p) / norm_lp(f, p)
    return out


def operator_norm_study(
    Ns=(256, 512, 1024),
    exponents=OPERATOR_NORM_EXPONENTS,
    trials: int = 100,
    seed: int = 0,
    L: float = 8.0,
    band: int = 8,
    jobs: int = 1,
) -> dict[tuple, list[float]]:
    """Maximum empirical Calderon ratio per exponent pair, one entry per N."""
    out = {tuple(e): [] for e in exponents}
    for N in Ns:
        plan = MultilinearPlan(calderon_symbol(), GridSpec(1, N, L), K=band, singular_fill=0.0)
        for e in exponents:
            rep = estimate_operator_norm(plan, e, trials=trials, seed=seed, band=band, avoid_axes=True, jobs=jobs)
            out[tuple(e)].append(rep.max_ratio)
    return out
