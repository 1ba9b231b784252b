"""Smooth dyadic partitions of unity and Littlewood-Paley projections."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import DomainError, GridMismatchError
from .grid import GridSpec, SampledFunction, forward_transform, inverse_transform

__all__ = [
    "smooth_step",
    "smooth_cutoff",
    "DyadicPartition",
    "build_dyadic_partition",
    "resolvable_range",
    "delta_full",
    "delta_coord",
    "square_function",
]


def _exp_bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def smooth_step(t, a: float = 0.0, b: float = 1.0):
    """C-infinity step: 0 for t <= a, 1 for t >= b, built from exp(-1/s)."""
    s = (np.asarray(t, dtype=float) - a) / (b - a)
    g0, g1 = _exp_bump(s), _exp_bump(1.0 - s)
    return g0 / (g0 + g1)


def smooth_cutoff(t):
    """C-infinity cutoff equal to 1 on [0, 1] and 0 on [2, inf)."""
    return 1.0 - smooth_step(t, 1.0, 2.0)


@dataclass(frozen=True)
class DyadicPartition:
    """Radial profile psi(xi) = phi(|xi|) - phi(2|xi|) on R^dim.

    ``phi`` is :func:`smooth_cutoff`, so psi is supported in the annulus
    1/2 <= |xi| <= 2 and sum_j psi(2^-j xi) telescopes to 1 for xi != 0.
    """

    dim: int

    def radial(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        return smooth_cutoff(r) - smooth_cutoff(2.0 * r)

    def __call__(self, xi):
        """Evaluate at points ``xi`` whose last axis has length ``dim``."""
        xi = np.asarray(xi, dtype=float)
        if self.dim == 1 and (xi.ndim == 0 or xi.shape[-1] != 1):
            return self.radial(xi)
        if xi.shape[-1] != self.dim:
            raise GridMismatchError(f"points have {xi.shape[-1]} coordinates, partition lives on R^{self.dim}")
        return self.radial(np.linalg.norm(xi, axis=-1))

    @cached_property
    def radial_samples(self) -> tuple[np.ndarray, np.ndarray]:
        """Profile sampled on its support [1/2, 2] (for plots and tables)."""
        r = np.linspace(0.5, 2.0, 301)
        return r, self.radial(r)


def build_dyadic_partition(d: int) -> DyadicPartition:
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d}")
    return DyadicPartition(int(d))


def resolvable_range(spec: GridSpec, full: bool = False) -> tuple[int, int]:
    """Dyadic scales j for which psi(2^-j .) can meet the grid spectrum.

    The smallest nonzero frequency is 1/(2L) and the largest per-axis
    frequency N/(4L); ``full=True`` widens the top for the radial norm
    in d dimensions.  Scales outside the range act as zero.
    """
    lo = math.floor(math.log2(1.0 / (2.0 * spec.half_length))) - 1
    top = spec.n / (4.0 * spec.half_length)
    if full:
        top *= math.sqrt(spec.dim)
    hi = math.ceil(math.log2(top)) + 1
    return lo, hi


def _apply_multiplier(f: SampledFunction, mult: np.ndarray) -> SampledFunction:
    F = forward_transform(f)
    return inverse_transform(F * mult)


def delta_full(f: SampledFunction, j: int, P: DyadicPartition) -> SampledFunction:
    """Projection with multiplier psi(2^-j xi) on the full frequency vector."""
    if P.dim != f.spec.dim:
        raise GridMismatchError(f"partition on R^{P.dim}, function on R^{f.spec.dim}")
    return _apply_multiplier(f, P.radial(2.0**-j * f.spec.frequency_norm()))


def _coord_multiplier(spec: GridSpec, j: int, axis: int, P1: DyadicPartition) -> np.ndarray:
    if P1.dim != 1:
        raise GridMismatchError("coordinate projections need a one-dimensional partition")
    if not 0 <= axis < spec.dim:
        raise GridMismatchError(f"axis {axis} out of range for dimension {spec.dim}")
    return P1.radial(2.0**-j * spec.frequency_mesh()[axis])


def delta_coord(f: SampledFunction, j: int, axis: int, P1: DyadicPartition) -> SampledFunction:
    """Projection acting on the frequency of one coordinate (0-based ``axis``)."""
    return _apply_multiplier(f, _coord_multiplier(f.spec, j, axis, P1))


def square_function(
    f: SampledFunction,
    axes,
    jrange: tuple[int, int] | None = None,
    P1: DyadicPartition | None = None,
) -> SampledFunction:
    """Pointwise l2 sum over all scale tuples of iterated coordinate projections.

    Parameters
    ----------
    f : SampledFunction
    axes : iterable of int
        Nonempty set of (0-based) axes carrying a projection.
    jrange : (jmin, jmax), optional
        Inclusive scale range per axis; defaults to :func:`resolvable_range`.
    P1 : DyadicPartition, optional
        One-dimensional partition; built on demand.
    """
    axes = sorted(set(int(a) for a in axes))
    if not axes:
        raise DomainError("square_function needs at least one axis")
    spec = f.spec
    P1 = P1 or build_dyadic_partition(1)
    jmin, jmax = jrange if jrange is not None else resolvable_range(spec)
    F = forward_transform(f)
    factors = {}
    for a in axes:
        per = []
        for j in range(jmin, jmax + 1):
            m = _coord_multiplier(spec, j, a, P1)
            if np.any(m != 0):
                per.append(m)
        factors[a] = per
    acc = np.zeros(spec.shape)
    for combo in itertools.product(*(factors[a] for a in axes)):
        mult = combo[0]
        for m in combo[1:]:
            mult = mult * m
        if not np.any(mult * F.coeffs):
            continue
        piece = inverse_transform(F * mult).values
        acc += np.abs(piece) ** 2
    return SampledFunction(spec, np.sqrt(acc))
