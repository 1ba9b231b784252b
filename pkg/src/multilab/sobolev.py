"""Fractional Sobolev multipliers, dyadic smoothness constants and Stein's I_alpha.

Symbols on (R^n)^m are sampled on an (m*n)-dimensional grid whose axis
``i * n + l`` carries coordinate l of the i-th frequency variable.  In
that setting the grid variable plays the role of the frequency and the
dual variable of the grid is the "physical" one; the fractional operators
act by multiplication on the dual side.
"""
from __future__ import annotations

import csv
import enum
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import integrate

from .errors import DomainError, EvaluationError, GridMismatchError
from .grid import (
    GridSpec,
    SampledFunction,
    SpectralFunction,
    forward_transform,
    inverse_transform,
    norm_lp,
)
from .littlewood_paley import DyadicPartition

__all__ = [
    "Family",
    "SmoothnessSpec",
    "fractional_multiplier",
    "fractional_op",
    "localized_symbol",
    "localized_norm",
    "ConstantReport",
    "hormander_constant",
    "multiparameter_constant",
    "stein_I_alpha",
]


class Family(enum.Enum):
    """The three fractional operator types."""

    COORDINATEWISE = "coordinatewise"  # prod_{i,l} (1 - d^2_{il})^{g_il/2}
    PER_VARIABLE = "per_variable"  # prod_i (1 - Lap_i)^{g_i/2}
    FULL = "full"  # (1 - Lap)^{g/2}


@dataclass(frozen=True)
class SmoothnessSpec:
    """Operator family, exponents and integrability exponent.

    Parameters
    ----------
    family : Family or str
    m, n : int
        Arity and per-variable dimension.
    gamma : float or array_like
        Shape (m, n) for COORDINATEWISE, (m,) for PER_VARIABLE, scalar for
        FULL.  A scalar is broadcast for the first two families.
    r : float
        Integrability exponent in [1, 2].

    Notes
    -----
    Exponents may be any finite reals so that inverse operators can be
    formed; :func:`localized_norm` requires them to be positive.
    """

    family: Family
    m: int
    n: int
    gamma: np.ndarray
    r: float = 2.0

    def __post_init__(self):
        fam = Family(self.family) if not isinstance(self.family, Family) else self.family
        object.__setattr__(self, "family", fam)
        if self.m < 1 or self.n < 1:
            raise DomainError(f"arity and dimension must be positive, got m={self.m}, n={self.n}")
        shape = {Family.COORDINATEWISE: (self.m, self.n), Family.PER_VARIABLE: (self.m,), Family.FULL: ()}[fam]
        g = np.asarray(self.gamma, dtype=float)
        if g.ndim == 0:
            g = np.broadcast_to(g, shape).copy()
        if g.shape != shape:
            raise GridMismatchError(f"{fam.name} exponents must have shape {shape}, got {g.shape}")
        if not np.all(np.isfinite(g)):
            raise DomainError("exponents must be finite")
        g.setflags(write=False)
        object.__setattr__(self, "gamma", g)
        if not 1.0 <= self.r <= 2.0:
            raise DomainError(f"r must lie in [1, 2], got {self.r}")

    @property
    def dim(self) -> int:
        return self.m * self.n

    def negated(self) -> "SmoothnessSpec":
        return SmoothnessSpec(self.family, self.m, self.n, -self.gamma, self.r)

    def require_positive(self):
        if not np.all(self.gamma > 0):
            raise DomainError(f"smoothness exponents must be positive, got {self.gamma.tolist()}")


def fractional_multiplier(G: GridSpec, spec: SmoothnessSpec) -> np.ndarray:
    """Multiplier array on the dual grid of ``G`` (centered order)."""
    if G.dim != spec.dim:
        raise GridMismatchError(f"grid dimension {G.dim} != m*n = {spec.dim}")
    eta = G.frequency_mesh()
    w = [1.0 + 4.0 * math.pi**2 * e**2 for e in eta]  # per-axis weights, broadcastable
    out = np.ones(G.shape)
    if spec.family is Family.COORDINATEWISE:
        for i in range(spec.m):
            for l in range(spec.n):
                out = out * w[i * spec.n + l] ** (spec.gamma[i, l] / 2)
    elif spec.family is Family.PER_VARIABLE:
        for i in range(spec.m):
            block = sum(4.0 * math.pi**2 * eta[i * spec.n + l] ** 2 for l in range(spec.n))
            out = out * (1.0 + block) ** (spec.gamma[i] / 2)
    else:
        block = sum(4.0 * math.pi**2 * e**2 for e in eta)
        out = out * (1.0 + block) ** (float(spec.gamma) / 2)
    return out


def fractional_op(F, spec: SmoothnessSpec):
    """Apply the fractional operator selected by ``spec``.

    Accepts a :class:`SpectralFunction` (multiplied directly) or a
    :class:`SampledFunction` (transformed, multiplied, transformed back)
    and returns the same kind.
    """
    if not isinstance(F, (SpectralFunction, SampledFunction)):
        raise GridMismatchError(f"expected a sampled or spectral function, got {type(F).__name__}")
    mult = fractional_multiplier(F.spec, spec)
    if isinstance(F, SpectralFunction):
        return F * mult
    return inverse_transform(forward_transform(F) * mult)


# localized norms -------------------------------------------------------------

def _stacked_points(G: GridSpec, m: int, n: int) -> np.ndarray:
    # half-cell offset keeps samples off coordinate hyperplanes
    coords = G.mesh(shift=0.5)
    full = np.stack(np.broadcast_arrays(*coords), axis=-1)
    return full.reshape(G.shape + (m, n))


def _evaluate(sigma, xi):
    vals = np.asarray(sigma(xi), dtype=complex)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = np.unravel_index(np.flatnonzero(bad)[0], bad.shape)
        raise EvaluationError(f"{getattr(sigma, 'name', 'symbol')} is not finite at {xi[idx].ravel().tolist()}")
    return vals


def _check_symbol(sigma, spec: SmoothnessSpec, G: GridSpec):
    if (sigma.m, sigma.n) != (spec.m, spec.n):
        raise GridMismatchError(f"symbol on (R^{sigma.n})^{sigma.m}, spec on (R^{spec.n})^{spec.m}")
    if G.dim != spec.dim:
        raise GridMismatchError(f"grid dimension {G.dim} != m*n = {spec.dim}")


def localized_symbol(sigma, j: int, P: DyadicPartition, spec: SmoothnessSpec, G: GridSpec) -> SampledFunction:
    """Samples of xi -> sigma(2^j xi) * psi(xi) on the half-cell offset grid."""
    _check_symbol(sigma, spec, G)
    if P.dim != spec.dim:
        raise GridMismatchError(f"partition on R^{P.dim}, symbol on R^{spec.dim}")
    xi = _stacked_points(G, spec.m, spec.n)
    bump = P.radial(np.linalg.norm(xi.reshape(G.shape + (-1,)), axis=-1))
    vals = np.zeros(G.shape, dtype=complex)
    live = bump != 0
    vals[live] = _evaluate(sigma, 2.0**j * xi[live]) * bump[live]
    return SampledFunction(G, vals)


def localized_norm(sigma, j: int, P: DyadicPartition, spec: SmoothnessSpec, G: GridSpec) -> float:
    """L^r norm of the fractional operator applied to sigma(2^j .) psi."""
    spec.require_positive()
    loc = localized_symbol(sigma, j, P, spec, G)
    return norm_lp(fractional_op(loc, spec), spec.r)


@dataclass(frozen=True)
class ConstantReport:
    """Maximum of a family of localized norms plus the full profile.

    ``profile`` maps a scale (int, or tuple of ints) to its norm.
    """

    value: float
    profile: dict = field(repr=False)
    argmax: object = None

    @property
    def spread(self) -> float:
        """(max - min) / max over the profile; 0 for a perfectly flat profile."""
        v = np.array(list(self.profile.values()))
        return float((v.max() - v.min()) / v.max()) if v.max() > 0 else 0.0

    def to_csv(self, path) -> None:
        keys = list(self.profile)
        width = len(keys[0]) if isinstance(keys[0], tuple) else 1
        header = ["j"] if width == 1 and not isinstance(keys[0], tuple) else [f"k{l + 1}" for l in range(width)]
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header + ["norm"])
            for k, v in self.profile.items():
                w.writerow((list(k) if isinstance(k, tuple) else [k]) + [repr(v)])


def _run(fn, keys, jobs: int):
    if jobs <= 1:
        return [fn(k) for k in keys]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, keys))


def _report(keys, values) -> ConstantReport:
    profile = dict(zip(keys, (float(v) for v in values)))
    best = max(profile, key=profile.get)
    return ConstantReport(profile[best], profile, best)


def hormander_constant(
    sigma,
    P: DyadicPartition,
    spec: SmoothnessSpec,
    G: GridSpec,
    jrange: tuple[int, int] = (-8, 8),
    jobs: int = 1,
) -> ConstantReport:
    """Max over j in ``jrange`` (inclusive) of :func:`localized_norm`."""
    keys = list(range(jrange[0], jrange[1] + 1))
    vals = _run(lambda j: localized_norm(sigma, j, P, spec, G), keys, jobs)
    return _report(keys, vals)


def multiparameter_constant(
    sigma,
    partitions,
    spec: SmoothnessSpec,
    G: GridSpec,
    krange=(-2, 2),
    jobs: int = 1,
) -> ConstantReport:
    """Max over (k_1, ..., k_n) of the column-dilated localized norm.

    Column l of the m x n coordinate matrix is scaled by 2^{k_l} and the
    sample is multiplied by prod_l psi_l(column l), each ``psi_l`` a
    partition on R^m.  ``krange`` is one (lo, hi) pair shared by every
    column or a list of n pairs.
    """
    _check_symbol(sigma, spec, G)
    if spec.family is not Family.COORDINATEWISE:
        raise DomainError("the multiparameter constant uses the COORDINATEWISE family")
    spec.require_positive()
    partitions = list(partitions)
    if len(partitions) != spec.n:
        raise GridMismatchError(f"need {spec.n} column partitions, got {len(partitions)}")
    for Pl in partitions:
        if Pl.dim != spec.m:
            raise GridMismatchError(f"column partitions live on R^{spec.m}, got R^{Pl.dim}")
    ranges = [krange] * spec.n if np.ndim(krange) == 1 else list(krange)
    if len(ranges) != spec.n:
        raise GridMismatchError(f"need {spec.n} k-ranges, got {len(ranges)}")
    keys = list(itertools.product(*(range(lo, hi + 1) for lo, hi in ranges)))

    xi = _stacked_points(G, spec.m, spec.n)
    bump = np.ones(G.shape)
    for l, Pl in enumerate(partitions):
        bump = bump * Pl.radial(np.linalg.norm(xi[..., :, l], axis=-1))
    live = bump != 0
    pts = xi[live]

    def one(ks):
        scale = 2.0 ** np.asarray(ks, dtype=float)
        vals = np.zeros(G.shape, dtype=complex)
        vals[live] = _evaluate(sigma, pts * scale) * bump[live]
        return norm_lp(fractional_op(SampledFunction(G, vals), spec), spec.r)

    return _report(keys, _run(one, keys, jobs))


# Stein I_alpha ---------------------------------------------------------------

def _tail_constant(d: int, alpha: float) -> float:
    """int_{|z|_inf > 1} |z|^{-d-2 alpha} dz (scale by L^{-2 alpha})."""
    if d == 1:
        return 1.0 / alpha
    if d == 2:
        ang, _ = integrate.quad(lambda t: math.cos(t) ** (2 * alpha), 0.0, math.pi / 4)
        return 8.0 * ang / (2 * alpha)
    raise DomainError(f"stein_I_alpha supports d <= 2, got {d}")


def _min_image(spec: GridSpec) -> list[np.ndarray]:
    # periodic distances from the grid origin, one open array per axis
    i = np.arange(spec.n)
    di = np.minimum(i, spec.n - i) * spec.spacing
    shape = [1] * spec.dim
    out = []
    for a in range(spec.dim):
        s = list(shape)
        s[a] = spec.n
        out.append(di.reshape(s))
    return out


def _kernel(spec: GridSpec, alpha: float) -> np.ndarray:
    r2 = sum(c**2 for c in _min_image(spec))
    with np.errstate(divide="ignore"):
        K = r2 ** (-(spec.dim + 2 * alpha) / 2)
    K[(0,) * spec.dim] = 0.0  # omitted diagonal
    return K


def stein_I_alpha(
    f: SampledFunction,
    alpha: float,
    method: str = "direct",
    chunk: int | None = None,
    tail: bool = True,
) -> SampledFunction:
    """Pointwise (int |f(x) - f(y)|^2 / |x - y|^{d + 2 alpha} dy)^{1/2}.

    The y-integral over the box is a Riemann sum with y = x omitted, taken
    over periodic nearest images so that every x sees a full box around
    it.  The exterior of that box, where ``f`` is assumed to vanish,
    contributes |f(x)|^2 times a closed-form tail.

    Parameters
    ----------
    method : {"direct", "fft"}
        ``"direct"`` sums pairs in chunks (O(N^{2d})); ``"fft"`` expands the
        square and uses periodic convolutions (O(N^d log N)).
    tail : bool
        Add the exterior contribution.  Pass False for periodic inputs
        (constants, plane waves) that do not vanish outside the box.
    """
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    spec = f.spec
    tail = _tail_constant(spec.dim, alpha) * spec.half_length ** (-2 * alpha) if tail else 0.0
    v = f.values
    K = _kernel(spec, alpha)
    hv = spec.cell_volume
    if method == "fft":
        Kh = np.fft.fftn(K)
        conv = lambda g: np.fft.ifftn(np.fft.fftn(g) * Kh)  # noqa: E731
        S = K.sum()
        sq = np.abs(v) ** 2 * S - 2.0 * np.real(np.conj(v) * conv(v)) + np.real(conv(np.abs(v) ** 2))
        sq = np.maximum(sq, 0.0) * hv
    elif method == "direct":
        flat = v.ravel()
        idx = np.indices(spec.shape).reshape(spec.dim, -1)
        sq = np.empty(flat.size)
        chunk = chunk or max(1, 2**22 // flat.size)
        for start in range(0, flat.size, chunk):
            sl = slice(start, start + chunk)
            # offsets y - x wrapped to the periodic box, looked up in K
            off = tuple((idx[a][None, :] - idx[a][sl, None]) % spec.n for a in range(spec.dim))
            diff = np.abs(flat[None, :] - flat[sl, None]) ** 2
            sq[sl] = np.sum(diff * K[off], axis=1) * hv
        sq = sq.reshape(spec.shape)
    else:
        raise DomainError(f"unknown method {method!r}")
    return SampledFunction(spec, np.sqrt(sq + tail * np.abs(v) ** 2).real)
