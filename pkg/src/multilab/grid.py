"""Periodic grids, the Fourier transform and norm functionals.

A function on R^d is represented by its samples on the periodic grid

    x = -L + i * (2L / N),   i = 0, ..., N - 1   (per axis)

covering the box [-L, L)^d.  Its spectrum is indexed by the integer
frequency vectors k in {-N/2, ..., N/2 - 1}^d, stored in centered order,
with physical frequency xi = k / (2L).  The transform follows the
convention

    F(xi) = int f(x) exp(-2 pi i x . xi) dx,

approximated by the trapezoidal (DFT) rule including the (2L/N)^d measure
factor, so that symbols can be evaluated directly at physical frequencies.
"""
from __future__ import annotations

import csv
import struct
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import BoundaryMassError, DomainError, EvaluationError, GridMismatchError

__all__ = [
    "GridSpec",
    "SampledFunction",
    "SpectralFunction",
    "forward_transform",
    "inverse_transform",
    "norm_lp",
    "norm_weak_lp",
    "sample",
    "boundary_mass",
    "check_boundary_mass",
    "save_binary",
    "load_binary",
    "to_csv",
]

MAGIC = b"MLAB1"


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on the box [-L, L)^d.

    Parameters
    ----------
    dim : int
        Spatial dimension d.
    n : int
        Samples per axis N; must be even and at least 4.
    half_length : float
        Half side length L of the box.
    """

    dim: int
    n: int
    half_length: float

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dim must be a positive integer, got {self.dim}")
        if int(self.n) != self.n or self.n < 4 or self.n % 2:
            raise DomainError(f"samples per axis must be even and >= 4, got {self.n}")
        if not (np.isfinite(self.half_length) and self.half_length > 0):
            raise DomainError(f"half_length must be positive, got {self.half_length}")
        if float(self.n) ** self.dim > 2**40:
            raise DomainError("grid too large")
        object.__setattr__(self, "dim", int(self.dim))
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "half_length", float(self.half_length))

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        return self.n**self.dim

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    @property
    def frequency_spacing(self) -> float:
        return 1.0 / (2.0 * self.half_length)

    @cached_property
    def points(self) -> np.ndarray:
        """1D sample coordinates shared by every axis."""
        return -self.half_length + self.spacing * np.arange(self.n)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Integer frequencies -N/2, ..., N/2 - 1 in centered order."""
        return np.arange(-self.n // 2, self.n // 2)

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Physical frequencies k / (2L) in centered order."""
        return self.wavenumbers / (2.0 * self.half_length)

    def mesh(self, shift: float = 0.0) -> list[np.ndarray]:
        """Open (broadcastable) coordinate arrays, one per axis.

        ``shift`` moves every coordinate by ``shift`` grid cells.
        """
        x = self.points + shift * self.spacing
        return _open_mesh(x, self.dim)

    def frequency_mesh(self) -> list[np.ndarray]:
        return _open_mesh(self.frequencies, self.dim)

    def frequency_norm(self) -> np.ndarray:
        """|xi| on the full frequency grid."""
        return np.sqrt(sum(w**2 for w in self.frequency_mesh()))

    def scaled(self, factor: int) -> "GridSpec":
        """Same spacing, box enlarged ``factor`` times (used for zero padding)."""
        return GridSpec(self.dim, self.n * factor, self.half_length * factor)


def _open_mesh(x: np.ndarray, dim: int) -> list[np.ndarray]:
    out = []
    for axis in range(dim):
        shape = [1] * dim
        shape[axis] = x.size
        out.append(x.reshape(shape))
    return out


def _as_grid_array(spec: GridSpec, values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.size != spec.size:
        raise GridMismatchError(f"{what} has {arr.size} entries, grid needs {spec.size}")
    arr = np.array(arr.reshape(spec.shape), dtype=complex, order="C")
    if not np.all(np.isfinite(arr)):
        raise EvaluationError(f"{what} contains non-finite entries")
    arr.flags.writeable = False
    return arr


class _GridArray:
    """Arithmetic shared by sampled and spectral arrays on a common grid."""

    spec: GridSpec

    def _data(self) -> np.ndarray:
        raise NotImplementedError

    def _new(self, data):
        return type(self)(self.spec, data)

    def _other(self, other):
        if isinstance(other, _GridArray):
            if type(other) is not type(self) or other.spec != self.spec:
                raise GridMismatchError("operands live on different grids")
            return other._data()
        return other

    def __add__(self, other):
        return self._new(self._data() + self._other(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._new(self._data() - self._other(other))

    def __rsub__(self, other):
        return self._new(self._other(other) - self._data())

    def __mul__(self, other):
        return self._new(self._data() * self._other(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._new(self._data() / self._other(other))

    def __neg__(self):
        return self._new(-self._data())


@dataclass(frozen=True, eq=False)
class SampledFunction(_GridArray):
    """Complex samples of a function on a :class:`GridSpec`.

    ``values`` is stored as a read-only array of shape ``spec.shape``;
    ``values.ravel()`` gives the row-major flat layout.
    """

    spec: GridSpec
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_grid_array(self.spec, self.values, "values"))

    def _data(self):
        return self.values

    @property
    def real(self) -> "SampledFunction":
        return SampledFunction(self.spec, self.values.real)

    def conj(self) -> "SampledFunction":
        return SampledFunction(self.spec, self.values.conj())

    def roll(self, shift) -> "SampledFunction":
        """Periodic translation by whole grid cells (``shift`` per axis)."""
        shift = np.broadcast_to(np.atleast_1d(shift), (self.spec.dim,))
        return SampledFunction(self.spec, np.roll(self.values, tuple(int(s) for s in shift), axis=tuple(range(self.spec.dim))))


@dataclass(frozen=True, eq=False)
class SpectralFunction(_GridArray):
    """Fourier coefficients on the centered integer frequency grid."""

    spec: GridSpec
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_grid_array(self.spec, self.coeffs, "coeffs"))

    def _data(self):
        return self.coeffs


def _parity(spec: GridSpec) -> np.ndarray:
    # exp(-2 pi i x_0 k / 2L) = (-1)^k for x_0 = -L
    sign = np.where(spec.wavenumbers % 2 == 0, 1.0, -1.0)
    out = np.ones(spec.shape)
    for s in _open_mesh(sign, spec.dim):
        out = out * s
    return out


def forward_transform(f: SampledFunction) -> SpectralFunction:
    """Trapezoidal approximation of the Fourier transform of ``f``.

    Returns coefficients ``F[k] ~ int f(x) exp(-2 pi i x . k/(2L)) dx``.
    """
    if not isinstance(f, SampledFunction):
        raise GridMismatchError("forward_transform expects a SampledFunction")
    spec = f.spec
    coeffs = np.fft.fftshift(np.fft.fftn(f.values)) * _parity(spec) * spec.cell_volume
    return SpectralFunction(spec, coeffs)


def inverse_transform(F: SpectralFunction) -> SampledFunction:
    """Exact inverse of :func:`forward_transform`."""
    if not isinstance(F, SpectralFunction):
        raise GridMismatchError("inverse_transform expects a SpectralFunction")
    spec = F.spec
    values = np.fft.ifftn(np.fft.ifftshift(F.coeffs * _parity(spec))) / spec.cell_volume
    return SampledFunction(spec, values)


def norm_lp(f: SampledFunction, p: float) -> float:
    """Riemann-sum L^p (quasi)norm; ``p=np.inf`` gives the max norm."""
    if not p > 0:
        raise DomainError(f"p must be positive, got {p}")
    a = np.abs(f.values)
    if np.isinf(p):
        return float(a.max())
    return float((np.sum(a**p) * f.spec.cell_volume) ** (1.0 / p))


def norm_weak_lp(f: SampledFunction, p: float) -> float:
    """Weak L^p quasinorm sup_t t * |{|f| > t}|^(1/p) of the step function.

    For a grid function the supremum is approached as t increases to one
    of the sampled values a, where the level set is {|f| >= a}; the value
    returned is that limit.
    """
    if not p > 0 or np.isinf(p):
        raise DomainError(f"p must be positive and finite, got {p}")
    a = np.sort(np.abs(f.values).ravel())[::-1]
    if a.size == 0 or a[0] == 0:
        return 0.0
    # count of entries >= a[i], resolving ties to the last index of each group
    counts = np.searchsorted(-a, -a, side="right")
    return float(np.max(a * (counts * f.spec.cell_volume) ** (1.0 / p)))


def sample(expr, spec: GridSpec, shift: float = 0.0) -> SampledFunction:
    """Evaluate ``expr(x_1, ..., x_d)`` on the grid.

    ``expr`` receives broadcastable coordinate arrays.  With a nonzero
    ``shift`` (in grid cells) the samples are those of the translate
    x -> expr(x + shift * h); translation-invariant quantities such as
    norms and Fourier multipliers are unaffected.
    """
    coords = spec.mesh(shift)
    with np.errstate(all="ignore"):
        vals = np.broadcast_to(np.asarray(expr(*coords), dtype=complex), spec.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        idx = np.unravel_index(np.flatnonzero(bad)[0], spec.shape)
        point = tuple(float(c.ravel()[i]) for c, i in zip(coords, idx))
        raise EvaluationError(f"non-finite value at x = {point}")
    return SampledFunction(spec, vals)


def boundary_mass(f: SampledFunction, fraction: float = 0.1) -> float:
    """Share of the L^2 mass located in the outer ``fraction`` of the box."""
    spec = f.spec
    edge = (1.0 - fraction) * spec.half_length
    outer = np.zeros(spec.shape, dtype=bool)
    for x in spec.mesh():
        outer = outer | (np.abs(x) > edge)
    w = np.abs(f.values) ** 2
    total = w.sum()
    if total == 0:
        return 0.0
    return float(w[outer].sum() / total)


def check_boundary_mass(f: SampledFunction, tol: float = 1e-6, fraction: float = 0.1, name: str = "input"):
    """Raise :class:`BoundaryMassError` if ``f`` does not decay inside the box."""
    m = boundary_mass(f, fraction)
    if m > tol:
        raise BoundaryMassError(
            f"{name}: {m:.3e} of the L2 mass lies in the outer {fraction:.0%} of the box (limit {tol:g})"
        )
    return m


def save_binary(obj, path) -> None:
    """Write a sampled or spectral function in the little-endian MLAB1 layout.

    Header: magic ``MLAB1`` then d, N, L as float64; body: interleaved
    real/imaginary float64 values in row-major (centered, for spectra) order.
    """
    if isinstance(obj, SampledFunction):
        data = obj.values
    elif isinstance(obj, SpectralFunction):
        data = obj.coeffs
    else:
        raise GridMismatchError("can only save SampledFunction or SpectralFunction")
    spec = obj.spec
    header = MAGIC + struct.pack("<ddd", spec.dim, spec.n, spec.half_length)
    Path(path).write_bytes(header + np.ascontiguousarray(data, dtype="<c16").tobytes())


def load_binary(path, spectral: bool = False):
    """Read a file written by :func:`save_binary`."""
    raw = Path(path).read_bytes()
    if raw[:5] != MAGIC:
        raise GridMismatchError(f"{path}: bad magic {raw[:5]!r}")
    d, n, half_length = struct.unpack("<ddd", raw[5:29])
    spec = GridSpec(int(d), int(n), half_length)
    body = np.frombuffer(raw[29:], dtype="<c16")
    if body.size != spec.size:
        raise GridMismatchError(f"{path}: {body.size} values for a grid of {spec.size}")
    return SpectralFunction(spec, body) if spectral else SampledFunction(spec, body)


def to_csv(f: SampledFunction, path, fixed: dict[int, int] | None = None) -> None:
    """Export a 1D or 2D slice of ``f`` as CSV (coordinates, re, im).

    ``fixed`` maps the remaining axes to grid indices for d > 2.
    """
    spec = f.spec
    fixed = dict(fixed or {})
    free = [a for a in range(spec.dim) if a not in fixed]
    if len(free) not in (1, 2):
        raise GridMismatchError("CSV export needs a 1D or 2D slice; fix the other axes")
    index = tuple(fixed.get(a, slice(None)) for a in range(spec.dim))
    block = f.values[index]
    x = spec.points
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{a}" for a in free] + ["re", "im"])
        for idx in np.ndindex(block.shape):
            v = block[idx]
            w.writerow([repr(float(x[i])) for i in idx] + [repr(float(v.real)), repr(float(v.imag))])
