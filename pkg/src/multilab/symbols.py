"""Multiplier symbols: the Calderon symbol, tensor products, cone pieces.

A :class:`Symbol` of arity m on (R^n)^m is evaluated on arrays whose two
trailing axes have shape (m, n): ``xi[..., i, l]`` is coordinate l of the
i-th frequency variable.  Arrays with a single trailing axis of length m*n
are accepted and read in the same row-major order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, GridMismatchError, SingularPointError
from .littlewood_paley import smooth_step

__all__ = [
    "Symbol",
    "constant_symbol",
    "calderon_phi",
    "calderon_symbol",
    "tensor_symbol",
    "cone_partition",
    "coifman_meyer_example",
    "h_profile",
    "get_symbol",
    "SYMBOL_IDS",
]


def _origin(xi):
    return np.all(xi == 0, axis=(-2, -1))


@dataclass(frozen=True)
class Symbol:
    """Evaluatable multiplier with metadata.

    Attributes
    ----------
    m, n : int
        Arity and per-variable dimension.
    func : callable
        Vectorised map from arrays of shape (..., m, n) to (...).
    homogeneous_degree : float or None
        Degree of homogeneity when known.
    singular_set : str
        Human-readable description of where ``func`` is undefined.
    singular : callable or None
        Boolean mask of singular points; evaluation there raises.
    bound : float or None
        Declared sup bound.
    name : str
    """

    m: int
    n: int
    func: Callable[[np.ndarray], np.ndarray]
    homogeneous_degree: float | None = None
    singular_set: str = ""
    singular: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    bound: float | None = None
    name: str = ""

    @property
    def bounded(self) -> bool:
        return self.bound is not None

    def coerce(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-2:] == (self.m, self.n):
            return xi
        if xi.ndim >= 1 and xi.shape[-1] == self.m * self.n:
            return xi.reshape(xi.shape[:-1] + (self.m, self.n))
        raise GridMismatchError(
            f"{self.name or 'symbol'} expects trailing shape ({self.m}, {self.n}), got {xi.shape}"
        )

    def __call__(self, xi) -> np.ndarray:
        xi = self.coerce(xi)
        if self.singular is not None:
            bad = self.singular(xi)
            if np.any(bad):
                point = xi[np.unravel_index(np.flatnonzero(bad)[0], bad.shape)]
                raise SingularPointError(f"{self.name or 'symbol'} is singular at {point.tolist()}")
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.func(xi)


def constant_symbol(m: int, n: int, value: complex = 1.0) -> Symbol:
    return Symbol(
        m, n,
        lambda xi: np.full(xi.shape[:-2], value),
        homogeneous_degree=0.0,
        bound=abs(value),
        name=f"const({value})",
    )


def calderon_phi(s):
    """Piecewise-linear profile: -1 for s <= -1, 1 + 2s on (-1, 0], 1 for s > 0."""
    s = np.asarray(s, dtype=float)
    return np.where(s <= -1, -1.0, np.where(s <= 0, 1.0 + 2.0 * s, 1.0))


def _calderon_eval(xi):
    a, b = xi[..., 0, 0], xi[..., 1, 0]
    safe_b = np.where(b == 0, 1.0, b)
    val = np.sign(b) * calderon_phi(a / safe_b)
    # continuous extension on {eta = 0, xi != 0}: both one-sided limits equal sgn(xi)
    return np.where(b == 0, np.sign(a), val)


def calderon_symbol() -> Symbol:
    """sgn(eta) * phi(xi / eta) on R x R, the bilinear Calderon commutator symbol."""
    return Symbol(
        2, 1, _calderon_eval,
        homogeneous_degree=0.0,
        singular_set="{(0, 0)}",
        singular=_origin,
        bound=1.0,
        name="calderon",
    )


def tensor_symbol(factors) -> Symbol:
    """Product of one-dimensional symbols, one per coordinate slot.

    Factor l is evaluated on the column (xi_1l, ..., xi_ml).
    """
    factors = list(factors)
    if not factors:
        raise DomainError("tensor_symbol needs at least one factor")
    m = factors[0].m
    for s in factors:
        if s.n != 1:
            raise GridMismatchError("tensor factors must have per-variable dimension 1")
        if s.m != m:
            raise GridMismatchError(f"arity mismatch: {s.m} != {m}")
    n = len(factors)

    def func(xi):
        out = factors[0].func(xi[..., :, 0:1])
        for l, s in enumerate(factors[1:], start=1):
            out = out * s.func(xi[..., :, l:l + 1])
        return out

    def singular(xi):
        bad = np.zeros(xi.shape[:-2], dtype=bool)
        for l, s in enumerate(factors):
            if s.singular is not None:
                bad |= s.singular(xi[..., :, l:l + 1])
        return bad

    degs = [s.homogeneous_degree for s in factors]
    bounds = [s.bound for s in factors]
    return Symbol(
        m, n, func,
        homogeneous_degree=None if None in degs else float(sum(degs)),
        singular_set=" U ".join(f"column {l}: {s.singular_set}" for l, s in enumerate(factors) if s.singular_set),
        singular=singular if any(s.singular is not None for s in factors) else None,
        bound=None if None in bounds else float(np.prod(bounds)),
        name="tensor(" + ", ".join(s.name for s in factors) + ")",
    )


# cone partition -------------------------------------------------------------

def _ratio(num, den):
    # num/den with 0/0 -> 0 and x/0 -> inf
    with np.errstate(divide="ignore", invalid="ignore"):
        r = num / den
    r = np.where(den == 0, np.where(num == 0, 0.0, np.inf), r)
    return r


def _cone_weights(xi, m):
    """Unnormalised cone weights keyed by ("Phi"|"Psi", k, l), 0-based."""
    a = np.linalg.norm(xi, axis=-1)  # (..., m)
    low = lambda t, lo, hi: 1.0 - smooth_step(np.minimum(t, 1e300), lo, hi)  # 1 below lo, 0 above hi
    out = {}
    for k, l in itertools.permutations(range(m), 2):
        others = np.ones(a.shape[:-1])
        for j in range(m):
            if j not in (k, l):
                others = others * low(_ratio(a[..., j], a[..., k]), 1.0, 1.1)
        r = _ratio(a[..., k], a[..., l])
        phi = low(r, 1.0 / (10 * m), 1.0 / (5 * m))
        rising = smooth_step(r, 1.0 / (10 * m), 1.0 / (5 * m))
        psi = rising * low(r, 1.0, 2.0)
        out[("Phi", k, l)] = others * phi
        out[("Psi", k, l)] = others * psi
    return out


def _cone_piece(kind, k, l, m, n):
    def func(xi):
        w = _cone_weights(xi, m)
        total = sum(w.values())
        return w[(kind, k, l)] / total

    return Symbol(
        m, n, func,
        homogeneous_degree=0.0,
        singular_set="{0}",
        singular=_origin,
        bound=1.0,
        name=f"{kind}[{k + 1},{l + 1}]",
    )


def cone_partition(m: int, n: int) -> list[Symbol]:
    """Smooth degree-0 homogeneous cone pieces summing to 1 off the origin.

    For each ordered pair (k, l) of distinct variables the piece
    ``Phi[k,l]`` lives where xi_l dominates and |xi_k| <= |xi_l| / (5m)
    while every other |xi_j| <= 1.1 |xi_k|; ``Psi[k,l]`` lives where in
    addition |xi_l| / (10m) <= |xi_k| <= 2 |xi_l|.  Names use 1-based
    variable indices.  The pieces are bumps in the ratios |xi_j|/|xi_k|,
    |xi_k|/|xi_l| divided by their (strictly positive) total.
    """
    if m < 2:
        raise DomainError(f"cone partition needs arity >= 2, got {m}")
    return [
        _cone_piece(kind, k, l, m, n)
        for k, l in itertools.permutations(range(m), 2)
        for kind in ("Phi", "Psi")
    ]


# Coifman-Meyer catalog -------------------------------------------------------

def _cm_product(xi):
    x, y = xi[..., 0, :], xi[..., 1, :]
    return np.sum(x * y, axis=-1) / (np.sum(x * x, axis=-1) + np.sum(y * y, axis=-1))


def _cm_trilinear(xi):
    a, b, c = xi[..., 0, 0], xi[..., 1, 0], xi[..., 2, 0]
    return (a * b + b * c + a * c) / (a * a + b * b + c * c)


_CM_CATALOG = {
    # id: (m, n, func, bound)
    "cm-product": (2, 1, _cm_product, 0.5),
    "cm-product-2d": (2, 2, _cm_product, 0.5),
    "cm-trilinear": (3, 1, _cm_trilinear, 1.0),
}


def coifman_meyer_example(id: str) -> Symbol:
    """Smooth degree-0 homogeneous baselines, e.g. xi.eta / (|xi|^2 + |eta|^2)."""
    try:
        m, n, func, bound = _CM_CATALOG[id]
    except KeyError:
        raise DomainError(f"unknown Coifman-Meyer example {id!r}; known: {sorted(_CM_CATALOG)}") from None
    return Symbol(m, n, func, homogeneous_degree=0.0, singular_set="{0}", singular=_origin, bound=bound, name=id)


# smooth profile h ------------------------------------------------------------

def _hermite(t, t0, t1, y0, y1, d0, d1):
    w = t1 - t0
    s = (t - t0) / w
    h00 = 2 * s**3 - 3 * s**2 + 1
    h10 = s**3 - 2 * s**2 + s
    h01 = -2 * s**3 + 3 * s**2
    h11 = s**3 - s**2
    return h00 * y0 + h10 * w * d0 + h01 * y1 + h11 * w * d1


def h_profile(t):
    """Nondecreasing C^1 profile: 3 on [4, inf), t on [1/8, 2), 1/16 below 1/32.

    The two transition intervals use cubic Hermite joins matching values
    and slopes; both satisfy the Fritsch-Carlson monotonicity condition.
    """
    t = np.asarray(t, dtype=float)
    out = np.full(t.shape, 1.0 / 16)
    out = np.where((t >= 1 / 32) & (t < 1 / 8), _hermite(t, 1 / 32, 1 / 8, 1 / 16, 1 / 8, 0.0, 1.0), out)
    out = np.where((t >= 1 / 8) & (t < 2), t, out)
    out = np.where((t >= 2) & (t < 4), _hermite(t, 2.0, 4.0, 2.0, 3.0, 1.0, 0.0), out)
    out = np.where(t >= 4, 3.0, out)
    return out if out.ndim else float(out)


# string catalog --------------------------------------------------------------

SYMBOL_IDS = (
    "one", "calderon", "calderon-tensor", "cm-product", "cm-product-2d", "cm-trilinear",
    "cone:<Phi|Psi>:<k>,<l>",
)


def get_symbol(id: str, m: int = 2, n: int = 1) -> Symbol:
    """Look up a symbol by catalog id (used by the command line).

    ``m`` and ``n`` size the ``one`` and ``cone:...`` entries; for
    ``calderon-tensor`` ``n`` is the number of factors.
    """
    if id == "one":
        return constant_symbol(m, n)
    if id == "calderon":
        return calderon_symbol()
    if id == "calderon-tensor":
        return tensor_symbol([calderon_symbol()] * n)
    if id in _CM_CATALOG:
        return coifman_meyer_example(id)
    if id.startswith("cone:"):
        try:
            _, kind, pair = id.split(":")
            k, l = (int(v) for v in pair.split(","))
        except ValueError:
            raise DomainError(f"malformed cone id {id!r}; expected cone:Phi:1,2") from None
        if kind not in ("Phi", "Psi") or k == l or not (1 <= k <= m and 1 <= l <= m):
            raise DomainError(f"invalid cone piece {id!r} for arity {m}")
        return _cone_piece(kind, k - 1, l - 1, m, n)
    raise DomainError(f"unknown symbol id {id!r}; known: {', '.join(SYMBOL_IDS)}")
