"""Multilinear Fourier multiplier operators on periodic grids.

``apply`` evaluates

    T(f_1, ..., f_m)(x) = sum_{k_1..k_m} prod_i F_i(k_i) sigma(k / 2L) e^{2 pi i x . (k_1 + ... + k_m) / 2L} dxi^{mn}

by accumulating every product term into the output frequency
s = k_1 + ... + k_m on a grid ``q`` times finer than the input grid, so
frequency sums never wrap, followed by a single inverse transform.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import AliasingError, BudgetError, DomainError, EvaluationError, GridMismatchError, SingularPointError
from .grid import GridSpec, SampledFunction, SpectralFunction, forward_transform, inverse_transform, norm_lp
from .symbols import Symbol

__all__ = ["MultilinearPlan", "apply", "NormReport", "estimate_operator_norm", "random_band_limited"]

MAX_TUPLES = 2**28
_CACHE_LIMIT = 2**22
_CHUNK = 2**20


@dataclass
class MultilinearPlan:
    """Everything needed to apply T_sigma on one grid.

    Parameters
    ----------
    symbol : Symbol
    grid : GridSpec
        Input grid; its dimension must equal ``symbol.n``.
    K : int, optional
        Frequency truncation radius in input-grid indices; defaults to the
        full band N/2.
    q : int, optional
        Dealiasing factor of the output spectrum, at least m + 1.
    pad : int
        Inputs are zero-padded into a box ``pad`` times larger before
        transforming.  This suppresses wrap-around of slowly decaying
        outputs (the result is cropped back to ``grid``).
    singular_fill : complex, optional
        Value used where the symbol hits its singular set.  ``None`` makes
        such a hit an error.
    cache : bool
        Keep the symbol table between calls when it is small enough.
    """

    symbol: Symbol
    grid: GridSpec
    K: int | None = None
    q: int | None = None
    pad: int = 1
    singular_fill: complex | None = None
    cache: bool = True
    _table: np.ndarray | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        m, n = self.symbol.m, self.symbol.n
        if self.grid.dim != n:
            raise GridMismatchError(f"symbol has per-variable dimension {n}, grid has dimension {self.grid.dim}")
        if m * n > 4:
            raise BudgetError(f"m*n = {m * n} exceeds the exhaustive-accumulation budget (m*n <= 4)")
        if self.K is None:
            self.K = self.grid.n // 2
        if not 1 <= self.K <= self.grid.n // 2:
            raise DomainError(f"K must lie in [1, N/2 = {self.grid.n // 2}], got {self.K}")
        if self.q is None:
            self.q = m + 1
        if int(self.pad) != self.pad or self.pad < 1:
            raise DomainError(f"pad must be a positive integer, got {self.pad}")
        if self.q < m + 1 or m * self.Kp > self.q * self.padded.n // 2 - 1:
            raise AliasingError(f"q = {self.q} cannot hold sums of {m} frequencies up to index {self.Kp}")
        if self.n_tuples > MAX_TUPLES:
            raise BudgetError(f"{self.n_tuples} frequency tuples exceed the budget of {MAX_TUPLES}; lower K or pad")

    @property
    def m(self) -> int:
        return self.symbol.m

    @property
    def padded(self) -> GridSpec:
        return self.grid.scaled(self.pad)

    @property
    def Kp(self) -> int:
        """Truncation radius in padded-grid indices (same physical band)."""
        return min(self.K * self.pad, self.padded.n // 2)

    @property
    def fine(self) -> GridSpec:
        return GridSpec(self.grid.dim, self.q * self.padded.n, self.padded.half_length)

    @property
    def index_range(self) -> np.ndarray:
        """Retained 1D indices (centered) of the padded spectrum."""
        return np.arange(-self.Kp, min(self.Kp, self.padded.n // 2 - 1) + 1)

    @property
    def n_tuples(self) -> int:
        return len(self.index_range) ** (self.m * self.grid.dim)


def _variable_indices(plan: MultilinearPlan) -> np.ndarray:
    """All retained index vectors of one variable, shape (M, n)."""
    r = plan.index_range
    mesh = np.meshgrid(*([r] * plan.grid.dim), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=-1)


def _eval_symbol(plan: MultilinearPlan, kt: np.ndarray) -> np.ndarray:
    """Symbol at index tuples ``kt`` of shape (T, m, n)."""
    sigma = plan.symbol
    xi = kt * plan.padded.frequency_spacing
    vals = np.empty(kt.shape[0], dtype=complex)
    bad = sigma.singular(xi) if sigma.singular is not None else np.zeros(kt.shape[0], dtype=bool)
    if bad.any() and plan.singular_fill is None:
        i = int(np.flatnonzero(bad)[0])
        raise SingularPointError(f"{sigma.name} singular at index tuple {kt[i].tolist()}; set singular_fill")
    with np.errstate(divide="ignore", invalid="ignore"):
        vals[~bad] = sigma.func(xi[~bad])
    vals[bad] = plan.singular_fill if plan.singular_fill is not None else 0.0
    if not np.all(np.isfinite(vals)):
        i = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise EvaluationError(f"{sigma.name} not finite at index tuple {kt[i].tolist()}")
    return vals


def _tuples(idx: np.ndarray, m: int, start: int, stop: int) -> np.ndarray:
    """Index tuples number start..stop-1 of the m-fold product, shape (T, m, n)."""
    M = idx.shape[0]
    flat = np.arange(start, stop)
    digits = np.unravel_index(flat, (M,) * m)
    return np.stack([idx[d] for d in digits], axis=1)


def _symbol_table(plan: MultilinearPlan, idx: np.ndarray) -> np.ndarray | None:
    total = idx.shape[0] ** plan.m
    if plan._table is not None:
        return plan._table
    if not plan.cache or total > _CACHE_LIMIT:
        return None
    plan._table = _eval_symbol(plan, _tuples(idx, plan.m, 0, total))
    return plan._table


def _pad(f: SampledFunction, plan: MultilinearPlan) -> SampledFunction:
    if plan.pad == 1:
        return f
    P, N = plan.padded, plan.grid.n
    off = (P.n - N) // 2
    vals = np.zeros(P.shape, dtype=complex)
    vals[(slice(off, off + N),) * P.dim] = f.values
    return SampledFunction(P, vals)


def _crop(g: SampledFunction, plan: MultilinearPlan) -> SampledFunction:
    if plan.pad == 1:
        return g
    N = plan.grid.n
    off = (plan.padded.n - N) // 2
    return SampledFunction(plan.grid, g.values[(slice(off, off + N),) * plan.grid.dim])


def apply(plan: MultilinearPlan, fs, jobs: int = 1) -> SampledFunction:
    """Evaluate T_sigma(f_1, ..., f_m) on the plan's grid.

    Chunks of the tuple space may run on ``jobs`` threads; their partial
    spectra are summed in chunk order, so the result does not depend on
    scheduling.
    """
    fs = list(fs)
    if len(fs) != plan.m:
        raise GridMismatchError(f"symbol has arity {plan.m}, got {len(fs)} functions")
    for f in fs:
        if not isinstance(f, SampledFunction) or f.spec != plan.grid:
            raise GridMismatchError("every input must be a SampledFunction on the plan's grid")
    P = plan.padded
    n, m = P.dim, plan.m
    idx = _variable_indices(plan)
    M = idx.shape[0]
    # coefficient of each retained index vector, per variable
    centre = P.n // 2
    coeffs = [forward_transform(_pad(f, plan)).coeffs[tuple((idx + centre).T)] for f in fs]
    table = _symbol_table(plan, idx)
    fine = plan.fine
    half = fine.n // 2
    total = M**m

    def chunk(bounds):
        start, stop = bounds
        digits = np.unravel_index(np.arange(start, stop), (M,) * m)
        prod = np.ones(stop - start, dtype=complex)
        for i, d in enumerate(digits):
            prod = prod * coeffs[i][d]
        if table is not None:
            prod = prod * table[start:stop]
        else:
            prod = prod * _eval_symbol(plan, np.stack([idx[d] for d in digits], axis=1))
        s = sum(idx[d] for d in digits) + half
        flat = np.ravel_multi_index(tuple(s.T), fine.shape)
        re = np.bincount(flat, weights=prod.real, minlength=fine.size)
        im = np.bincount(flat, weights=prod.imag, minlength=fine.size)
        return re + 1j * im

    bounds = [(a, min(a + _CHUNK, total)) for a in range(0, total, _CHUNK)]
    if jobs > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(chunk, bounds))
    else:
        parts = [chunk(b) for b in bounds]
    acc = parts[0]
    for p in parts[1:]:
        acc = acc + p
    acc = acc.reshape(fine.shape) * P.frequency_spacing ** ((m - 1) * n)
    vals = inverse_transform(SpectralFunction(fine, acc)).values
    sub = vals[(slice(None, None, plan.q),) * n]
    return _crop(SampledFunction(P, sub), plan)


# operator norm sampling -------------------------------------------------------

def random_band_limited(
    spec: GridSpec,
    rng: np.random.Generator,
    band: int,
    width: float | None = None,
    avoid_axes: bool = False,
) -> SampledFunction:
    """Random trigonometric polynomial with a Gaussian spectral envelope.

    Coefficients are complex normals at integer frequencies |k_l| <= band
    weighted by exp(-(|k| / width)^2); ``width`` defaults to band / 2.
    With ``avoid_axes`` every frequency with a zero component is dropped.
    """
    width = width or band / 2
    if not 1 <= band <= spec.n // 2 - 1:
        raise DomainError(f"band must lie in [1, N/2 - 1], got {band}")
    # draw only the retained coefficients so one seed gives one function for every N
    k = np.arange(-band, band + 1)
    shape = (k.size,) * spec.dim
    z = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    kk = np.meshgrid(*([k] * spec.dim), indexing="ij")
    env = np.exp(-sum(g**2 for g in kk) / width**2)
    if avoid_axes:
        for g in kk:
            env = env * (g != 0)
    coeffs = np.zeros(spec.shape, dtype=complex)
    c = spec.n // 2
    coeffs[(slice(c - band, c + band + 1),) * spec.dim] = z * env
    return inverse_transform(SpectralFunction(spec, coeffs))


@dataclass(frozen=True)
class NormReport:
    """Empirical ratios ||T(f)||_p / prod ||f_i||_{p_i} over seeded trials."""

    p_list: tuple
    p: float
    ratios: np.ndarray
    seeds: tuple

    @property
    def max_ratio(self) -> float:
        return float(np.max(self.ratios))

    def to_csv(self, path) -> None:
        with Path(path).open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["trial", "ratio", "seed"])
            for t, (r, s) in enumerate(zip(self.ratios, self.seeds)):
                w.writerow([t, repr(float(r)), s])


def estimate_operator_norm(
    plan: MultilinearPlan,
    p_list,
    trials: int = 100,
    seed: int = 0,
    band: int | None = None,
    avoid_axes: bool = False,
    jobs: int = 1,
) -> NormReport:
    """Lower-bound sampler for the L^{p_1} x ... x L^{p_m} -> L^p norm.

    The target exponent is fixed by 1/p = sum 1/p_i.  Trial t draws its
    inputs from the t-th child of ``SeedSequence(seed)``.
    """
    p_list = tuple(float(p) for p in p_list)
    if len(p_list) != plan.m:
        raise GridMismatchError(f"need {plan.m} exponents, got {len(p_list)}")
    if not all(1 < p < math.inf for p in p_list):
        raise DomainError(f"exponents must lie in (1, inf), got {p_list}")
    if trials < 1:
        raise DomainError("trials must be at least 1")
    p = 1.0 / sum(1.0 / pi for pi in p_list)
    band = band or min(plan.K, plan.grid.n // 8)
    children = np.random.SeedSequence(seed).spawn(trials)
    ratios = np.empty(trials)
    for t, child in enumerate(children):
        rng = np.random.default_rng(child)
        fs = [random_band_limited(plan.grid, rng, band, avoid_axes=avoid_axes) for _ in range(plan.m)]
        out = apply(plan, fs, jobs=jobs)
        denom = math.prod(norm_lp(f, pi) for f, pi in zip(fs, p_list))
        ratios[t] = norm_lp(out, p) / denom
    seeds = tuple(f"{seed}/{t}" for t in range(trials))
    return NormReport(p_list, p, ratios, seeds)
