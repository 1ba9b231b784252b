"""Independent oracles, closed-form checks, refinement studies and baselines.

This module depends on :mod:`multilab.grid` only, so that its checks do
not share kernels with the code they validate.  Other modules may
register refinement experiments of their own.
"""
from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import special

from .errors import DomainError
from .grid import GridSpec, SampledFunction, SpectralFunction, forward_transform, inverse_transform

__all__ = [
    "RefinementReport",
    "PhiTransformReport",
    "IdentityReport",
    "phi_fractional_transform_check",
    "c_gamma_closed_form",
    "chi_hat",
    "phi_derivative_identity_check",
    "register_experiment",
    "EXPERIMENTS",
    "refinement_study",
    "Baselines",
]


def _window(t):
    # 1 on [0, 1], 0 on [2, inf), C-infinity in between
    t = np.asarray(t, dtype=float)
    g = lambda s: np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)  # noqa: E731
    a, b = g(2.0 - t), g(t - 1.0)
    return a / (a + b)


def _phi(x):
    return np.abs(x + 1.0) - np.abs(x)


# refinement reports -------------------------------------------------------------

@dataclass(frozen=True)
class RefinementReport:
    """Errors along a ladder of resolutions with a fitted convergence order.

    ``kind`` is ``"N"`` (error ~ N^-order) or ``"eps"`` (error ~ eps^order).
    """

    experiment: str
    kind: str
    ladder: tuple
    errors: tuple
    values: tuple = ()

    def __post_init__(self):
        lad = np.asarray(self.ladder, dtype=float)
        if lad.size < 2 or not (np.all(np.diff(lad) > 0) or np.all(np.diff(lad) < 0)):
            raise DomainError(f"ladder must be strictly monotone with at least two rungs, got {self.ladder}")
        if not np.all(np.isfinite(self.errors)):
            raise DomainError("refinement errors must be finite")

    @property
    def order(self) -> float:
        """Least-squares slope of log error against log rung, sign-adjusted."""
        lad = np.log(np.asarray(self.ladder, dtype=float))
        err = np.asarray(self.errors, dtype=float)
        keep = err > 0
        if keep.sum() < 2:
            return math.inf
        slope = np.polyfit(lad[keep], np.log(err[keep]), 1)[0]
        return float(-slope if self.kind == "N" else slope)

    def rows(self):
        vals = self.values or (None,) * len(self.ladder)
        for r, e, v in zip(self.ladder, self.errors, vals):
            yield r, e, v


# the closed-form fractional transform of the Calderon profile ------------------

@dataclass(frozen=True)
class PhiTransformReport:
    gamma: float
    grid: GridSpec
    c_fit: float
    residual: float
    c_closed: float

    @property
    def c_ratio(self) -> float:
        return self.c_fit / self.c_closed


def c_gamma_closed_form(gamma: float) -> float:
    """Value of c_gamma obtained by evaluating the transforms in closed form.

    With Phi' = 2 chi_[-1,0] the product Phi-hat |xi|^gamma is sgn(xi)
    |xi|^(gamma-1) chi-hat / (pi i); the inverse transform of
    sgn(xi)|xi|^(gamma-1) is a homogeneous distribution of degree -gamma
    whose constant follows from the Riesz potential formula with
    beta = 2 - gamma.  Used only as a cross-check on the fitted value.
    """
    beta = 2.0 - gamma
    return float(-(math.pi ** (beta - 0.5)) * special.gamma((1 - beta) / 2) / special.gamma(beta / 2) / (2 * math.pi**2))


def phi_fractional_transform_check(
    gamma: float,
    window: GridSpec,
    width: float | None = None,
    fit_radius: float = 4.0,
    exclude: float = 0.1,
) -> PhiTransformReport:
    """Fit u = (Phi-hat |xi|^gamma)-check against c (|x+1|^(1-gamma) - |x|^(1-gamma)).

    Phi is multiplied by a smooth window equal to 1 on an interval of
    length ``width`` (default 0.6 L) centred at -1/2.  Because Phi is
    piecewise linear with kinks on grid nodes, its sampled transform is
    corrected by the exact attenuation factor sinc^2(xi h) of linear
    interpolation.  The fit uses |x| <= ``fit_radius`` with
    ``exclude``-neighbourhoods of -1 and 0 removed.
    """
    if not 1 < gamma < 2:
        raise DomainError(f"gamma must lie in (1, 2), got {gamma}")
    if window.dim != 1:
        raise DomainError("the transform check is one-dimensional")
    L, h = window.half_length, window.spacing
    if abs(1.0 / h - round(1.0 / h)) > 1e-9:
        raise DomainError(f"1/h must be an integer so the kinks of Phi are grid nodes, got h = {h}")
    width = width or 0.6 * L
    x = window.points
    w = _window(np.abs(x + 0.5) / (width / 2))
    F = forward_transform(SampledFunction(window, _phi(x) * w))
    xi = window.frequencies
    F = F * (np.sinc(xi * h) ** 2 * np.abs(xi) ** gamma)
    u = inverse_transform(F).values.real
    mask = (np.abs(x) <= fit_radius) & (np.abs(x) > exclude) & (np.abs(x + 1) > exclude)
    with np.errstate(divide="ignore"):
        b = np.abs(x + 1) ** (1 - gamma) - np.abs(x) ** (1 - gamma)
    c = float(np.dot(b[mask], u[mask]) / np.dot(b[mask], b[mask]))
    res = float(np.linalg.norm(u[mask] - c * b[mask]) / np.linalg.norm(u[mask]))
    return PhiTransformReport(gamma, window, c, res, c_gamma_closed_form(gamma))


def chi_hat(xi):
    """Transform of the indicator of [-1, 0]: (e^{2 pi i xi} - 1) / (2 pi i xi), 1 at xi = 0.

    Evaluated as e^{i pi xi} sinc(xi), which is stable near 0.
    """
    xi = np.asarray(xi, dtype=float)
    return np.exp(1j * math.pi * xi) * np.sinc(xi)


@dataclass(frozen=True)
class IdentityReport:
    max_error: float
    band: float
    grid: GridSpec


def phi_derivative_identity_check(window: GridSpec | None = None, band: float = 8.0) -> IdentityReport:
    """Check 2 pi i xi (Phi w)-hat - (Phi w')-hat = 2 chi-hat on |xi| <= band.

    This is the transformed product rule for (Phi w)' with Phi' = 2
    chi_[-1,0] and w = 1 near [-1, 0].  The left side is computed from
    samples; the right side is the exact formula.
    """
    window = window or GridSpec(1, 4096, 32.0)
    L, h = window.half_length, window.spacing
    x = window.points
    width = 0.6 * L
    w = SampledFunction(window, _window(np.abs(x + 0.5) / (width / 2)))
    xi = window.frequencies
    W = forward_transform(w)
    dw = inverse_transform(W * (2j * math.pi * xi)).values.real
    lhs = forward_transform(SampledFunction(window, _phi(x) * w.values)) * (np.sinc(xi * h) ** 2 * 2j * math.pi * xi)
    lhs = lhs - forward_transform(SampledFunction(window, _phi(x) * dw))
    sel = np.abs(xi) <= band
    err = float(np.max(np.abs(lhs.coeffs[sel] - 2 * chi_hat(xi[sel]))))
    return IdentityReport(err, band, window)


# refinement experiments -----------------------------------------------------------

@dataclass(frozen=True)
class Experiment:
    """A map rung -> (error, value) plus the meaning of the rungs."""

    run: Callable[[float], tuple[float, float]]
    kind: str = "N"
    default_ladder: tuple = ()
    description: str = ""
    min_order: float = 0.0


EXPERIMENTS: dict[str, Experiment] = {}


def register_experiment(name: str, run, kind: str = "N", default_ladder=(), description: str = "", min_order: float = 0.0):
    """Add ``run`` (rung -> (error, value)) to the registry under ``name``."""
    EXPERIMENTS[name] = Experiment(run, kind, tuple(default_ladder), description, float(min_order))


def _fft_gaussian(N):
    spec = GridSpec(1, int(N), 4.0)
    x = spec.points
    F = forward_transform(SampledFunction(spec, np.exp(-math.pi * (x - 0.1) ** 2) * np.cos(4 * x)))
    xi = spec.frequencies
    g = lambda t: np.exp(-math.pi * t**2 - 0.2j * math.pi * t)  # transform of the shifted Gaussian
    exact = 0.5 * (g(xi - 2 / math.pi) + g(xi + 2 / math.pi))
    return float(np.max(np.abs(F.coeffs - exact))), float(abs(F.coeffs[spec.n // 2]))


def _phi_transform(N):
    rep = phi_fractional_transform_check(1.5, GridSpec(1, int(N), 64.0))
    return rep.residual, rep.c_fit


register_experiment(
    "fft-gaussian", _fft_gaussian, "N", (16, 20, 24, 28, 32),
    "transform of a modulated Gaussian against its exact transform",
    min_order=4.0,
)
register_experiment(
    "phi-transform", _phi_transform, "N", (1024, 2048, 4096),
    "fitted constant and residual of the fractional transform of Phi (gamma = 1.5)",
    min_order=1.0,
)

def refinement_study(experiment: str, ladder=None) -> RefinementReport:
    """Run ``experiment`` on every rung and fit a convergence order.

    Experiments that return a zero error measure their value against the
    finest rung instead (the last rung then has error 0 and is ignored by
    the fit).
    """
    try:
        exp = EXPERIMENTS[experiment]
    except KeyError:
        raise DomainError(f"unknown experiment {experiment!r}; known: {sorted(EXPERIMENTS)}") from None
    ladder = tuple(ladder or exp.default_ladder)
    out = [exp.run(r) for r in ladder]
    errors = [e for e, _ in out]
    values = tuple(v for _, v in out)
    if all(e == 0 for e in errors):
        ref = values[-1]
        errors = [abs(v - ref) for v in values]
    return RefinementReport(experiment, exp.kind, ladder, tuple(float(e) for e in errors), values)


# baselines ---------------------------------------------------------------------

BASELINE_VERSION = 1


def _default_path() -> Path:
    env = os.environ.get("MULTILAB_BASELINES")
    if env:
        return Path(env)
    return Path(str(resources.files("multilab") / "data" / "baselines.json"))


@dataclass
class Baselines:
    """Versioned JSON store of recorded constants keyed by experiment and parameters.

    ``check`` records a value the first time a key is seen and compares
    against the stored value afterwards.
    """

    path: Path = field(default_factory=_default_path)
    data: dict = field(default_factory=dict, init=False)

    def __post_init__(self):
        self.path = Path(self.path)
        if self.path.exists():
            raw = json.loads(self.path.read_text())
            if raw.get("version") != BASELINE_VERSION:
                raise DomainError(f"baseline file {self.path} has version {raw.get('version')}, expected {BASELINE_VERSION}")
            self.data = dict(raw.get("values", {}))

    @staticmethod
    def key(experiment: str, **params) -> str:
        return experiment + "".join(f";{k}={params[k]}" for k in sorted(params))

    def get(self, key: str):
        return self.data.get(key)

    def record(self, key: str, value) -> None:
        self.data[key] = value
        self.save()

    def save(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        body = {"version": BASELINE_VERSION, "values": dict(sorted(self.data.items()))}
        self.path.write_text(json.dumps(body, indent=2, sort_keys=True) + "\n")

    def check(self, key: str, value, rel_tol: float = 0.02) -> tuple[bool, object]:
        """Return (ok, stored).  Records ``value`` when ``key`` is new."""
        stored = self.get(key)
        if stored is None:
            self.record(key, value)
            return True, value
        ok = np.allclose(np.asarray(value, dtype=float), np.asarray(stored, dtype=float), rtol=rel_tol, atol=0.0)
        return bool(ok), stored
