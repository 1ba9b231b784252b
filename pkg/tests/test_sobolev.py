import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from multilab.errors import DomainError, EvaluationError, GridMismatchError
from multilab.grid import GridSpec, SampledFunction, forward_transform, norm_lp, sample
from multilab.littlewood_paley import build_dyadic_partition, delta_coord, delta_full
from multilab.sobolev import (
    Family,
    SmoothnessSpec,
    fractional_op,
    hormander_constant,
    localized_norm,
    multiparameter_constant,
    stein_I_alpha,
)
from multilab.symbols import Symbol, calderon_symbol, coifman_meyer_example, constant_symbol, tensor_symbol

P1 = build_dyadic_partition(1)
P2 = build_dyadic_partition(2)
G2 = GridSpec(2, 64, 4.0)


def hat(x):
    return np.maximum(0.0, 1.0 - np.abs(x))


# SmoothnessSpec -----------------------------------------------------------------

def test_spec_shapes():
    assert SmoothnessSpec("coordinatewise", 2, 3, 1.0).gamma.shape == (2, 3)
    assert SmoothnessSpec(Family.PER_VARIABLE, 2, 3, [1.0, 2.0]).gamma.shape == (2,)
    assert SmoothnessSpec(Family.FULL, 2, 3, 1.5).gamma.shape == ()
    with pytest.raises(GridMismatchError):
        SmoothnessSpec(Family.PER_VARIABLE, 2, 1, [1.0, 2.0, 3.0])


@pytest.mark.parametrize("r", [0.5, 2.5])
def test_spec_rejects_r(r):
    with pytest.raises(DomainError):
        SmoothnessSpec(Family.FULL, 1, 1, 1.0, r=r)


def test_spec_positivity_enforced_by_norms():
    spec = SmoothnessSpec(Family.FULL, 2, 1, -1.0)
    with pytest.raises(DomainError):
        localized_norm(constant_symbol(2, 1), 0, P2, spec, G2)


# fractional operators ------------------------------------------------------------

@pytest.mark.parametrize("k", [(3, 0), (-5, 7), (0, 0)])
@pytest.mark.parametrize("gamma", [0.5, 2.0, -1.0])
def test_plane_wave_eigenfunction(k, gamma):
    G = GridSpec(2, 32, 4.0)
    X, Y = G.mesh()
    f = SampledFunction(G, np.exp(2j * math.pi * (k[0] * X + k[1] * Y) / (2 * G.half_length)))
    eta2 = (k[0] ** 2 + k[1] ** 2) / (2 * G.half_length) ** 2
    out = fractional_op(f, SmoothnessSpec(Family.FULL, 2, 1, gamma))
    assert np.allclose(out.values, (1 + 4 * math.pi**2 * eta2) ** (gamma / 2) * f.values, atol=1e-12)


@pytest.mark.parametrize("family", list(Family))
def test_zero_exponent_is_identity(family, rng):
    G = GridSpec(2, 32, 4.0)
    f = SampledFunction(G, rng.standard_normal(G.shape))
    out = fractional_op(f, SmoothnessSpec(family, 2, 1, 0.0))
    assert np.max(np.abs(out.values - f.values)) <= 1e-13


def test_gaussian_second_order_oracle():
    G = GridSpec(1, 256, 8.0)
    x = G.points
    f = sample(lambda t: np.exp(-math.pi * t**2), G)
    out = fractional_op(f, SmoothnessSpec(Family.FULL, 1, 1, 2.0))
    exact = np.exp(-math.pi * x**2) * (1 + 2 * math.pi - 4 * math.pi**2 * x**2)
    assert np.max(np.abs(out.values - exact)) <= 1e-8


def test_coordinatewise_gaussian_oracle():
    G = GridSpec(2, 128, 6.0)
    X, Y = G.mesh()
    f = sample(lambda x, y: np.exp(-math.pi * (x**2 + y**2)), G)
    out = fractional_op(f, SmoothnessSpec(Family.COORDINATEWISE, 1, 2, 2.0))
    g = lambda t: 1 + 2 * math.pi - 4 * math.pi**2 * t**2  # noqa: E731
    assert np.max(np.abs(out.values - f.values * g(X) * g(Y))) <= 1e-8


@given(
    st.sampled_from(list(Family)),
    st.lists(st.floats(-2.0, 2.0), min_size=2, max_size=2),
)
def test_round_trip(family, gammas):
    G = GridSpec(2, 32, 4.0)
    f = sample(lambda x, y: np.exp(-math.pi * ((x - 0.2) ** 2 + y**2)), G)
    gamma = {Family.COORDINATEWISE: [gammas], Family.PER_VARIABLE: gammas, Family.FULL: gammas[0]}[family]
    n = 2 if family is Family.COORDINATEWISE else 1
    m = 1 if family is Family.COORDINATEWISE else 2
    spec = SmoothnessSpec(family, m, n, gamma)
    back = fractional_op(fractional_op(f, spec), spec.negated())
    assert np.max(np.abs(back.values - f.values)) <= 1e-10


def test_spectral_input_returns_spectral():
    G = GridSpec(1, 32, 4.0)
    F = forward_transform(sample(lambda x: np.exp(-math.pi * x**2), G))
    out = fractional_op(F, SmoothnessSpec(Family.FULL, 1, 1, 1.0))
    assert type(out) is type(F)
    with pytest.raises(GridMismatchError):
        fractional_op(np.ones(4), SmoothnessSpec(Family.FULL, 1, 1, 1.0))


def test_dimension_mismatch():
    f = SampledFunction(GridSpec(1, 16, 2.0), np.ones(16))
    with pytest.raises(GridMismatchError):
        fractional_op(f, SmoothnessSpec(Family.FULL, 2, 1, 1.0))


@pytest.mark.parametrize("family", list(Family))
def test_commutes_with_projections(family, rng):
    G = GridSpec(2, 64, 8.0)
    f = SampledFunction(G, rng.standard_normal(G.shape))
    spec = SmoothnessSpec(family, 2, 1, 1.3)
    for proj in (lambda g: delta_coord(g, 0, 1, P1), lambda g: delta_full(g, 1, P2)):
        a = fractional_op(proj(f), spec).values
        b = proj(fractional_op(f, spec)).values
        assert np.max(np.abs(a - b)) <= 1e-12 * max(1.0, np.max(np.abs(a)))


# localized norms --------------------------------------------------------------

SPEC = SmoothnessSpec(Family.COORDINATEWISE, 2, 1, 1.0, r=2.0)


def test_constant_symbol_independent_of_j():
    vals = [localized_norm(constant_symbol(2, 1), j, P2, SPEC, G2) for j in (-3, 0, 5)]
    assert max(vals) - min(vals) == 0


@pytest.mark.parametrize("sigma", [calderon_symbol(), coifman_meyer_example("cm-product")], ids=lambda s: s.name)
@pytest.mark.parametrize("r", [1.0, 1.5, 2.0])
def test_homogeneous_profile_flat(sigma, r):
    spec = SmoothnessSpec(Family.COORDINATEWISE, 2, 1, 1.0, r=r)
    rep = hormander_constant(sigma, P2, spec, G2, jrange=(-4, 4))
    assert rep.spread <= 0.02
    assert set(rep.profile) == set(range(-4, 5))
    assert rep.value == max(rep.profile.values())


def test_hormander_constant_of_one():
    spec = SmoothnessSpec(Family.FULL, 2, 1, 1.5, r=1.5)
    rep = hormander_constant(constant_symbol(2, 1), P2, spec, G2, jrange=(-2, 2))
    assert rep.value == pytest.approx(localized_norm(constant_symbol(2, 1), 0, P2, spec, G2), rel=1e-14)


def test_polynomial_symbol_refined_grid_oracle():
    poly = Symbol(2, 1, lambda xi: xi[..., 0, 0] ** 2 - xi[..., 0, 0] * xi[..., 1, 0] + 0.5, name="poly")
    spec = SmoothnessSpec(Family.PER_VARIABLE, 2, 1, [1.0, 0.5], r=1.5)
    coarse = localized_norm(poly, 0, P2, spec, GridSpec(2, 64, 4.0))
    fine = localized_norm(poly, 0, P2, spec, GridSpec(2, 256, 8.0))
    assert coarse == pytest.approx(fine, rel=0.01)


def test_singular_sample_raises():
    bad = Symbol(2, 1, lambda xi: 1.0 / (xi[..., 0, 0] - 0.0625), name="pole")
    with pytest.raises(EvaluationError):
        localized_norm(bad, 0, P2, SPEC, GridSpec(2, 64, 4.0))


def test_symbol_spec_mismatch():
    with pytest.raises(GridMismatchError):
        localized_norm(coifman_meyer_example("cm-trilinear"), 0, P2, SPEC, G2)


@pytest.mark.parametrize(
    "sigma", [calderon_symbol(), coifman_meyer_example("cm-product"), constant_symbol(2, 1)], ids=lambda s: s.name
)
def test_embedding_coordinatewise_below_per_variable(sigma):
    # with gamma_il = gamma_i / n the coordinatewise multiplier is pointwise smaller, so C = 1 at r = 2
    G = GridSpec(4, 16, 4.0)
    P4 = build_dyadic_partition(4)
    s = coifman_meyer_example("cm-product-2d") if sigma.name == "cm-product" else tensor_symbol([sigma, sigma])
    gam = np.array([1.2, 0.8])
    coord = SmoothnessSpec(Family.COORDINATEWISE, 2, 2, np.stack([gam / 2, gam / 2], axis=1))
    per = SmoothnessSpec(Family.PER_VARIABLE, 2, 2, gam)
    assert localized_norm(s, 0, P4, coord, G) <= localized_norm(s, 0, P4, per, G) * (1 + 1e-12)


# multiparameter constant ---------------------------------------------------------

G4 = GridSpec(4, 16, 4.0)
MSPEC = SmoothnessSpec(Family.COORDINATEWISE, 2, 2, 1.0)


def test_multiparameter_constant_symbol_flat():
    rep = multiparameter_constant(constant_symbol(2, 2), [P2, P2], MSPEC, G4, krange=(-1, 1))
    assert len(rep.profile) == 9
    assert rep.spread == 0


def test_multiparameter_tensor_flat():
    sigma = tensor_symbol([calderon_symbol(), calderon_symbol()])
    rep = multiparameter_constant(sigma, [P2, P2], MSPEC, G4, krange=[(-2, 2), (-1, 1)])
    assert rep.spread <= 0.02


def test_multiparameter_single_column_separates():
    # integrand and operator factor over the two columns, so the norm is a product
    s1 = calderon_symbol()
    sigma = Symbol(2, 2, lambda xi: s1.func(xi[..., :, 0:1]), name="column-1")
    spec = SmoothnessSpec(Family.COORDINATEWISE, 2, 2, [[1.0, 0.6], [0.8, 0.4]], r=1.5)
    rep = multiparameter_constant(sigma, [P2, P2], spec, G4, krange=(-1, 1))
    G = GridSpec(2, 16, 4.0)
    first = SmoothnessSpec(Family.COORDINATEWISE, 2, 1, [[1.0], [0.8]], r=1.5)
    second = SmoothnessSpec(Family.COORDINATEWISE, 2, 1, [[0.6], [0.4]], r=1.5)
    rest = localized_norm(constant_symbol(2, 1), 0, P2, second, G)
    for (k1, _), v in rep.profile.items():
        assert v == pytest.approx(localized_norm(s1, k1, P2, first, G) * rest, rel=1e-10)


def test_multiparameter_errors():
    with pytest.raises(DomainError):
        multiparameter_constant(constant_symbol(2, 2), [P2, P2], SmoothnessSpec(Family.FULL, 2, 2, 1.0), G4)
    with pytest.raises(GridMismatchError):
        multiparameter_constant(constant_symbol(2, 2), [P2], MSPEC, G4)
    with pytest.raises(GridMismatchError):
        multiparameter_constant(constant_symbol(2, 2), [P1, P1], MSPEC, G4)


def test_report_csv(tmp_path):
    rep = multiparameter_constant(constant_symbol(2, 2), [P2, P2], MSPEC, G4, krange=(0, 1))
    rep.to_csv(tmp_path / "k.csv")
    lines = (tmp_path / "k.csv").read_text().splitlines()
    assert lines[0] == "k1,k2,norm" and len(lines) == 5


def test_parallel_matches_serial():
    a = hormander_constant(calderon_symbol(), P2, SPEC, G2, jrange=(-2, 2))
    b = hormander_constant(calderon_symbol(), P2, SPEC, G2, jrange=(-2, 2), jobs=3)
    assert a.profile == b.profile


# Stein I_alpha --------------------------------------------------------------------

def _hat_oracle(x, alpha):
    g = lambda y: 0.0 if y == x else (hat(x) - hat(y)) ** 2 / abs(x - y) ** (1 + 2 * alpha)  # noqa: E731
    edges = [-np.inf] + sorted({-1.0, 0.0, 1.0, x}) + [np.inf]
    return math.sqrt(sum(integrate.quad(g, lo, hi, limit=200, epsabs=1e-12)[0] for lo, hi in zip(edges, edges[1:])))


@pytest.mark.parametrize("x", [0.5, -0.25, 2.0])
def test_stein_hat_against_quadrature(x):
    G = GridSpec(1, 256, 4.0)
    out = stein_I_alpha(sample(hat, G), 0.5)
    i = int(round((x + G.half_length) / G.spacing))
    assert out.values[i].real == pytest.approx(_hat_oracle(x, 0.5), rel=0.01)


@pytest.mark.parametrize("d", [1, 2])
def test_stein_constant_is_zero_without_tail(d):
    G = GridSpec(d, 16, 2.0)
    f = SampledFunction(G, 3.0 * np.ones(G.shape))
    assert np.all(stein_I_alpha(f, 0.4, tail=False).values == 0)


@pytest.mark.parametrize("alpha", [0.2, 0.7])
def test_stein_plane_wave_constant_modulus(alpha):
    G = GridSpec(2, 32, 4.0)
    X, Y = G.mesh()
    f = SampledFunction(G, np.exp(2j * math.pi * (3 * X - 2 * Y) / 8.0))
    out = stein_I_alpha(f, alpha).values
    assert np.ptp(out.real) <= 1e-10 * out.real.max()


@pytest.mark.parametrize("d,N", [(1, 128), (2, 24)])
def test_stein_direct_matches_fft(d, N):
    G = GridSpec(d, N, 3.0)
    f = sample(lambda *xs: math.prod(hat(x) for x in xs), G)
    a = stein_I_alpha(f, 0.3).values
    b = stein_I_alpha(f, 0.3, method="fft").values
    c = stein_I_alpha(f, 0.3, chunk=7).values
    assert np.max(np.abs(a - b)) <= 1e-10
    assert np.array_equal(a, c)


@pytest.mark.parametrize("width", [0.25, 1.0])
def test_stein_monotone_in_alpha(width):
    G = GridSpec(1, 256, 4.0)
    f = sample(lambda x: hat(x / width), G)
    vals = [norm_lp(stein_I_alpha(f, a), 2) + norm_lp(f, 2) for a in np.linspace(0.5, 0.95, 6)]
    assert all(np.isfinite(vals))
    assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("alpha", [0.0, 1.0, -0.5])
def test_stein_alpha_range(alpha):
    with pytest.raises(DomainError):
        stein_I_alpha(SampledFunction(GridSpec(1, 8, 1.0), np.zeros(8)), alpha)


def test_stein_bad_method():
    with pytest.raises(DomainError):
        stein_I_alpha(SampledFunction(GridSpec(1, 8, 1.0), np.zeros(8)), 0.5, method="nope")
