import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from multilab.errors import DomainError, GridMismatchError
from multilab.grid import GridSpec, SampledFunction, forward_transform, inverse_transform, norm_lp
from multilab.littlewood_paley import (
    build_dyadic_partition,
    delta_coord,
    delta_full,
    resolvable_range,
    smooth_cutoff,
    smooth_step,
    square_function,
)
from multilab.multiplier_op import random_band_limited

P1 = build_dyadic_partition(1)
P2 = build_dyadic_partition(2)


def plane_wave(spec, ks, amp=1.0):
    xs = spec.mesh()
    phase = sum(k / (2 * spec.half_length) * x for k, x in zip(ks, xs))
    return SampledFunction(spec, amp * np.exp(2j * math.pi * phase) * np.ones(spec.shape))


# profile ----------------------------------------------------------------------

def test_smooth_step_limits():
    t = np.array([-1.0, 0.0, 0.5, 1.0, 2.0])
    s = smooth_step(t)
    assert s[0] == 0 and s[1] == 0 and s[3] == 1 and s[4] == 1
    assert s[2] == pytest.approx(0.5)


def test_cutoff_plateau_and_support():
    t = np.linspace(0, 3, 301)
    c = smooth_cutoff(t)
    assert np.all(c[t <= 1] == 1)
    assert np.all(c[t >= 2] == 0)
    assert np.all(np.diff(c) <= 0)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_partition_identity(d):
    P = build_dyadic_partition(d)
    r = np.geomspace(2.0**-10, 2.0**10, 4001)
    total = sum(P.radial(2.0**-j * r) for j in range(-14, 15))
    assert np.max(np.abs(total - 1)) <= 1e-8


def test_partition_examples():
    assert P1.radial(0.25) == 0
    total = sum(P1.radial(2.0**-j) for j in range(-12, 13))
    assert abs(total - 1) <= 1e-10
    assert P1.radial(1.0) + P1.radial(0.5) == pytest.approx(1.0, abs=1e-15)


def test_support_in_annulus():
    r = np.concatenate([np.linspace(0, 0.5, 200), np.linspace(2, 10, 200)])
    assert np.max(np.abs(P1.radial(r))) <= 1e-12


@given(st.floats(2.0**-10, 2.0**10))
def test_at_most_two_scales(r):
    vals = [P1.radial(2.0**-j * r) for j in range(-14, 15)]
    assert sum(v != 0 for v in vals) <= 2


def test_vector_evaluation_uses_norm():
    xi = np.array([[0.6, 0.8], [3.0, 4.0]])
    assert np.allclose(P2(xi), P2.radial(np.array([1.0, 5.0])))
    with pytest.raises(GridMismatchError):
        P2(np.ones((4, 3)))


@pytest.mark.parametrize("d", [0, -1, 1.5])
def test_build_rejects_bad_dimension(d):
    with pytest.raises(DomainError):
        build_dyadic_partition(d)


def test_resolvable_range_brackets_grid_spectrum():
    spec = GridSpec(2, 64, 8.0)
    lo, hi = resolvable_range(spec)
    fmin, fmax = 1 / (2 * spec.half_length), spec.n / (4 * spec.half_length)
    assert 2.0**lo * 2 <= fmin and 2.0**hi / 2 >= fmax


# projections --------------------------------------------------------------------

@pytest.mark.parametrize("j", [-2, 0, 1, 2])
def test_delta_full_plane_wave_unchanged(j):
    spec = GridSpec(1, 256, 8.0)
    k = int(2.0**j * 2 * spec.half_length)
    f = plane_wave(spec, (k,))
    assert np.allclose(delta_full(f, j, P1).values, f.values, atol=1e-12)


def test_delta_full_kills_outside_band():
    spec = GridSpec(2, 64, 8.0)
    f = plane_wave(spec, (3, 0))  # |xi| = 3/16
    assert np.max(np.abs(delta_full(f, 2, P2).values)) <= 1e-14


def test_delta_full_sum_reconstructs():
    spec = GridSpec(2, 64, 8.0)
    f = random_band_limited(spec, np.random.default_rng(1), band=6)
    F = forward_transform(f)
    F = F * (spec.frequency_norm() > 0)
    g = inverse_transform(F)
    lo, hi = resolvable_range(spec, full=True)
    total = sum(delta_full(g, j, P2).values for j in range(lo, hi + 1))
    assert np.max(np.abs(total - g.values)) <= 1e-10


def test_delta_full_dimension_mismatch():
    f = plane_wave(GridSpec(2, 16, 4.0), (1, 1))
    with pytest.raises(GridMismatchError):
        delta_full(f, 0, P1)


@pytest.mark.parametrize("axis", [0, 1])
def test_delta_coord_plane_wave(axis):
    spec = GridSpec(2, 64, 8.0)
    ks = [3, 3]
    ks[axis] = 16  # axis frequency 1
    f = plane_wave(spec, ks)
    assert np.allclose(delta_coord(f, 0, axis, P1).values, f.values, atol=1e-12)
    assert np.max(np.abs(delta_coord(f, 3, axis, P1).values)) <= 1e-14


def test_delta_coord_sum_reconstructs_off_axes():
    spec = GridSpec(2, 64, 8.0)
    f = random_band_limited(spec, np.random.default_rng(2), band=6, avoid_axes=True)
    lo, hi = resolvable_range(spec)
    total = sum(delta_coord(f, j, 1, P1).values for j in range(lo, hi + 1))
    assert np.max(np.abs(total - f.values)) <= 1e-10


def test_delta_coord_annihilates_axis_frequency():
    spec = GridSpec(2, 32, 4.0)
    f = plane_wave(spec, (4, 0))
    lo, hi = resolvable_range(spec)
    for j in range(lo, hi + 1):
        assert np.max(np.abs(delta_coord(f, j, 1, P1).values)) == 0


def test_delta_coord_bad_axis():
    f = plane_wave(GridSpec(2, 16, 4.0), (1, 1))
    with pytest.raises(GridMismatchError):
        delta_coord(f, 0, 2, P1)
    with pytest.raises(GridMismatchError):
        delta_coord(f, 0, 0, P2)


@pytest.mark.parametrize("j1,j2", [(0, 1), (-1, 2), (1, 1)])
def test_coordinate_projections_commute(j1, j2):
    spec = GridSpec(2, 64, 8.0)
    f = random_band_limited(spec, np.random.default_rng(3), band=10)
    ab = delta_coord(delta_coord(f, j1, 0, P1), j2, 1, P1).values
    ba = delta_coord(delta_coord(f, j2, 1, P1), j1, 0, P1).values
    assert np.max(np.abs(ab - ba)) <= 1e-12


# square function --------------------------------------------------------------

@pytest.mark.parametrize("amp", [1.0, 2.5])
def test_square_function_single_wave(amp):
    spec = GridSpec(2, 64, 8.0)
    f = plane_wave(spec, (16, 32), amp)  # axis frequencies 1 and 2
    S = square_function(f, (0, 1), P1=P1)
    assert np.allclose(S.values, amp, atol=1e-12)


def test_square_function_overlapping_scales():
    spec = GridSpec(1, 128, 8.0)
    f = plane_wave(spec, (24,))  # xi = 1.5 meets two scales
    S = square_function(f, (0,), P1=P1)
    expected = math.sqrt(sum(P1.radial(2.0**-j * 1.5) ** 2 for j in range(-4, 5)))
    assert np.allclose(S.values, expected, atol=1e-12)
    assert expected < 1


def test_square_function_zero():
    spec = GridSpec(2, 32, 4.0)
    f = SampledFunction(spec, np.zeros(spec.shape))
    assert np.all(square_function(f, (0, 1)).values == 0)


def test_square_function_empty_axes():
    f = plane_wave(GridSpec(1, 16, 4.0), (1,))
    with pytest.raises(DomainError):
        square_function(f, ())


def test_square_function_plancherel_bounds():
    spec = GridSpec(1, 256, 8.0)
    f = random_band_limited(spec, np.random.default_rng(4), band=40, avoid_axes=True)
    S = square_function(f, (0,), P1=P1)
    F = forward_transform(f)
    xi = spec.frequencies
    live = np.abs(F.coeffs) > 1e-14 * np.abs(F.coeffs).max()
    jlo, jhi = resolvable_range(spec)
    weight = sum(P1.radial(2.0**-j * xi) ** 2 for j in range(jlo, jhi + 1))
    lo, hi = weight[live].min(), weight[live].max()
    ratio = (norm_lp(S, 2) / norm_lp(f, 2)) ** 2
    assert lo - 1e-12 <= ratio <= hi + 1e-12


def test_square_function_ratio_stable_in_n():
    from multilab.experiments import square_function_ratios

    a = square_function_ratios(64, trials=5, seed=7)
    b = square_function_ratios(128, trials=5, seed=7)
    for p in a:
        assert np.allclose(a[p], b[p], rtol=1e-4)
