import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from gohberg_bench.errors import OffGridError
from gohberg_bench.fourier import (
    fourier,
    fourier_matrix,
    grid_spectrum,
    inv_fourier,
    inv_fourier_matrix,
    l2_norm,
    translate_x,
)
from gohberg_bench.group import Cyclic, GroupPoint, GroupSpec, Torus

CIRCLE = GroupSpec.torus(31)
MIXED = GroupSpec(factors=(Torus(grid=20, window=6), Cyclic(order=3)))


def _complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


@seed(5)
@settings(max_examples=30, deadline=None)
@given(state=st.integers(0, 2**32 - 1), spec=st.sampled_from([CIRCLE, MIXED, GroupSpec.cyclic(8)]))
def test_plancherel_on_band_limited_vectors(state, spec):
    rng = np.random.default_rng(state)
    w = _complex(rng, spec.window_size)
    u = inv_fourier(spec, w)
    assert_allclose(fourier(spec, u), w, atol=1e-10)
    assert abs(l2_norm(spec, u) - np.linalg.norm(w)) <= 1e-10


@pytest.mark.parametrize("spec", [CIRCLE, MIXED, GroupSpec.torus(5, dims=2, grid=12)])
def test_fft_matches_direct(spec, rng):
    u = _complex(rng, (3, spec.grid_size))
    assert_allclose(fourier(spec, u, method="fft"), fourier(spec, u, method="direct"), atol=1e-12)
    w = _complex(rng, (3, spec.window_size))
    assert_allclose(inv_fourier(spec, w, method="fft"), inv_fourier(spec, w, method="direct"), atol=1e-10)


def test_unknown_method(circle):
    with pytest.raises(ValueError):
        fourier(circle, np.zeros(circle.grid_size), method="slow")


def test_dense_matrices(mixed, rng):
    F, F_inv = fourier_matrix(mixed), inv_fourier_matrix(mixed)
    assert_allclose(F @ F_inv, np.eye(mixed.window_size), atol=1e-12)
    u = _complex(rng, mixed.grid_size)
    assert_allclose(F @ u, fourier(mixed, u), atol=1e-12)


def test_grid_shaped_input(mixed, rng):
    u = _complex(rng, mixed.grid_shape)
    assert_allclose(fourier(mixed, u), fourier(mixed, u.reshape(-1)))


def test_translate_character_picks_up_phase(circle):
    k = 7
    u = circle.characters(np.array([k]), circle.grid_points)
    x0 = GroupPoint.from_grid(circle, 5)
    shifted = translate_x(circle, u, x0)
    expected = u * np.exp(-2j * np.pi * k * x0.coords[0])
    assert_allclose(shifted, expected, atol=1e-12)


def test_translate_off_grid(circle):
    with pytest.raises(OffGridError):
        translate_x(circle, np.zeros(circle.grid_size), GroupPoint(circle, (0.001,)))


def test_grid_spectrum_of_character(mixed):
    xi = np.array([-4, 2])
    spectrum = grid_spectrum(mixed, mixed.characters(xi, mixed.grid_points))
    position = int(np.flatnonzero(np.all(mixed.grid_frequencies() == xi, axis=-1))[0])
    assert abs(spectrum[position] - 1) <= 1e-12
    assert np.sum(np.abs(spectrum)) == pytest.approx(1.0, abs=1e-10)
