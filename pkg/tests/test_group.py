import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose
from pydantic import ValidationError

from gohberg_bench.errors import ShapeMismatchError, SpecMismatchError
from gohberg_bench.group import (
    Cyclic,
    DualPoint,
    GroupPoint,
    GroupSpec,
    Torus,
    Window,
    character,
    haar_integrate,
)

MIXED = GroupSpec(factors=(Torus(grid=20, window=6), Cyclic(order=3)))


def test_json_round_trip():
    spec = GroupSpec.from_json('{"factors": [{"torus": {"grid": 20, "window": 6}}, {"cyclic": 3}]}')
    assert spec == MIXED
    assert GroupSpec.from_json(spec.to_json()) == spec
    assert str(spec) == "T[20|6] x Z3"


def test_torus_grid_must_resolve_window():
    with pytest.raises(ValidationError):
        GroupSpec(factors=(Torus(grid=10, window=6),))


def test_torus_default_grid_and_with_window():
    spec = GroupSpec.torus(16)
    assert spec.grid_shape == (33,)
    wider = spec.with_window(40)
    assert wider.window_shape == (81,)
    assert wider.grid_shape == (81,)
    assert GroupSpec.torus(8, grid=129).with_window(16).grid_shape == (129,)


def test_sizes(mixed):
    assert mixed.ndim == 2
    assert mixed.torus_axes == (0,)
    assert mixed.grid_size == 60
    assert mixed.window_size == 39
    assert mixed.grid_points.shape == (60, 2)
    assert mixed.window_points.shape == (39, 2)


def test_window_enumeration(mixed):
    assert np.array_equal(mixed.window_index(mixed.window_points), np.arange(mixed.window_size))
    assert mixed.window_index(np.array([7, 0])) == -1
    assert mixed.window_index(np.array([-6, 5])) == mixed.window_index(np.array([-6, 2]))
    assert mixed.window_points[mixed.unit_index].tolist() == [0, 0]


def test_grid_enumeration(mixed):
    assert np.array_equal(mixed.grid_index(mixed.grid_points), np.arange(mixed.grid_size))
    assert mixed.grid_index(np.array([0.025, 1.0])) == -1
    assert GroupPoint(mixed, (0.5, 2.0)).grid_index >= 0


def test_cyclic_reduction(z8):
    assert DualPoint(z8, (9,)).coords == (1,)
    assert (DualPoint(z8, (3,)) + DualPoint(z8, (6,))).coords == (1,)
    assert (-DualPoint(z8, (3,))).coords == (5,)
    assert GroupPoint(z8, (-1.0,)).coords == (7.0,)


def test_dual_point_arithmetic_on_torus(circle):
    xi = DualPoint(circle, (30,))
    assert (xi + DualPoint(circle, (5,))).coords == (35,)
    assert (xi + DualPoint(circle, (5,))).window_index == -1
    assert DualPoint.unit(circle).is_unit


def test_wrong_dimension_raises(mixed):
    with pytest.raises(SpecMismatchError):
        mixed.window_index(np.array([1, 2, 3]))
    with pytest.raises(SpecMismatchError):
        character(DualPoint(mixed, (1, 1)), GroupPoint(GroupSpec.torus(4), (0.5,)))


@seed(17)
@settings(max_examples=100, deadline=None)
@given(
    xi=st.tuples(st.integers(-40, 40), st.integers(-10, 10)),
    eta=st.tuples(st.integers(-40, 40), st.integers(-10, 10)),
    index=st.integers(0, MIXED.grid_size - 1),
)
def test_characters_are_multiplicative(xi, eta, index):
    x = GroupPoint.from_grid(MIXED, index)
    a, b = DualPoint(MIXED, xi), DualPoint(MIXED, eta)
    assert abs(character(a + b, x) - character(a, x) * character(b, x)) <= 1e-10
    assert abs(abs(character(a, x)) - 1.0) <= 1e-12


@seed(3)
@settings(max_examples=50, deadline=None)
@given(index=st.integers(0, MIXED.window_size - 1))
def test_haar_integral_of_window_characters(index):
    xi = MIXED.window_points[index]
    samples = MIXED.characters(xi, MIXED.grid_points)
    expected = 1.0 if not xi.any() else 0.0
    assert abs(haar_integrate(MIXED, samples) - expected) <= 1e-12


def test_character_table_matches_characters(mixed):
    table = mixed.character_table()
    direct = mixed.characters(mixed.window_points[:, None, :], mixed.grid_points[None, :, :])
    assert_allclose(table, direct, atol=1e-12)


def test_grid_difference_index(mixed):
    diff = mixed.grid_difference_index()
    g, h = 17, 44
    expected = mixed.grid_index(mixed.grid_points[g] - mixed.grid_points[h])
    assert diff[g, h] == expected


def test_check_samples_accepts_grid_shape(mixed):
    shaped = np.zeros(mixed.grid_shape)
    assert mixed.check_samples(shaped).shape == (60,)
    with pytest.raises(ShapeMismatchError):
        mixed.check_samples(np.zeros(59))
    with pytest.raises(ShapeMismatchError):
        mixed.check_coefficients(np.zeros(40))


def test_window_interior(circle64):
    window = Window(circle64)
    assert len(window) == 129
    assert int(window.interior(10).sum()) == 2 * 54 + 1
    assert DualPoint(circle64, (64,)) in window
    assert (65,) not in window
    assert window.indicator(np.array([[0], [100]])).tolist() == [1.0, 0.0]
    assert [xi.coords for xi in list(window)[:2]] == [(-64,), (-63,)]
