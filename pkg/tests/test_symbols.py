import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from gohberg_bench.group import DualPoint, GroupSpec, Window
from gohberg_bench.symbols import (
    OSC,
    D_omega,
    DualFunction,
    Symbol,
    column_sup,
    cone_corona,
    d_omega,
    full_corona,
    in_ideal,
    intersection,
    is_compact_symbol,
    osc,
    osc_max,
    union,
    vo_diagnostic,
)
from gohberg_bench.symbols.gallery import (
    GALLERY,
    alternating_symbol,
    cone,
    cos_sqrt,
    cosine,
    decay,
    decay_function,
    describe,
    even_indicator,
    get,
    homogeneous0,
    power_profile,
    sign,
)

CIRCLE = GroupSpec.torus(20)
EAST = cone_corona([[1, 0]], np.pi / 8, name="east")
WEST = cone_corona([[-1, 0]], np.pi / 8, name="west")


def _random_dual(state: int) -> DualFunction:
    rng = np.random.default_rng(state)
    values = rng.standard_normal(CIRCLE.window_size) + 1j * rng.standard_normal(CIRCLE.window_size)
    return DualFunction.from_values(CIRCLE, values)


@seed(11)
@settings(max_examples=100, deadline=None)
@given(a=st.integers(0, 2**32 - 1), b=st.integers(0, 2**32 - 1), z=st.integers(-5, 5))
def test_oscillation_leibniz_rule(a, b, z):
    psi, phi = _random_dual(a), _random_dual(b)
    zeta = DualPoint(CIRCLE, (z,))
    xi = CIRCLE.window_points
    shifted = CIRCLE.add_dual(xi, zeta.array)
    lhs = osc(psi * phi, zeta)(xi)
    rhs = osc(psi, zeta)(xi) * phi(shifted) + psi(xi) * osc(phi, zeta)(xi)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


@seed(12)
@settings(max_examples=100, deadline=None)
@given(a=st.integers(0, 2**32 - 1), z=st.integers(-5, 5), e=st.integers(-5, 5))
def test_oscillation_translation_equivariance_and_bound(a, z, e):
    psi = _random_dual(a)
    zeta, eta = DualPoint(CIRCLE, (z,)), DualPoint(CIRCLE, (e,))
    xi = CIRCLE.window_points
    assert_allclose(osc(psi.translate(eta), zeta)(xi), osc(psi, zeta).translate(eta)(xi), atol=0)
    assert np.max(np.abs(osc(psi, zeta)(xi))) <= 2 * psi.sup_norm(CIRCLE) + 1e-12


def test_osc_max():
    psi = _random_dual(7)
    zetas = [DualPoint(CIRCLE, (1,)), DualPoint(CIRCLE, (-2,))]
    xi = CIRCLE.window_points
    expected = np.maximum(np.abs(osc(psi, zetas[0])(xi)), np.abs(osc(psi, zetas[1])(xi)))
    assert_allclose(osc_max(psi, zetas)(xi).real, expected)


def test_symbol_oscillation_keeps_factors():
    f = Symbol.separable(cosine(), cos_sqrt())
    zeta = DualPoint(CIRCLE, (3,))
    g = OSC(f, zeta)
    assert g.factors is not None
    expected = f.factors[0].values(CIRCLE)[:, None] * osc(cos_sqrt(), zeta).values(CIRCLE)[None, :]
    assert_allclose(g.grid(CIRCLE), expected, atol=1e-14)


def test_translate_dual():
    f = Symbol.separable(cosine(), decay_function())
    eta = DualPoint(CIRCLE, (2,))
    x = CIRCLE.grid_points[:, None, :]
    xi = CIRCLE.window_points[None, :, :]
    assert_allclose(f.translate_dual(eta).evaluate(x, xi), f.evaluate(x, xi + 2))


def test_from_grid_shape_check(circle):
    with pytest.raises(ValueError):
        Symbol.from_grid(circle, np.zeros((3, circle.window_size)))
    row = Symbol.from_grid(circle, np.ones((1, circle.window_size)))
    assert row.x_independent


def test_column_sup_of_separable_symbol():
    f = Symbol.separable(cosine(), cos_sqrt())
    best, _ = column_sup(f, CIRCLE)
    assert_allclose(best, 1.5 * np.abs(cos_sqrt().values(CIRCLE)), atol=1e-12)


def test_sign_limsup_along_full_corona(circle64):
    sequence = D_omega(sign(), full_corona(), circle64)
    assert sequence.levels == list(range(1, 65))
    assert sequence.values == (1.0,) * 64
    assert sequence.estimate == 1.0
    assert sequence.witnesses[-1].coords == (-64,)
    assert sequence.x0 is not None


def test_decay_level_sups(circle64):
    sequence = d_omega(decay_function(), full_corona(), circle64)
    assert_allclose(sequence.to_list(), [1 / (1 + k) for k in range(1, 65)], rtol=1e-14)


def test_region_restricts_witnesses(circle64):
    region = Window(circle64).interior(10)
    sequence = D_omega(sign(), full_corona(), circle64, region=region)
    assert sequence.deepest == 54
    assert sequence.values[54:] == (None,) * 10
    assert sequence.witnesses[0].coords == (-54,)


def test_full_corona_filter(circle64):
    omega = full_corona()
    assert omega.is_full
    assert omega.deepest_level(circle64) == 64
    assert omega.check_nesting(circle64)
    report = omega.check_invariance(circle64)
    assert report.verified
    assert report.shifts[0][0] == 2


def test_cone_filter_membership(plane):
    assert EAST.contains(plane, 5, np.array([10, 0]))
    assert EAST.contains(plane, 5, np.array([10, 3]))
    assert not EAST.contains(plane, 5, np.array([0, 10]))
    assert not EAST.contains(plane, 5, np.array([3, 0]))
    assert EAST.check_nesting(plane, 20)
    assert not EAST.is_full


def test_filter_combinators(plane):
    both = union(EAST, WEST)
    assert both.name == "east|west"
    assert both.contains(plane, 4, np.array([-8, 0]))
    assert not intersection(EAST, WEST).level_mask(plane, 4).any()
    assert union(full_corona(), EAST).is_full


def test_vo_diagnostic_separates_sign_and_alternating(circle64):
    assert vo_diagnostic(sign(), full_corona(), circle64).verdict
    report = vo_diagnostic(alternating_symbol(), full_corona(), circle64)
    assert not report.verdict
    assert report.finals == [2.0, 2.0]
    assert "NOT" in report.summary()


def test_cone_symbol_along_supporting_and_opposite_cones(plane):
    f = cone()
    assert D_omega(f, EAST, plane).estimate == pytest.approx(1.0)
    assert D_omega(f, WEST, plane).estimate <= 0.05
    assert in_ideal(f, WEST, plane, tol=0.05)
    assert not in_ideal(f, EAST, plane, tol=0.05)
    assert vo_diagnostic(f, EAST, plane).verdict


def test_compactness_criterion(circle64):
    assert is_compact_symbol(decay(), circle64, tol=0.05)
    assert not is_compact_symbol(sign(), circle64, tol=0.05)


def test_gallery_symbols_are_bounded():
    small = GroupSpec.torus(6, dims=2)
    for name in GALLERY:
        f = get(name)
        assert 0 < f.sup_norm(small) <= 1.5 + 1e-12, name
    assert [entry["name"] for entry in describe()] == list(GALLERY)


def test_gallery_errors():
    with pytest.raises(KeyError):
        get("nope")
    with pytest.raises(ValueError):
        power_profile(p=1.0)


@seed(13)
@settings(max_examples=50, deadline=None)
@given(a=st.integers(0, 2**32 - 1), z=st.integers(-5, 5))
def test_oscillation_commutes_with_conjugation(a, z):
    psi = _random_dual(a)
    zeta = DualPoint(CIRCLE, (z,))
    xi = CIRCLE.window_points
    assert_allclose(np.conj(osc(psi, zeta)(xi)), osc(psi.conj(), zeta)(xi), atol=1e-14)


def test_homogeneous_symbol_limsup_is_the_direction_maximum(plane):
    for direction in [(1.0, 0.0), (1.0, 1.0), (2.0, -1.0)]:
        sequence = d_omega(homogeneous0(direction), full_corona(), plane)
        assert sequence.estimate == pytest.approx(1.0, abs=1e-12)


def test_even_indicator_never_decays(circle64):
    assert d_omega(even_indicator(), full_corona(), circle64).values == (1.0,) * 64


def test_cos_sqrt_oscillation_vanishes_on_a_large_window():
    f = get("cos_sqrt")
    assert vo_diagnostic(f, full_corona(), GroupSpec.torus(256)).verdict
    assert not vo_diagnostic(f, full_corona(), GroupSpec.torus(64)).verdict


def test_ideal_membership_survives_dual_translation(plane):
    f = cone()
    assert in_ideal(f, WEST, plane, tol=0.05)
    for eta in [(3, 0), (0, -2), (-5, 4)]:
        assert in_ideal(f.translate_dual(DualPoint(plane, eta)), WEST, plane, tol=0.05)


def test_inner_level_masks_keep_the_margin_box_inside(circle64):
    masks = full_corona().inner_level_masks(circle64, 5)
    assert len(masks) == 64
    points = circle64.window_points[:, 0]
    assert set(points[masks[9]]) == set(range(-59, -14)) | set(range(15, 60))
    assert masks[53].any()
    assert not masks[54].any()
    plain = full_corona().inner_level_masks(circle64, 0)
    assert all(np.array_equal(a, b) for a, b in zip(plain, full_corona().level_masks(circle64)))


def test_inner_level_masks_match_a_direct_box_check():
    spec = GroupSpec.torus(10, dims=2)
    box = np.array([(a, b) for a in range(-2, 3) for b in range(-2, 3)])
    interior = Window(spec).interior(2)
    masks = EAST.inner_level_masks(spec, 2, k_max=6)
    assert len(masks) == 6
    for k, mask in enumerate(masks, start=1):
        expected = [
            bool(interior[i]) and bool(EAST.contains(spec, k, xi + box).all())
            for i, xi in enumerate(spec.window_points)
        ]
        assert mask.tolist() == expected


def test_margin_moves_witnesses_off_the_level_edge(circle64):
    sequence = D_omega(sign(), full_corona(), circle64, margin=10)
    assert sequence.deepest == 44
    assert sequence.witnesses[0].coords == (-54,)
    assert sequence.witnesses[43].coords == (-54,)
