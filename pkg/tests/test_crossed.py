import numpy as np
import pytest
from numpy.testing import assert_allclose

from gohberg_bench.crossed import (
    CrossedElement,
    compose,
    involution,
    partial_fourier,
    partial_fourier_inv,
    sch,
)
from gohberg_bench.errors import ShapeMismatchError, WindowEscapeError
from gohberg_bench.group import DualPoint
from gohberg_bench.quantize import op_quantize
from gohberg_bench.selftest import CHECKS, passed, run_selftest
from gohberg_bench.symbols.gallery import decay_function

TOL = 1e-10


def _random_element(spec, rng, size=None):
    size = size or int(rng.integers(1, spec.window_size + 1))
    support = spec.window_points[rng.choice(spec.window_size, size=size, replace=False)]
    return CrossedElement.random(spec, support, rng)


def _pairs(spec, count=100, state=0):
    rng = np.random.default_rng(state)
    for _ in range(count):
        yield _random_element(spec, rng), _random_element(spec, rng)


def test_sch_is_multiplicative_on_z8(z8):
    worst = 0.0
    for phi, psi in _pairs(z8):
        product = sch(compose(phi, psi)).dense()
        worst = max(worst, np.max(np.abs(product - sch(phi).dense() @ sch(psi).dense())))
    assert worst <= TOL


def test_sch_preserves_adjoints_on_z8(z8):
    worst = 0.0
    for phi, _ in _pairs(z8, state=1):
        worst = max(worst, np.max(np.abs(sch(involution(phi)).dense() - sch(phi).dense().conj().T)))
    assert worst <= TOL


def test_involution_is_antimultiplicative(z8):
    for phi, psi in _pairs(z8, count=20, state=2):
        assert involution(involution(psi)).allclose(psi)
        assert involution(compose(phi, psi)).allclose(compose(involution(psi), involution(phi)), atol=TOL)


def test_partial_fourier_matches_sch(z8, mixed, rng):
    for spec in (z8, mixed):
        psi = _random_element(spec, rng, size=3)
        assert_allclose(op_quantize(partial_fourier(psi), spec).dense(), sch(psi).dense(), atol=TOL)


def test_partial_fourier_inverse(mixed, rng):
    psi = _random_element(mixed, rng, size=5)
    element, residual = partial_fourier_inv(partial_fourier(psi), psi.support, mixed)
    assert residual <= TOL
    assert element.allclose(psi, atol=TOL)
    _, missing = partial_fourier_inv(partial_fourier(psi), psi.support[:2], mixed)
    assert missing > 0.1


def test_delta_at_unit_is_a_multiplier(circle):
    element = CrossedElement.delta(circle, DualPoint.unit(circle), decay_function())
    assert_allclose(sch(element).dense(), np.diag(decay_function().values(circle)))


def test_fibers_vanish_where_the_shift_leaves_the_window(circle):
    element = CrossedElement.delta(circle, (30,))
    fiber = element.fiber((30,))
    assert np.count_nonzero(fiber) == circle.window_size - 30
    assert not element.fiber((1,)).any()


def test_escape_raises_or_truncates(circle):
    top = CrossedElement.delta(circle, (31,))
    with pytest.raises(WindowEscapeError) as info:
        compose(top, top)
    assert info.value.escaped.tolist() == [[62]]
    assert compose(top, top, on_escape="truncate").support.shape == (0, 1)


def test_duplicate_support_points_merge(z8):
    element = CrossedElement(z8, np.array([[1], [9]]), np.ones((2, 8)))
    assert element.support.tolist() == [[1]]
    assert_allclose(element.fiber((1,)), 2 * np.ones(8))
    assert element.hs_norm() == pytest.approx(np.sqrt(32))
    with pytest.raises(ShapeMismatchError):
        CrossedElement(z8, np.array([[1]]), np.ones((1, 7)))


def test_linear_structure(z8, rng):
    phi, psi = _random_element(z8, rng), _random_element(z8, rng)
    assert_allclose(sch(phi + 2.0 * psi).dense(), sch(phi).dense() + 2.0 * sch(psi).dense(), atol=TOL)
    assert (phi - phi).hs_norm() == pytest.approx(0.0)


def test_selftest_passes():
    results = run_selftest(seed=0)
    assert list(results) == list(CHECKS)
    assert passed(results), results


def test_selftest_catches_injected_fault():
    results = run_selftest(inject_fault="homomorphism", seed=0)
    assert results["homomorphism"]["status"] == "error"
    assert all(results[name]["status"] == "success" for name in CHECKS if name != "homomorphism")
    with pytest.raises(ValueError):
        run_selftest(inject_fault="bogus")


def test_selftest_is_deterministic():
    first, second = run_selftest(seed=4), run_selftest(seed=4)
    assert [r["residual"] for r in first.values()] == [r["residual"] for r in second.values()]
