import sys
import numpy as np
import pytest
from numpy.testing import assert_allclose

from gohberg_bench.errors import ConvergenceWarning, OffGridError
from gohberg_bench.fourier import inv_fourier, l2_norm
from gohberg_bench.gohberg import (
    SandwichConfig,
    SandwichReport,
    TruncatedSVD,
    cutoff_approximant,
    ideal_approximants,
    ideal_decay_check,
    localise,
    lower_bound_estimate,
    make_test_vectors,
    right_sandwich,
    sandwich,
    svd_approximants,
    symbol_freeze_check,
)
from gohberg_bench.gohberg.tools import modulation
from gohberg_bench.group import GroupPoint, GroupSpec
from gohberg_bench.quantize import Op_matrix, Op_operator, operator_norm
from gohberg_bench.symbols import D_omega, Symbol, cone_corona, custom, full_corona, in_ideal
from gohberg_bench.symbols.gallery import (
    alternating_symbol,
    cone,
    cos_sqrt_symbol,
    cosine,
    decay,
    decay_function,
    mixed,
    sign,
    sign_function,
)

EAST = cone_corona([[1, 0]], np.pi / 8, name="east")
WEST = cone_corona([[-1, 0]], np.pi / 8, name="west")
# translates of an even point are odd, so no level is translation invariant
EVEN_ONLY = custom("even", lambda k, t: (np.abs(t[..., 0]) >= k) & (t[..., 0] % 2 == 0))
COS_SIGN = Symbol.separable(cosine(), sign_function(), name="cos*sign")


def _band_limited(spec, rng, radius):
    coefficients = np.zeros(spec.window_size, dtype=complex)
    near = np.abs(spec.window_points[:, 0]) <= radius
    coefficients[near] = rng.standard_normal(near.sum()) + 1j * rng.standard_normal(near.sum())
    return inv_fourier(spec, coefficients)


# --- test vectors ---


def test_test_vectors_keep_the_base_norm(circle64, rng):
    u = _band_limited(circle64, rng, 3)
    x0 = GroupPoint.from_grid(circle64, 40)
    family = make_test_vectors(u, x0, [(2,), (10,), (-30,)])
    assert len(family) == 3
    assert_allclose(family.norms(), family.base_norm, rtol=1e-12)
    with pytest.raises(OffGridError):
        make_test_vectors(u, GroupPoint(circle64, (0.001,)), [(1,)])


def test_modulation_matches_characters(plane):
    xi = np.array([-31, 17])
    assert_allclose(modulation(plane, xi), plane.characters(xi, plane.grid_points), atol=1e-12)


@pytest.mark.slow
def test_freeze_check_decays_like_the_oscillation():
    spec = GroupSpec.torus(1200)
    f = cos_sqrt_symbol()
    u = modulation(spec, (1,))
    xis = [4, 16, 64, 256, 1024]
    family = make_test_vectors(u, GroupPoint.identity(spec), [(k,) for k in xis])
    sequence = symbol_freeze_check(f, family, tol=0.02)
    assert sequence.strictly_decreasing()
    assert sequence.final <= 0.02
    assert sequence.verdict
    oracle = [abs(np.cos(np.sqrt(k + 1)) - np.cos(np.sqrt(k))) for k in xis]
    assert_allclose(sequence.values, oracle, atol=1e-12)


def test_ideal_members_kill_escaping_test_vectors(circle64, rng):
    psi = sign_function().restrict(lambda xi: np.abs(np.asarray(xi)[..., 0]) <= 8)
    L = Op_operator(Symbol.separable(cosine(), psi), circle64)
    u = _band_limited(circle64, rng, 3)
    xis = [2, 6, 12, 20, 40]
    sequence = ideal_decay_check(L, make_test_vectors(u, GroupPoint.identity(circle64), [(k,) for k in xis]))
    assert sequence.values[0] > 1e-3
    assert max(sequence.values[2:]) <= 1e-12
    assert sequence.verdict


# --- approximants ---


def test_truncated_svd_is_canonical_on_ties(circle64):
    matrix = Op_matrix(sign(), circle64)
    svd = TruncatedSVD(matrix, circle64)
    truncated = svd.truncation(2)
    assert np.linalg.matrix_rank(truncated, tol=1e-8) == 2
    near, far = modulation(circle64, (1,)), modulation(circle64, (5,))
    assert_allclose(truncated @ near, matrix @ near, atol=1e-10)
    assert_allclose(truncated @ far, 0, atol=1e-10)
    assert svd.residual_norm(2) == pytest.approx(1.0)
    assert operator_norm(Op_operator(sign(), circle64) - Op_operator(sign(), circle64), method="svd").value <= 1e-12


def test_truncated_svd_distance_is_the_next_modulus(circle64):
    matrix = Op_matrix(decay(), circle64)
    svd = TruncatedSVD(matrix, circle64)
    moduli = np.sort(np.abs(decay_function().values(circle64)))[::-1]
    for r in (1, 2, 3, 6, 11):
        assert svd.residual_norm(r) == pytest.approx(moduli[r], rel=1e-10)
        assert np.linalg.norm(matrix - svd.truncation(r), 2) == pytest.approx(moduli[r], rel=1e-8)


def test_ideal_approximants(circle64, plane):
    full = ideal_approximants(decay(), full_corona(), circle64, level=3, ranks=(1, 2))
    assert [op.label for op in full] == ["cutoff@3", "svd_r1", "svd_r2"]
    assert len(ideal_approximants(cone(), EAST, plane, level=3)) == 1
    assert svd_approximants(cone(), plane) == []


def test_cutoff_remainders_decay_like_the_symbol(circle64):
    for k in range(1, 65):
        remainder = cutoff_approximant(decay(), full_corona(), circle64, k).remainder
        assert operator_norm(remainder).value <= 1 / (1 + k) + 1e-8


# --- lower bounds and the sandwich ---


def test_sign_multiplier_sandwich(circle64):
    report = sandwich(sign(), full_corona(), circle64)
    assert report.verdict == "PASS", report.reason
    assert report.d_estimate == 1.0
    assert report.final_lower >= 0.95
    assert report.localisation.radius is None
    for level in report.levels:
        assert abs(level.upper - 1.0) <= 1e-8
        assert level.lower <= level.upper + 1e-8
    assert report.max_inversion <= 1e-8


def test_lower_bound_against_svd_truncations(circle64):
    result = lower_bound_estimate(sign(), full_corona(), circle64, svd_approximants(sign(), circle64))
    assert min(result.values) >= 0.95
    assert result.d_sequence == [1.0] * 64


def test_anisotropic_sandwich(plane):
    east = sandwich(cone(), EAST, plane)
    assert east.verdict == "PASS", east.reason
    assert east.d_estimate == pytest.approx(1.0)
    assert east.final_lower >= 0.9
    west = sandwich(cone(), WEST, plane)
    assert west.d_estimate <= 0.05
    assert west.verdict == "PASS", west.reason
    assert in_ideal(cone(), WEST, plane, tol=0.05)


def test_compact_symbol_sandwich(circle64):
    report = sandwich(decay(), full_corona(), circle64)
    assert report.verdict == "PASS", report.reason
    cutoffs = [level.upper_by["cutoff"] for level in report.levels]
    assert all(c <= 1 / (1 + k) + 1e-8 for k, c in enumerate(cutoffs, start=1))
    assert cutoffs[-1] == pytest.approx(1 / 65)


def test_alternating_symbol_is_skipped(circle64):
    report = sandwich(alternating_symbol(), full_corona(), circle64)
    assert report.verdict == "SKIP"
    assert not report.vo.verdict
    assert all(level.lower is None for level in report.levels)


def test_right_sandwich(circle64):
    report = right_sandwich(
        lambda xi, x: np.sign(np.asarray(xi)[..., 0]).astype(complex),
        full_corona(),
        circle64,
        name="sign",
        x_independent=True,
    )
    assert report.symbol == "sign.mu^-1"
    assert report.verdict == "PASS"
    assert report.d_estimate == 1.0


def test_localisation_of_x_dependent_modulus(circle64):
    config = SandwichConfig()
    base, localisation = localise(mixed(), full_corona(), circle64, config)
    assert localisation.radius is not None and localisation.radius < 0.5
    assert 0 < localisation.support_size < circle64.grid_size
    assert l2_norm(circle64, base) == pytest.approx(1.0)
    assert localisation.spectral_margin > 0


def test_lower_bound_dominates_the_error_budget(circle64):
    result = lower_bound_estimate(mixed(), full_corona(), circle64)
    present = [level for level in result.levels if level.lower is not None]
    assert present
    for level in present:
        assert level.lower >= level.proof_bound - 1e-10
        assert level.eps_ideal == 0.0


def test_report_serialisation(tmp_path, circle64):
    report = sandwich(sign(), full_corona(), circle64, SandwichConfig(svd_ranks=(1,)))
    csv = report.to_csv_text()
    assert csv.splitlines()[0] == "level,D_est,lower,upper"
    assert len(csv.splitlines()) == 65
    restored = SandwichReport.model_validate_json(report.to_json_text())
    assert restored.to_csv_text() == csv
    report.save(tmp_path / "sign.json", tmp_path / "sign.csv")
    assert (tmp_path / "sign.csv").read_text() == csv
    assert "may overestimate" in (tmp_path / "sign.json").read_text()


def test_lower_bound_only_drops_as_candidates_are_added(circle64):
    f = mixed()
    levels = D_omega(f, full_corona(), circle64).levels
    cutoffs = {k: [cutoff_approximant(f, full_corona(), circle64, k)] for k in levels}
    svd = svd_approximants(f, circle64, ranks=(1, 4))
    pools = [None, cutoffs, {k: [*cutoffs[k], *svd] for k in levels}]
    runs = [lower_bound_estimate(f, full_corona(), circle64, pool).values for pool in pools]
    for fewer, more in zip(runs, runs[1:]):
        for a, b in zip(fewer, more):
            assert (a is None) == (b is None)
            if a is not None:
                assert b <= a + 1e-12


def test_x_dependent_symbol_sandwich():
    spec = GroupSpec.torus(128)
    report = sandwich(COS_SIGN, full_corona(), spec)
    assert report.verdict == "PASS", report.reason
    assert report.d_estimate == pytest.approx(1.5)
    assert report.final_lower >= 1.45
    margin = report.localisation.spectral_margin
    assert margin > 0
    assert report.localisation.radius is not None
    witnessed = [level for level in report.levels if level.witness is not None]
    assert witnessed
    for level in witnessed:
        # the whole margin box around the witness stays in V_k and in the window
        assert abs(level.witness[0]) - margin >= level.level
        assert abs(level.witness[0]) + margin <= 128
    assert report.max_inversion <= 1e-8
    assert report.uppers_converged


def test_unconverged_upper_norms_fall_back_to_dense_svd(circle64):
    config = SandwichConfig(norm_method="power", norm_max_iter=2, svd_ranks=(1,))
    with pytest.warns(ConvergenceWarning):
        report = sandwich(sign(), full_corona(), circle64, config)
    assert report.verdict == "PASS", report.reason
    assert report.uppers_converged
    assert all(abs(level.upper - 1.0) <= 1e-8 for level in report.levels)


def test_unconverged_upper_norms_block_a_pass(circle64, monkeypatch):
    monkeypatch.setattr(sys.modules["gohberg_bench.gohberg.sandwich"], "DENSE_LIMIT", 0)
    config = SandwichConfig(norm_method="power", norm_max_iter=2, svd_ranks=(1,))
    with pytest.warns(ConvergenceWarning):
        report = sandwich(sign(), full_corona(), circle64, config)
    assert report.verdict == "FAIL"
    assert "did not converge" in report.reason
    assert not report.uppers_converged
    assert not any(level.upper_converged for level in report.levels)


def test_filter_without_translation_invariance_is_skipped(circle64):
    report = sandwich(sign(), EVEN_ONLY, circle64)
    assert report.verdict == "SKIP"
    assert "invariance" in report.reason
    assert report.nested
    assert not report.invariance.verified
    assert report.vo is None
    assert all(level.lower is None for level in report.levels)


def test_invariance_is_recorded_on_a_pass(circle64):
    report = sandwich(sign(), full_corona(), circle64, SandwichConfig(svd_ranks=(1,)))
    assert report.nested
    assert report.invariance.verified
    assert report.invariance.filter == "full"


def test_group_without_corona_is_skipped(z8):
    report = sandwich(sign(), full_corona(), z8)
    assert report.verdict == "SKIP"
    assert "no nonempty level" in report.reason
    assert report.levels == []
    assert report.final_lower is None
