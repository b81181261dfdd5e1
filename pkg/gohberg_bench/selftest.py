"""Exact-algebra checks on X = Z_8 with the whole dual as window.

Each check returns a status dict like ``{"status": "success", "message": ...,
"residual": ...}``. ``inject_fault`` perturbs the matrix one check compares,
which must turn that check into an error.
"""

import logging

import numpy as np

from .config import ALGEBRA_TOL, DEFAULT_SEED
from .crossed import CrossedElement, compose, involution, partial_fourier, sch
from .fourier import fourier, fourier_matrix, inv_fourier, inv_fourier_matrix, l2_norm
from .group import GroupSpec
from .quantize import Op_matrix, op_quantize
from .symbols import Symbol

logger = logging.getLogger(__name__)

ORDER = 8
PAIRS = 100
SAMPLES = 20
FAULT = 1e-3

CHECKS = ("plancherel", "diagram", "homomorphism", "involution", "adjoint")


def selftest_spec() -> GroupSpec:
    return GroupSpec.cyclic(ORDER)


def _perturb(matrix: np.ndarray) -> np.ndarray:
    perturbed = np.array(matrix, dtype=complex)
    perturbed[0, -1] += FAULT
    return perturbed


def _random_vector(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def _random_element(spec: GroupSpec, rng: np.random.Generator) -> CrossedElement:
    size = int(rng.integers(1, spec.window_size + 1))
    support = spec.window_points[rng.choice(spec.window_size, size=size, replace=False)]
    return CrossedElement.random(spec, support, rng)


def _result(name: str, residual: float, tol: float = ALGEBRA_TOL) -> dict:
    if residual <= tol:
        return {"status": "success", "message": f"max residual {residual:.2e}", "residual": residual}
    logger.error(f"self-test {name} failed: residual {residual:.3e} > {tol:.0e}")
    return {"status": "error", "message": f"max residual {residual:.2e} exceeds {tol:.0e}", "residual": residual}


def check_plancherel(spec: GroupSpec, rng: np.random.Generator, fault: bool = False) -> dict:
    """F is unitary: F F^* = I, ||F u|| = ||u|| and F^-1 F u = u."""
    F = fourier_matrix(spec)
    if fault:
        F = _perturb(F)
    residual = float(np.max(np.abs(F @ inv_fourier_matrix(spec) - np.eye(spec.window_size))))
    for _ in range(SAMPLES):
        u = _random_vector(rng, spec.grid_size)
        w = F @ u
        residual = max(residual, abs(np.linalg.norm(w) - l2_norm(spec, u)))
        residual = max(residual, float(np.max(np.abs(w - fourier(spec, u)))))
        residual = max(residual, float(np.max(np.abs(inv_fourier(spec, w) - u))))
    return _result("plancherel", residual)


def check_diagram(spec: GroupSpec, rng: np.random.Generator, fault: bool = False) -> dict:
    """op(f) = F Op(f) F^-1, both quantization paths, and op(F^-1 Psi) = sch(Psi)."""
    F, F_inv = fourier_matrix(spec), inv_fourier_matrix(spec)
    residual = 0.0
    for _ in range(SAMPLES):
        shape = (spec.grid_size, spec.window_size)
        f = Symbol.from_grid(spec, rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        dual = op_quantize(f, spec, method="fft").dense()
        if fault:
            dual = _perturb(dual)
        residual = max(residual, float(np.max(np.abs(dual - F @ Op_matrix(f, spec) @ F_inv))))
        residual = max(residual, float(np.max(np.abs(dual - op_quantize(f, spec, method="direct").dense()))))
        psi = _random_element(spec, rng)
        bridged = op_quantize(partial_fourier(psi), spec).dense()
        residual = max(residual, float(np.max(np.abs(bridged - sch(psi).dense()))))
    return _result("diagram", residual)


def check_homomorphism(spec: GroupSpec, rng: np.random.Generator, fault: bool = False) -> dict:
    """sch(Phi <> Psi) = sch(Phi) sch(Psi)."""
    residual = 0.0
    for _ in range(PAIRS):
        phi, psi = _random_element(spec, rng), _random_element(spec, rng)
        product = sch(compose(phi, psi)).dense()
        if fault:
            product = _perturb(product)
        residual = max(residual, float(np.max(np.abs(product - sch(phi).dense() @ sch(psi).dense()))))
    return _result("homomorphism", residual)


def check_involution(spec: GroupSpec, rng: np.random.Generator, fault: bool = False) -> dict:
    """Psi^<><> = Psi and (Phi <> Psi)^<> = Psi^<> <> Phi^<>."""
    residual = 0.0
    for _ in range(PAIRS):
        phi, psi = _random_element(spec, rng), _random_element(spec, rng)
        twice = sch(involution(involution(psi))).dense()
        if fault:
            twice = _perturb(twice)
        residual = max(residual, float(np.max(np.abs(twice - sch(psi).dense()))))
        left = sch(involution(compose(phi, psi))).dense()
        right = sch(compose(involution(psi), involution(phi))).dense()
        residual = max(residual, float(np.max(np.abs(left - right))))
    return _result("involution", residual)


def check_adjoint(spec: GroupSpec, rng: np.random.Generator, fault: bool = False) -> dict:
    """sch(Psi^<>) = sch(Psi)^*."""
    residual = 0.0
    for _ in range(PAIRS):
        psi = _random_element(spec, rng)
        starred = sch(involution(psi)).dense()
        if fault:
            starred = _perturb(starred)
        residual = max(residual, float(np.max(np.abs(starred - sch(psi).dense().conj().T))))
    return _result("adjoint", residual)


_RUNNERS = {
    "plancherel": check_plancherel,
    "diagram": check_diagram,
    "homomorphism": check_homomorphism,
    "involution": check_involution,
    "adjoint": check_adjoint,
}


def run_selftest(inject_fault: str | None = None, seed: int = DEFAULT_SEED) -> dict[str, dict]:
    """Run every check in order with one seeded generator; returns name -> status dict."""
    if inject_fault is not None and inject_fault not in _RUNNERS:
        raise ValueError(f"unknown check {inject_fault!r}, available: {list(CHECKS)}")
    spec = selftest_spec()
    rng = np.random.default_rng(seed)
    results = {}
    for name in CHECKS:
        try:
            results[name] = _RUNNERS[name](spec, rng, fault=name == inject_fault)
        except Exception as e:
            logger.error(f"self-test {name} raised: {e}")
            results[name] = {"status": "error", "message": f"raised {type(e).__name__}: {e}", "residual": None}
    return results


def passed(results: dict[str, dict]) -> bool:
    return all(r["status"] == "success" for r in results.values())
