"""Characters, Haar measure and the group law of the dual."""

import numpy as np

from ..errors import SpecMismatchError
from .points import DualPoint, GroupPoint
from .spec import GroupSpec


def _same_spec(*points) -> GroupSpec:
    spec = points[0].spec
    for point in points[1:]:
        if point.spec != spec:
            raise SpecMismatchError(f"points belong to {point.spec} and {spec}")
    return spec


def character(xi: DualPoint, x: GroupPoint) -> complex:
    """Evaluate xi(x) = prod e^{2 pi i k_j t_j} * prod e^{2 pi i k_j x_j / m_j}."""
    spec = _same_spec(xi, x)
    return complex(spec.characters(xi.array, x.array))


def haar_integrate(spec: GroupSpec, samples) -> complex | np.ndarray:
    """Integral against the normalized Haar measure: the mean of the grid samples.

    ``samples`` may be flat (..., grid_size) or shaped like the grid; leading axes
    are kept as a batch.
    """
    samples = spec.check_samples(samples)
    result = np.mean(samples, axis=-1)
    return complex(result) if np.ndim(result) == 0 else result


def translate(xi: DualPoint, eta: DualPoint) -> DualPoint:
    """Group law of the dual: integer addition on tori, addition mod m on cyclic factors."""
    spec = _same_spec(xi, eta)
    return DualPoint(spec, tuple(spec.add_dual(xi.array, eta.array)))


def negate(xi: DualPoint) -> DualPoint:
    return DualPoint(xi.spec, tuple(xi.spec.negate_dual(xi.array)))
