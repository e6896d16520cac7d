"""Cross-route agreement checks.

The same outcome distribution is computed two independent ways: as the linear
pushforward of the phase-space density and by the spectral (fractional
Fourier) route. Their L1 distance over a direction sweep is the package's
central consistency check.
"""

import math
from typing import NamedTuple, Sequence

from .densities import SignedDensity2D, l1_distance, pushforward_linear, to_probability
from .quadrature import QuadratureSpec, quadrature_distribution
from .states import WaveFunction

CROSS_ROUTE_TOL = 1e-3


def sweep_directions(count: int = 12) -> list[tuple[float, float]]:
    """`count` unit directions (cos(k pi/count), sin(k pi/count)); for even
    counts this includes both axes."""
    return [(math.cos(k * math.pi / count), math.sin(k * math.pi / count))
            for k in range(count)]


class DirectionCheck(NamedTuple):
    a: float
    b: float
    l1: float
    passed: bool


def cross_route_report(
    psi: WaveFunction,
    phase_space: SignedDensity2D,
    directions: Sequence[tuple[float, float]],
    tol: float = CROSS_ROUTE_TOL,
) -> list[DirectionCheck]:
    """Compare pushforward and spectral distributions for each direction."""
    checks = []
    for a, b in directions:
        spec = QuadratureSpec(a, b)
        pushed = to_probability(pushforward_linear(phase_space, a, b))
        spectral = quadrature_distribution(psi, spec)
        gap = l1_distance(spectral, pushed)
        checks.append(DirectionCheck(a, b, gap, gap < tol))
    return checks


__all__ = ["sweep_directions", "DirectionCheck", "cross_route_report", "CROSS_ROUTE_TOL"]
