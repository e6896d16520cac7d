"""Measurement distributions of rotated quadratures z = a*x + b*p.

The distribution is obtained without the phase-space density: after
nondimensionalizing by sqrt(hbar), the observable is a rotation by
theta = atan2(b, a) scaled by r = hypot(a, b), and the angle-theta fractional
Fourier transform carries the state to the frame where that rotation is the
position operator. All unit handling lives here.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import czt

from .densities import ProbabilityDensity1D, Sampler
from .errors import DegeneracyError, NumericalIntegrityError
from .grids import Grid1D
from .states import WaveFunction

ANGLE_SNAP = 1e-6
UNITARITY_TOL = 1e-8
TAU = 2.0 * math.pi


@dataclass(frozen=True)
class QuadratureSpec:
    """Coefficients of the observable z = a*x + b*p."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise DegeneracyError("quadrature coefficients must be finite")
        if self.a == 0.0 and self.b == 0.0:
            raise DegeneracyError("quadrature (0, 0) is degenerate")

    @property
    def angle(self) -> float:
        return math.atan2(self.b, self.a)

    @property
    def radius(self) -> float:
        return math.hypot(self.a, self.b)


def _chirp_transform(values: np.ndarray, u: np.ndarray, du: float, alpha: float) -> np.ndarray:
    """Fractional transform kernel for |sin(alpha)| >= sqrt(2)/2.

    F_alpha f(w) = A_alpha exp(i w^2 cot/2) * integral f(u) exp(i u^2 cot/2)
    exp(-i u w / sin) du, with the Riemann sum evaluated on the input grid via
    a chirp-z transform. The principal branch of A_alpha keeps the family a
    semigroup and makes alpha = pi/2 the unitary Fourier transform.
    """
    n = len(values)
    cot = math.cos(alpha) / math.sin(alpha)
    s = math.sin(alpha)
    amplitude = np.sqrt((1 - 1j * cot) / (2 * np.pi))
    chirped = values * np.exp(0.5j * cot * u * u)
    k0 = u[0] / s
    dk = du / s
    j = np.arange(n)
    spectrum = czt(chirped, n, w=np.exp(-1j * dk * du), a=np.exp(1j * k0 * du))
    integral = du * np.exp(-1j * k0 * u[0]) * np.exp(-1j * dk * u[0] * j) * spectrum
    return amplitude * np.exp(0.5j * cot * u * u) * integral


def _parity_flip(values: np.ndarray) -> np.ndarray:
    # On a symmetric grid u_k = -U + k du, the point -u_k is u_{n-k} (k >= 1);
    # u_0 has no partner but carries negligible amplitude for valid states.
    return np.concatenate([values[:1], values[1:][::-1]])


def _grid_is_symmetric(u: np.ndarray, du: float) -> bool:
    return abs(u[0] + u[-1] + du) < 1e-9 * max(abs(u[0]), 1.0)


def _frft_values(values: np.ndarray, u: np.ndarray, du: float, theta: float) -> np.ndarray:
    """Dimensionless fractional Fourier transform on a fixed grid.

    Angles within 1e-6 of a quarter turn dispatch to exact branches; otherwise
    the angle is reduced with F_theta = F_(theta - pi/2) o F_(pi/2) so that the
    chirp rate |cot| never exceeds 1.
    """
    a = theta % TAU
    for target, action in ((0.0, "id"), (0.5 * math.pi, "ft"), (math.pi, "parity"),
                           (1.5 * math.pi, "ift"), (TAU, "id")):
        if abs(a - target) < ANGLE_SNAP:
            if action == "id":
                return values.copy()
            if action == "ft":
                return _chirp_transform(values, u, du, 0.5 * math.pi)
            if action == "ift":
                return _chirp_transform(values, u, du, 1.5 * math.pi)
            if _grid_is_symmetric(u, du):
                return _parity_flip(values)
            return _chirp_transform(
                _chirp_transform(values, u, du, 0.5 * math.pi), u, du, 0.5 * math.pi
            )
    if 0.25 * math.pi <= a <= 0.75 * math.pi or 1.25 * math.pi <= a <= 1.75 * math.pi:
        return _chirp_transform(values, u, du, a)
    rotated = _chirp_transform(values, u, du, 0.5 * math.pi)
    return _frft_values(rotated, u, du, (a - 0.5 * math.pi) % TAU)


def frft(psi: WaveFunction, theta: float) -> WaveFunction:
    """Fractional Fourier transform of a state, returned on the same grid.

    theta = 0 is the identity; theta = pi/2 matches the momentum representation
    up to the sqrt(hbar) scaling isometry; angles compose additively.
    """
    scale = math.sqrt(psi.hbar)
    u = psi.grid.points / scale
    du = psi.grid.dx / scale
    dimless = psi.amplitudes * psi.hbar**0.25
    out = _frft_values(dimless, u, du, theta)
    out = out / psi.hbar**0.25
    norm = float(np.sqrt(psi.grid.dx * np.sum(np.abs(out) ** 2)))
    if abs(norm - 1.0) > UNITARITY_TOL:
        raise NumericalIntegrityError(f"fractional transform lost unitarity: norm {norm!r}")
    return WaveFunction(psi.grid, out / norm, psi.hbar)


def quadrature_distribution(psi: WaveFunction, spec: QuadratureSpec) -> ProbabilityDensity1D:
    """Distribution of the outcome of measuring z = a*x + b*p in state psi.

    Computed as |F_theta psi_dimensionless|^2 rescaled from the rotated frame
    back to physical z units; nonnegative by construction, unit mass.
    """
    scale = math.sqrt(psi.hbar)
    u = psi.grid.points / scale
    du = psi.grid.dx / scale
    dimless = psi.amplitudes * psi.hbar**0.25
    rotated = _frft_values(dimless, u, du, spec.angle)
    density_u = np.abs(rotated) ** 2

    stretch = scale * spec.radius  # z = stretch * u
    z_grid = Grid1D(spec.radius * psi.grid.x_min, spec.radius * psi.grid.x_max,
                    psi.grid.n_points)
    values = density_u / stretch
    mass = z_grid.dx * values.sum()
    if abs(mass - 1.0) > 1e-6:
        raise NumericalIntegrityError(f"quadrature distribution mass drifted to {mass!r}")
    return ProbabilityDensity1D(z_grid, values / mass)


def interval_probability(dist: ProbabilityDensity1D, p: float, q: float) -> float:
    """Probability of an outcome in (p, q], from the cellwise-linear CDF."""
    if p > q:
        raise ValueError(f"empty interval bounds: p = {p} > q = {q}")
    s = Sampler(dist)
    return float(s.cdf(q) - s.cdf(p))


__all__ = [
    "QuadratureSpec",
    "frft",
    "quadrature_distribution",
    "interval_probability",
]
