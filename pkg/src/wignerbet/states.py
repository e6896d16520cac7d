"""Discretized test states: localized wavefunctions on a uniform grid.

States are normalized complex amplitude arrays whose magnitude is numerically
negligible near the grid edges, so transforms that assume the amplitude
vanishes outside the grid interior are valid.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DegeneracyError, DomainError, NumericalIntegrityError
from .grids import Grid1D, make_grid

NORM_TOL = 1e-9
EDGE_TOL = 1e-12
EDGE_FRACTION = 0.05
MAX_FOCK = 20


@dataclass(frozen=True)
class WaveFunction:
    """Unit-norm amplitudes on a grid, with hbar fixing the length/momentum scale.

    Invariants checked at construction: dx*sum(|psi|^2) = 1 within 1e-9, and
    |psi| < 1e-12 on the outer 5% of grid points on each side.
    """

    grid: Grid1D
    amplitudes: np.ndarray
    hbar: float

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=complex)
        if amps.shape != (self.grid.n_points,):
            raise DomainError(
                f"amplitude array has shape {amps.shape}, expected ({self.grid.n_points},)"
            )
        if not np.all(np.isfinite(amps.real)) or not np.all(np.isfinite(amps.imag)):
            raise DomainError("amplitudes must be finite")
        if not (np.isfinite(self.hbar) and self.hbar > 0):
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        object.__setattr__(self, "amplitudes", amps)
        amps.setflags(write=False)

        norm = self.norm
        if abs(norm - 1.0) > NORM_TOL:
            raise DomainError(f"state is not normalized: L2 norm = {norm!r}")
        edge = int(EDGE_FRACTION * self.grid.n_points)
        edge_amp = max(np.abs(amps[:edge]).max(), np.abs(amps[-edge:]).max())
        if edge_amp >= EDGE_TOL:
            raise DomainError(
                f"state amplitude {edge_amp:.3e} at the grid edges exceeds {EDGE_TOL:.0e}; "
                "the state does not fit this grid"
            )

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.grid.dx * np.sum(np.abs(self.amplitudes) ** 2)))

    def probability_values(self) -> np.ndarray:
        """|psi|^2 sampled on the grid."""
        return np.abs(self.amplitudes) ** 2


def _normalized(grid: Grid1D, values: np.ndarray, hbar: float) -> WaveFunction:
    norm = np.sqrt(grid.dx * np.sum(np.abs(values) ** 2))
    return WaveFunction(grid, values / norm, hbar)


def gaussian_state(grid: Grid1D, x0: float, p0: float, sigma: float, hbar: float) -> WaveFunction:
    """Minimum-uncertainty packet centered at (x0, p0) with position spread sigma.

    psi(x) = (2 pi sigma^2)^(-1/4) exp(-(x-x0)^2/(4 sigma^2) + i p0 x / hbar)
    """
    if sigma <= 0:
        raise DomainError(f"sigma must be positive, got {sigma}")
    if x0 - 8 * sigma < grid.x_min or x0 + 8 * sigma > grid.x_max:
        raise DomainError(
            f"gaussian support [{x0 - 8 * sigma}, {x0 + 8 * sigma}] overflows the grid"
        )
    x = grid.points
    values = (2 * np.pi * sigma**2) ** (-0.25) * np.exp(
        -((x - x0) ** 2) / (4 * sigma**2) + 1j * p0 * x / hbar
    )
    return _normalized(grid, values, hbar)


def _hermite_functions(u: np.ndarray, n: int) -> np.ndarray:
    """n-th normalized Hermite function via the stable two-term recurrence."""
    h_prev = np.pi ** (-0.25) * np.exp(-u * u / 2)
    if n == 0:
        return h_prev
    h_cur = np.sqrt(2.0) * u * h_prev
    for k in range(2, n + 1):
        h_prev, h_cur = h_cur, np.sqrt(2.0 / k) * u * h_cur - np.sqrt((k - 1.0) / k) * h_prev
    return h_cur


def fock_state(grid: Grid1D, n: int, hbar: float) -> WaveFunction:
    """n-th oscillator eigenstate (unit mass and frequency)."""
    if not isinstance(n, (int, np.integer)) or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    if n > MAX_FOCK:
        raise DomainError(f"n = {n} exceeds the supported maximum {MAX_FOCK}")
    u = grid.points / np.sqrt(hbar)
    values = _hermite_functions(u, int(n)) / hbar**0.25
    try:
        return _normalized(grid, values.astype(complex), hbar)
    except DomainError as exc:
        raise DomainError(f"fock state n={n} does not fit the grid: {exc}") from exc


def superpose(psi1: WaveFunction, psi2: WaveFunction, c1: complex, c2: complex) -> WaveFunction:
    """Normalized c1*psi1 + c2*psi2; the inputs must share grid and hbar."""
    _require_same_grid(psi1, psi2)
    values = c1 * psi1.amplitudes + c2 * psi2.amplitudes
    norm = np.sqrt(psi1.grid.dx * np.sum(np.abs(values) ** 2))
    if norm < 1e-6:
        raise DegeneracyError(
            f"superposition is numerically zero (norm {norm:.3e}); coefficients cancel"
        )
    return WaveFunction(psi1.grid, values / norm, psi1.hbar)


def inner_product(psi1: WaveFunction, psi2: WaveFunction) -> complex:
    """Discrete L2 inner product dx * sum(conj(psi1) * psi2)."""
    _require_same_grid(psi1, psi2)
    return complex(psi1.grid.dx * np.vdot(psi1.amplitudes, psi2.amplitudes))


def fourier_state(psi: WaveFunction) -> WaveFunction:
    """Momentum representation on the conjugate grid [-pi*hbar/dx, pi*hbar/dx).

    psihat(p) = (2 pi hbar)^(-1/2) * integral psi(x) exp(-i p x / hbar) dx,
    evaluated by FFT with the grid-offset phases applied exactly.
    """
    grid, hbar = psi.grid, psi.hbar
    n, dx = grid.n_points, grid.dx
    dp = 2 * np.pi * hbar / (n * dx)
    p = (np.arange(n) - n // 2) * dp
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    transformed = (
        dx
        / np.sqrt(2 * np.pi * hbar)
        * np.exp(-1j * p * grid.x_min / hbar)
        * np.fft.fft(psi.amplitudes * signs)
    )
    norm = np.sqrt(dp * np.sum(np.abs(transformed) ** 2))
    if abs(norm - 1.0) > NORM_TOL:
        raise NumericalIntegrityError(f"fourier transform lost unitarity: norm {norm!r}")
    p_grid = Grid1D(float(-(n // 2) * dp), float((n - n // 2) * dp), n)
    return WaveFunction(p_grid, transformed / norm, hbar)


def _require_same_grid(psi1: WaveFunction, psi2: WaveFunction) -> None:
    if not psi1.grid.close_to(psi2.grid) or psi1.hbar != psi2.hbar:
        raise DomainError("states live on different grids (or different hbar)")


DEFAULT_GAUSSCAT_SIGMA = 0.75


def state_from_spec(spec: str, grid: Grid1D, hbar: float) -> WaveFunction:
    """Build a catalog state from a fixture descriptor.

    Formats: "gauss:x0,p0,sigma", "fock:n", "fockcat:n1,n2" (default 0,1) and
    "gausscat:x0[,sigma]" (mirror-image pair of gaussians at +-x0).
    """
    name, _, argstr = spec.partition(":")
    args = [a for a in argstr.split(",") if a] if argstr else []
    try:
        if name == "gauss":
            if len(args) != 3:
                raise ConfigurationError(f"gauss takes x0,p0,sigma: {spec!r}")
            x0, p0, sigma = (float(a) for a in args)
            return gaussian_state(grid, x0, p0, sigma, hbar)
        if name == "fock":
            if len(args) != 1:
                raise ConfigurationError(f"fock takes one index: {spec!r}")
            return fock_state(grid, int(args[0]), hbar)
        if name == "fockcat":
            if args and len(args) != 2:
                raise ConfigurationError(f"fockcat takes two indices: {spec!r}")
            n1, n2 = (int(a) for a in args) if args else (0, 1)
            return superpose(fock_state(grid, n1, hbar), fock_state(grid, n2, hbar), 1.0, 1.0)
        if name == "gausscat":
            if not 1 <= len(args) <= 2:
                raise ConfigurationError(f"gausscat takes x0[,sigma]: {spec!r}")
            x0 = float(args[0])
            sigma = float(args[1]) if len(args) == 2 else DEFAULT_GAUSSCAT_SIGMA
            return superpose(
                gaussian_state(grid, x0, 0.0, sigma, hbar),
                gaussian_state(grid, -x0, 0.0, sigma, hbar),
                1.0,
                1.0,
            )
    except ValueError as exc:
        raise ConfigurationError(f"unparseable fixture spec {spec!r}: {exc}") from exc
    raise ConfigurationError(f"unknown fixture {name!r} in spec {spec!r}")


def write_state_csv(psi: WaveFunction, path) -> None:
    """Dump as CSV rows x,re_psi,im_psi with 17 significant digits."""
    x = psi.grid.points
    with open(path, "w", newline="") as fh:
        fh.write("x,re_psi,im_psi\n")
        for xi, amp in zip(x, psi.amplitudes):
            fh.write(f"{xi:.17g},{amp.real:.17g},{amp.imag:.17g}\n")


__all__ = [
    "WaveFunction",
    "gaussian_state",
    "fock_state",
    "superpose",
    "inner_product",
    "fourier_state",
    "state_from_spec",
    "write_state_csv",
    "make_grid",
]
