import math

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import eval_hermite, factorial

from wignerbet import (
    ConfigurationError,
    DegeneracyError,
    DomainError,
    WaveFunction,
    fock_state,
    fourier_state,
    gaussian_state,
    inner_product,
    make_grid,
    state_from_spec,
    superpose,
)


# --- grids ---------------------------------------------------------------

def test_make_grid_spacing():
    g = make_grid(-10, 10, 512)
    assert g.dx == 20 / 512 == 0.0390625
    assert g.points[0] == -10
    assert np.isclose(g.points[-1], 10 - g.dx)


def test_make_grid_rejects_non_power_of_two():
    with pytest.raises(ConfigurationError):
        make_grid(-10, 10, 100)
    with pytest.raises(ConfigurationError):
        make_grid(-10, 10, 8)


def test_make_grid_rejects_empty_interval():
    with pytest.raises(ConfigurationError):
        make_grid(5, -5, 256)


# --- gaussian states -----------------------------------------------------

def test_gaussian_norm_and_peak(grid):
    psi = gaussian_state(grid, 0.0, 0.0, 1.0, 1.0)
    assert abs(psi.norm - 1.0) < 1e-9
    # closed form: |psi(0)|^2 = (2 pi sigma^2)^(-1/2)
    i0 = np.argmin(np.abs(grid.points))
    expected_peak = 1.0 / math.sqrt(2 * math.pi)
    assert abs(abs(psi.amplitudes[i0]) ** 2 - expected_peak) < 1e-12


def test_gaussian_density_matches_closed_form(grid):
    x0, sigma = 1.5, 0.8
    psi = gaussian_state(grid, x0, 0.7, sigma, 1.0)
    x = grid.points
    expected = (2 * math.pi * sigma**2) ** -0.5 * np.exp(-((x - x0) ** 2) / (2 * sigma**2))
    assert np.abs(psi.probability_values() - expected).max() < 1e-12


def test_gaussian_support_overflow_rejected():
    g = make_grid(-10, 10, 512)
    with pytest.raises(DomainError):
        gaussian_state(g, 9.9, 0.0, 1.0, 1.0)


# --- oscillator eigenstates ----------------------------------------------

def test_fock0_equals_ground_gaussian(grid):
    # two independent closed forms: Hermite recurrence vs gaussian formula
    f0 = fock_state(grid, 0, 1.0)
    g0 = gaussian_state(grid, 0.0, 0.0, math.sqrt(0.5), 1.0)
    assert np.abs(f0.amplitudes - g0.amplitudes).max() < 1e-9


def test_fock_against_scipy_hermite(grid):
    x = grid.points
    for n in range(6):
        psi = fock_state(grid, n, 1.0)
        norm = (2.0**n * factorial(n) * math.sqrt(math.pi)) ** -0.5
        expected = norm * eval_hermite(n, x) * np.exp(-x * x / 2)
        assert np.abs(psi.amplitudes - expected).max() < 1e-9, f"n={n}"


def test_fock1_vanishes_at_origin(grid):
    psi = fock_state(grid, 1, 1.0)
    i0 = np.argmin(np.abs(grid.points))
    assert abs(psi.amplitudes[i0]) < 1e-12


def test_fock2_normalized(grid):
    assert abs(fock_state(grid, 2, 1.0).norm - 1.0) < 1e-9


def test_fock_parity(grid):
    # grid points at index k >= 1 mirror to index n-k; x=x_min has no partner
    for n in (1, 2, 5):
        amps = fock_state(grid, n, 1.0).amplitudes
        mirrored = amps[1:][::-1]
        assert np.abs(amps[1:] - (-1.0) ** n * mirrored).max() < 1e-9


def test_fock_orthonormal(grid):
    states = [fock_state(grid, n, 1.0) for n in range(6)]
    for m in range(6):
        for n in range(6):
            ip = inner_product(states[m], states[n])
            assert abs(ip - (1.0 if m == n else 0.0)) < 1e-7


def test_fock01_orthogonality_quadrature_oracle():
    # independent continuum evaluation of <psi_0, psi_1>
    def integrand(x):
        h0 = math.pi**-0.25 * math.exp(-x * x / 2)
        h1 = math.sqrt(2.0) * x * h0
        return h0 * h1

    value, err = quad(integrand, -15, 15)
    assert abs(value) < 1e-12


def test_fock_index_cap(grid):
    with pytest.raises(DomainError):
        fock_state(grid, 21, 1.0)
    with pytest.raises(DomainError):
        fock_state(grid, -1, 1.0)


# --- superposition -------------------------------------------------------

def test_superpose_identity(grid):
    psi = fock_state(grid, 0, 1.0)
    out = superpose(psi, psi, 1.0, 0.0)
    assert np.abs(out.amplitudes - psi.amplitudes).max() < 1e-12


def test_superpose_fock_cat(grid):
    f0, f1 = fock_state(grid, 0, 1.0), fock_state(grid, 1, 1.0)
    cat = superpose(f0, f1, 1.0, 1.0)
    expected = (f0.amplitudes + f1.amplitudes) / math.sqrt(2.0)
    assert abs(cat.norm - 1.0) < 1e-9
    assert np.abs(cat.amplitudes - expected).max() < 1e-9


def test_superpose_cancellation(grid):
    psi = fock_state(grid, 0, 1.0)
    with pytest.raises(DegeneracyError):
        superpose(psi, psi, 1.0, -1.0)


def test_superpose_grid_mismatch(grid):
    other = make_grid(-12.0, 12.0, 512)
    with pytest.raises(DomainError):
        superpose(fock_state(grid, 0, 1.0), fock_state(other, 0, 1.0), 1.0, 1.0)


# --- inner product -------------------------------------------------------

def test_inner_product_normalization(catalog):
    for spec, psi in catalog.items():
        assert abs(inner_product(psi, psi) - 1.0) < 1e-9, spec


def test_inner_product_conjugate_symmetry(grid):
    a = gaussian_state(grid, 0.5, 1.0, 0.9, 1.0)
    b = fock_state(grid, 2, 1.0)
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)))


def test_inner_product_phase(grid):
    psi = fock_state(grid, 0, 1.0)
    rotated = superpose(psi, psi, 0.0, 1.0j)
    ip = inner_product(psi, rotated)
    assert abs(ip.real) < 1e-12
    assert abs(ip.imag - 1.0) < 1e-9


# --- momentum representation ---------------------------------------------

def test_fourier_gaussian_closed_form(grid):
    sigma, hbar = 1.0, 1.0
    psi = gaussian_state(grid, 0.0, 0.0, sigma, hbar)
    phat = fourier_state(psi)
    p = phat.grid.points
    # |psihat|^2 is gaussian with variance hbar^2/(4 sigma^2)
    var = hbar**2 / (4 * sigma**2)
    expected = (2 * math.pi * var) ** -0.5 * np.exp(-(p**2) / (2 * var))
    l1 = phat.grid.dx * np.abs(phat.probability_values() - expected).sum()
    assert l1 < 1e-4


def test_fourier_preserves_norm(catalog):
    for spec, psi in catalog.items():
        assert abs(fourier_state(psi).norm - 1.0) < 1e-9, spec


def test_fourier_modulus_translation_invariant(grid):
    base = np.abs(fourier_state(gaussian_state(grid, 0.0, 0.0, 0.7, 1.0)).amplitudes)
    moved = np.abs(fourier_state(gaussian_state(grid, 3.0, 0.0, 0.7, 1.0)).amplitudes)
    assert np.abs(base - moved).max() < 1e-9


def test_fourier_fourth_power_is_identity(grid):
    psi = gaussian_state(grid, 1.0, 0.5, 0.9, 1.0)
    out = psi
    for _ in range(4):
        out = fourier_state(out)
    assert out.grid.close_to(psi.grid, rtol=1e-9)
    assert np.abs(out.amplitudes - psi.amplitudes).max() < 1e-7


def test_fourier_momentum_window_scaling():
    g = make_grid(-12.0, 12.0, 512)
    psi = gaussian_state(g, 0.0, 0.0, 1.0, 2.0)
    phat = fourier_state(psi)
    assert np.isclose(phat.grid.x_max, math.pi * 2.0 / g.dx)


# --- invariants and fixture parsing --------------------------------------

def test_wavefunction_rejects_unnormalized(grid):
    values = np.zeros(grid.n_points, dtype=complex)
    values[grid.n_points // 2] = 1.0  # norm = sqrt(dx), not 1
    with pytest.raises(DomainError):
        WaveFunction(grid, values, 1.0)


def test_wavefunction_rejects_edge_support(grid):
    # normalized but concentrated at the grid edge
    values = np.zeros(grid.n_points, dtype=complex)
    values[2] = 1.0 / math.sqrt(grid.dx)
    with pytest.raises(DomainError):
        WaveFunction(grid, values, 1.0)


def test_catalog_specs_all_valid(catalog):
    for spec, psi in catalog.items():
        assert abs(psi.norm - 1.0) < 1e-9, spec


def test_state_from_spec_rejects_unknown(grid):
    with pytest.raises(ConfigurationError):
        state_from_spec("squeezed:1", grid, 1.0)
    with pytest.raises(ConfigurationError):
        state_from_spec("gauss:1", grid, 1.0)
    with pytest.raises(ConfigurationError):
        state_from_spec("fock:x", grid, 1.0)
