import math

import numpy as np
import pytest

from wignerbet import (
    NegativityError,
    SignedDensity1D,
    fourier_state,
    gaussian_state,
    l1_distance,
    make_grid,
    marginal_p,
    marginal_x,
    negative_volume,
    purity,
    to_probability,
    total_mass,
    wigner,
)

HBAR = 1.0

# Closed-form negative mass of the first excited state's phase-space density:
# the density is -(1/pi) (1 - 2 r^2) e^(-r^2), negative inside r < 1/sqrt(2),
# integrating to 2 e^(-1/2) - 1.
FIRST_EXCITED_NEGATIVE_MASS = 2 * math.exp(-0.5) - 1.0


def first_excited_phase_space_oracle():
    """Independent 2D midpoint quadrature of the closed form on a fine grid."""
    n = 2000
    lo, hi = -6.0, 6.0
    h = (hi - lo) / n
    c = lo + h / 2 + h * np.arange(n)
    r2 = np.add.outer(c**2, c**2)
    w = -(1.0 / math.pi) * (1.0 - 2.0 * r2) * np.exp(-r2)
    return float(-(h * h) * np.minimum(w, 0.0).sum())


def test_negative_mass_oracle_matches_closed_form():
    assert abs(first_excited_phase_space_oracle() - FIRST_EXCITED_NEGATIVE_MASS) < 1e-6


def test_value_at_origin_ground_state(wigner_catalog, grid):
    W = wigner_catalog["fock:0"]
    ix = grid.n_points // 2
    ip = W.p_grid.n_points // 2
    assert abs(W.values[ix, ip] - 1.0 / math.pi) < 1e-4


def test_value_at_origin_first_excited(wigner_catalog, grid):
    W = wigner_catalog["fock:1"]
    ix = grid.n_points // 2
    ip = W.p_grid.n_points // 2
    assert abs(W.values[ix, ip] - (-1.0 / math.pi)) < 1e-4


def test_ground_state_matches_closed_form_pointwise(wigner_catalog, grid):
    # sigma^2 = 1/2 packet: density is exp(-x^2 - p^2)/pi
    W = wigner(gaussian_state(grid, 0.0, 0.0, math.sqrt(0.5), HBAR))
    x = W.x_grid.points
    p = W.p_grid.points
    exact = np.exp(-np.add.outer(x**2, p**2)) / math.pi
    assert np.abs(W.values - exact).max() < 1e-10


def test_imag_residue_small(wigner_catalog):
    for spec, W in wigner_catalog.items():
        assert W.imag_residue < 1e-10, spec


def test_total_mass_one(wigner_catalog):
    for spec, W in wigner_catalog.items():
        assert abs(total_mass(W) - 1.0) < 1e-6, spec


def test_purity_pins_scale(wigner_catalog):
    target = 1.0 / (2 * math.pi * HBAR)
    for spec, W in wigner_catalog.items():
        assert abs(purity(W) - target) / target < 1e-3, spec


def test_marginal_x_matches_position_density(wigner_catalog, catalog):
    for spec, W in wigner_catalog.items():
        m = marginal_x(W)
        direct = catalog[spec].probability_values()
        l1 = m.grid.dx * np.abs(m.values - direct).sum()
        assert l1 < 1e-5, spec
        assert m.values.min() > -1e-8, spec
        assert abs(total_mass(m) - 1.0) < 1e-6, spec


def test_marginal_x_even_for_symmetric_states(wigner_catalog):
    for spec in ("fock:0", "fock:2", "gausscat:2,0.75"):
        v = marginal_x(wigner_catalog[spec]).values
        assert np.abs(v[1:] - v[1:][::-1]).max() < 1e-8, spec


def test_marginal_p_matches_momentum_density(wigner_catalog, catalog):
    for spec, W in wigner_catalog.items():
        m = marginal_p(W)
        phat = fourier_state(catalog[spec])
        reference = SignedDensity1D(phat.grid, phat.probability_values())
        assert l1_distance(reference, m) < 1e-4, spec
        assert abs(total_mass(m) - 1.0) < 1e-6, spec


def test_marginal_p_mean_tracks_momentum_boost(grid):
    p0 = 1.5
    W = wigner(gaussian_state(grid, 0.0, p0, 1.0, HBAR))
    m = marginal_p(W)
    mean = m.grid.dx * np.sum(m.grid.points * m.values)
    assert abs(mean - p0) < 1e-3


def test_negative_volume_gaussian_nonnegative(wigner_catalog):
    assert negative_volume(wigner_catalog["gauss:0,0,1"]) < 1e-8


def test_negative_volume_first_excited_pinned(wigner_catalog):
    nv = negative_volume(wigner_catalog["fock:1"])
    assert nv > 0.05
    assert abs(nv - FIRST_EXCITED_NEGATIVE_MASS) < 1e-3


def test_negativity_region_symmetric(wigner_catalog):
    W = wigner_catalog["fock:1"]
    mask = W.values < -1e-6
    assert mask.any()
    # parity in x (row 0 has no mirror partner) and in p
    assert np.array_equal(mask[1:], mask[1:][::-1])
    assert np.array_equal(mask[:, 1:], mask[:, 1:][:, ::-1])


def test_raw_slice_through_negative_region_fails_projection(wigner_catalog):
    W = wigner_catalog["fock:1"]
    ix = W.x_grid.n_points // 2  # x = 0 cuts straight through the dip
    slice_values = W.values[ix]
    d = SignedDensity1D(W.p_grid, slice_values)
    with pytest.raises(NegativityError):
        to_probability(d)


def test_oversample_validation(catalog):
    from wignerbet.errors import ConfigurationError

    with pytest.raises(ConfigurationError):
        wigner(catalog["fock:0"], oversample=3)
