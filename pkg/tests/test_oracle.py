"""Finite-difference discretization and banded eigensolver tests."""

import math

import numpy as np
import pytest

from psdirac import bessel_algebra as ba
from psdirac import oracle as oc
from psdirac import susy_radial as sr
from psdirac.errors import GridError, ParameterError, PotentialError

from conftest import SIX_STATES


# ------------------------------------------------------------------- grid


def test_grid_validation():
    with pytest.raises(GridError):
        oc.RadialGrid(h=0.0, points=100)
    with pytest.raises(GridError):
        oc.RadialGrid(h=-0.1, points=100)
    with pytest.raises(GridError):
        oc.RadialGrid(h=0.1, points=9)
    with pytest.raises(GridError):
        oc.RadialGrid.for_r_max(0.1, -5.0)


def test_grid_nodes_are_cell_centered():
    g = oc.RadialGrid(h=0.5, points=10)
    assert g.nodes[0] == 0.25
    assert g.nodes[-1] == 4.75
    assert g.r_wall == 5.0


# -------------------------------------------------------------- potentials


def test_potential_validation():
    with pytest.raises(PotentialError):
        oc.ReducedPotential(kind="bogus")
    with pytest.raises(PotentialError):
        oc.ReducedPotential(kind=oc.CUSTOM)  # missing callables


def test_oversingular_custom_potential_rejected():
    cubic = oc.ReducedPotential.custom(lambda r: 1.0 / r**2, lambda r: -2.0 / r**3)
    with pytest.raises(PotentialError):
        oc.discretize(0, cubic, oc.RadialGrid(h=0.01, points=1000))


def test_nonfinite_custom_potential_rejected():
    bad = oc.ReducedPotential.custom(lambda r: math.nan, lambda r: 0.0, charge=1.0)
    with pytest.raises(PotentialError):
        oc.discretize(0, bad, oc.RadialGrid(h=0.1, points=100))


# ------------------------------------------------------------- discretize


def test_matrix_exactly_symmetric():
    hm = oc.discretize(1, oc.ReducedPotential.ps_log(), oc.RadialGrid(h=0.1, points=60))
    a = hm.to_dense()
    assert np.max(np.abs(a - a.T)) == 0.0
    assert hm.dimension == 120
    assert hm.bandwidth == 2


def test_zero_potential_has_no_bound_states():
    hm = oc.discretize(0, oc.ReducedPotential.zero(), oc.RadialGrid.for_r_max(0.05, 40.0))
    lowest = oc.lowest_eigenvalues(hm, 1)[0]
    assert lowest > 0.0


def test_log_filament_ground_state_extrapolates_to_minus_one():
    vals = []
    for h in (0.02, 0.01, 0.005):
        grid = oc.RadialGrid.for_r_max(h, 40.0)
        vals.append(oc.lowest_eigenvalues(oc.discretize(0, oc.ReducedPotential.ps_log(), grid), 1)[0])
    assert oc.richardson_extrapolate(vals) == pytest.approx(-1.0, abs=1e-6)


# ------------------------------------------------------------ eigenvalues


def test_first_three_levels_in_sector_zero():
    grid = oc.RadialGrid.for_r_max(0.02, 200.0)
    hm = oc.discretize(0, oc.ReducedPotential.ps_log(), grid)
    vals = oc.lowest_eigenvalues(hm, 3)
    for got, want in zip(vals, (-1.0, -1.0 / 9.0, -1.0 / 25.0)):
        assert abs(got - want) < 5e-3


def test_sector_lowest_tracks_principal_number():
    for k, want in ((1, -1.0 / 9.0), (2, -1.0 / 25.0)):
        grid = oc.RadialGrid.for_r_max(0.02, 40.0 * (2 * k + 1))
        hm = oc.discretize(k, oc.ReducedPotential.ps_log(), grid)
        assert abs(oc.lowest_eigenvalues(hm, 1)[0] - want) < 5e-3


def test_identity_matrix_eigenvalues():
    dim = 24
    bands = np.zeros((3, dim))
    bands[2] = 1.0
    hm = oc.DiscretizedHamiltonian(
        bands=bands, dimension=dim, bandwidth=2, k=0, grid=oc.RadialGrid(h=1.0, points=12)
    )
    assert np.allclose(oc.lowest_eigenvalues(hm, 5), np.ones(5), rtol=0, atol=1e-12)


def test_count_validation():
    hm = oc.discretize(0, oc.ReducedPotential.ps_log(), oc.RadialGrid(h=0.1, points=50))
    with pytest.raises(ParameterError):
        oc.lowest_eigenvalues(hm, 0)
    with pytest.raises(ParameterError):
        oc.lowest_eigenvalues(hm, 101)


def test_variational_monotonicity_in_wall_position():
    # enlarging the box can only lower eigenvalues (outer wall is a hard cut)
    h = 0.02
    small = oc.lowest_eigenvalues(
        oc.discretize(0, oc.ReducedPotential.ps_log(), oc.RadialGrid.for_r_max(h, 15.0)), 2
    )
    big = oc.lowest_eigenvalues(
        oc.discretize(0, oc.ReducedPotential.ps_log(), oc.RadialGrid.for_r_max(h, 30.0)), 2
    )
    assert small[0] >= big[0]
    assert small[1] > big[1]  # the N = 3 state still feels the 15-unit wall


def test_coupling_sign_flip_leaves_spectrum_unchanged():
    grid = oc.RadialGrid.for_r_max(0.02, 40.0)
    plus = oc.lowest_eigenvalues(
        oc.discretize(0, oc.ReducedPotential.ps_log(coupling_ratio=1.0), grid), 3
    )
    minus = oc.lowest_eigenvalues(
        oc.discretize(0, oc.ReducedPotential.ps_log(coupling_ratio=-1.0), grid), 3
    )
    assert np.max(np.abs(plus - minus)) < 1e-12


def test_inverse_radius_exploratory_runs():
    grid = oc.RadialGrid.for_r_max(0.02, 60.0)
    hm = oc.discretize(0, oc.ReducedPotential.inverse_radius(1.0), grid)
    vals = oc.lowest_eigenvalues(hm, 3)
    assert np.all(np.isfinite(vals))
    assert np.all(np.diff(vals) >= 0.0)


# ------------------------------------------------------------ eigenvectors


def test_eigenvector_matches_analytic_ground_state():
    grid = oc.RadialGrid.for_r_max(0.01, 40.0)
    hm = oc.discretize(0, oc.ReducedPotential.ps_log(), grid)
    value = oc.lowest_eigenvalues(hm, 1)[0]
    c1, c2 = oc.eigenvector_for(hm, value)

    state = sr.normalize(sr.ground_state(0))
    root_h = math.sqrt(grid.h)
    ref1 = np.array([ba.evaluate(state.phi1, r) for r in grid.nodes]) * root_h
    ref2 = np.array([ba.evaluate(state.phi2, r) for r in grid.nodes]) * root_h
    assert np.max(np.abs(c1 - ref1)) < 5e-3
    assert np.max(np.abs(c2 - ref2)) < 5e-3


def test_eigenvector_residual_and_orthogonality():
    grid = oc.RadialGrid.for_r_max(0.02, 120.0)
    hm = oc.discretize(0, oc.ReducedPotential.ps_log(), grid)
    vals = oc.lowest_eigenvalues(hm, 2)
    vecs = []
    for value in vals:
        c1, c2 = oc.eigenvector_for(hm, value)
        v = np.ravel(np.column_stack([c1, c2]))
        vecs.append(v)
        assert abs(np.linalg.norm(v) - 1.0) < 1e-12
        assert np.linalg.norm(oc._apply_banded(hm, v) - value * v) < 1e-8
    assert abs(float(vecs[0] @ vecs[1])) < 1e-8


# ------------------------------------------------------------ convergence


def test_convergence_study_orders():
    grids = [oc.RadialGrid.for_r_max(h, 40.0) for h in (0.04, 0.02, 0.01)]
    res = oc.convergence_study(0, 0, grids)
    assert res.reliable
    assert abs(res.order - 2.0) <= 0.2
    grids3 = [oc.RadialGrid.for_r_max(h, 120.0) for h in (0.04, 0.02, 0.01)]
    res1 = oc.convergence_study(1, 0, grids3)
    assert res1.reliable
    assert abs(res1.order - 2.0) <= 0.2


def test_convergence_study_rejects_degenerate_grids():
    g = oc.RadialGrid.for_r_max(0.02, 40.0)
    with pytest.raises(GridError):
        oc.convergence_study(0, 0, [g, g, g])
    with pytest.raises(GridError):
        oc.convergence_study(0, 0, [g, g])


def test_richardson_recovers_quadratic_limit():
    limit, c = -1.0, 0.3
    values = [limit + c * h * h for h in (0.04, 0.02, 0.01)]
    assert oc.richardson_extrapolate(values) == pytest.approx(limit, abs=1e-15)
    assert oc.richardson_extrapolate(values[:2]) == pytest.approx(limit, abs=1e-15)
    with pytest.raises(ParameterError):
        oc.richardson_extrapolate([1.0])


def test_closed_form_agreement_low_levels(oracle_six_states):
    for n, k in SIX_STATES:
        if n + k > 2:
            continue
        res = oracle_six_states.results[(n, k)]
        target = -1.0 / (2 * (n + k) + 1) ** 2
        assert abs(res.extrapolated - target) < 1e-4


def test_level_five_degeneracy_across_sectors(oracle_six_states):
    for n, k in ((2, 0), (1, 1), (0, 2)):
        res = oracle_six_states.results[(n, k)]
        assert abs(res.eigenvalues[-1] + 1.0 / 25.0) < 1e-3
