"""Filament fields, bispinor assembly, and the end-to-end residual checks."""

import cmath
import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psdirac import bessel_algebra as ba
from psdirac import fields_solution as fs
from psdirac.errors import DomainError, KinematicsError, ParameterError, StencilError
from psdirac.spectra import SpectrumParams, quantized_kappa, relativistic_energy
from psdirac.susy_radial import excited_state

PARAMS = SpectrumParams(m=1.0, g=2.0, mu0=0.5, omega=1.0, L=7.0)  # lambda_tilde = 1


def coeff_map(e):
    return {(t.power, t.kind, t.scale): t.coeff for t in e.terms}


def assert_expr_close(actual, expected, rel=5e-15):
    # same canonical structure, coefficients to within rounding-order noise
    got, want = coeff_map(actual), coeff_map(expected)
    assert got.keys() == want.keys()
    for key, c in want.items():
        assert got[key] == pytest.approx(c, rel=rel, abs=0.0)


# ---------------------------------------------------------------- fields


def test_field_example_unit_point():
    fp = fs.field_strengths(1.0, 1.0, 0.0)
    assert fp.E_vec == (1.0, 0.0, 0.0)
    assert fp.B_vec == (0.0, 1.0, 0.0)


def test_field_zero_coupling_gives_zero_fields():
    fp = fs.field_strengths(0.0, 0.7, -0.4)
    assert fp.E_vec == (0.0, 0.0, 0.0)
    assert fp.B_vec == (0.0, -0.0, 0.0) or fp.B_vec == (0.0, 0.0, 0.0)


def test_field_invariants_exact_at_random_points():
    rng = np.random.default_rng(420)
    for _ in range(100):
        x1, x2 = rng.uniform(-5.0, 5.0, size=2)
        omega = rng.uniform(-3.0, 3.0)
        if x1 == 0.0 and x2 == 0.0:
            continue
        fp = fs.field_strengths(omega, x1, x2)
        # algebraic cancellation is exact in floating point here
        assert fp.invariant_difference() == 0.0
        assert fp.invariant_dot() == 0.0
        assert fp.E_vec[2] == 0.0 and fp.B_vec[2] == 0.0


def test_field_magnitude_decays_inversely():
    near = fs.field_strengths(2.0, 0.5, 0.0)
    far = fs.field_strengths(2.0, 5.0, 0.0)
    assert math.hypot(*near.E_vec) == pytest.approx(2.0 / 0.5, rel=1e-15)
    assert math.hypot(*far.E_vec) == pytest.approx(2.0 / 5.0, rel=1e-15)


def test_field_singular_points_rejected():
    with pytest.raises(DomainError):
        fs.field_strengths(1.0, 0.0, 0.0)
    with pytest.raises(DomainError):
        fs.field_strengths(1.0, math.nan, 1.0)
    with pytest.raises(DomainError):
        fs.field_strengths(1.0, math.inf, 1.0)


@settings(max_examples=150, deadline=None)
@given(
    omega=st.floats(-1e3, 1e3, allow_nan=False),
    x1=st.floats(-1e3, 1e3, allow_nan=False),
    x2=st.floats(-1e3, 1e3, allow_nan=False),
)
def test_field_invariants_exact_property(omega, x1, x2):
    if x1 * x1 + x2 * x2 < 1e-6:
        return
    fp = fs.field_strengths(omega, x1, x2)
    assert fp.invariant_difference() == 0.0
    assert fp.invariant_dot() == 0.0


# ------------------------------------------------------- gamma matrices


def test_clifford_relations_exact():
    eye = np.eye(4, dtype=complex)
    for mu in range(4):
        for nu in range(4):
            anti = fs.GAMMA[mu] @ fs.GAMMA[nu] + fs.GAMMA[nu] @ fs.GAMMA[mu]
            assert np.array_equal(anti, 2.0 * fs.METRIC[mu, nu] * eye)


def test_reflection_matrix_block_structure():
    s2 = np.array([[0, -1j], [1j, 0]])
    expected = np.zeros((4, 4), dtype=complex)
    expected[:2, :2] = s2
    expected[2:, 2:] = s2
    assert np.array_equal(fs.REFLECTION_MATRIX, expected)


# -------------------------------------------------------- eta components


def test_eta_explicit_ground_block():
    m, E, kappa, lt = 1.0, 1.25, 0.3, 0.8
    ratio = m / (E - kappa)
    for k in range(4):
        width = Fraction(2 * k + 1)
        eta1, eta2 = fs.eta_components(excited_state(0, k), m, E, kappa, lt)
        c = lt / (2 * k + 1) + ratio
        expected1 = ba.canonicalize(
            [ba.term(c, k + 1, 1, width), ba.term(-lt * (2 * k + 1), k, 0, width)]
        )
        expected2 = ba.canonicalize([ba.term(-c, k + 1, 0, width)])
        assert_expr_close(eta1, expected1)
        assert_expr_close(eta2, expected2)


def test_eta_first_excited_block():
    # coefficients for (n=1, k=0); the last two are pinned from the ladder
    # recurrence, which the finite-difference residual checks validate
    # independently
    m, E, kappa, lt = 1.0, 1.4, 0.55, 0.9
    ratio = m / (E - kappa)
    eta1, eta2 = fs.eta_components(excited_state(1, 0), m, E, kappa, lt)
    w = Fraction(3)
    expected1 = ba.canonicalize(
        [
            ba.term(3.0 * lt, 0, 0, w),
            ba.term((lt / 3.0 + ratio) * 4.0 / 3.0, 2, 0, w),
            ba.term(-(lt * 7.0 / 3.0 + ratio), 1, 1, w),
        ]
    )
    expected2 = ba.canonicalize(
        [
            ba.term(3.0 * lt + 3.0 * ratio, 1, 0, w),
            ba.term(-(lt * 4.0 / 9.0 + ratio * 4.0 / 3.0), 2, 1, w),
        ]
    )
    assert_expr_close(eta1, expected1)
    assert_expr_close(eta2, expected2)


def test_eta_requires_subluminal_kinematics():
    state = excited_state(0, 0)
    with pytest.raises(KinematicsError):
        fs.eta_components(state, 1.0, 0.5, 0.5, 1.0)
    with pytest.raises(KinematicsError):
        fs.eta_components(state, 1.0, 0.2, 0.5, 1.0)


def test_eta_free_limit_is_proportional_mapping():
    m, E, kappa, lt = 1.0, 1.2, 0.4, 1e-9
    ratio = m / (E - kappa)
    for n, k in [(0, 0), (0, 2), (1, 1)]:
        state = excited_state(n, k)
        eta1, eta2 = fs.eta_components(state, m, E, kappa, lt)
        for r in (0.5, 2.0, 7.0):
            assert ba.evaluate(eta1, r) == pytest.approx(ratio * ba.evaluate(state.phi1, r), rel=1e-7)
            assert ba.evaluate(eta2, r) == pytest.approx(ratio * ba.evaluate(state.phi2, r), rel=1e-7)


# --------------------------------------------------------------- assembly


def test_assemble_consistent_kinematics():
    sol = fs.assemble_bispinor(PARAMS, 1, 1, 2)
    assert sol.N == 5
    assert sol.kappa == quantized_kappa(PARAMS.L, 2)
    assert sol.E == relativistic_energy(PARAMS.m, 1.0, sol.kappa, 5)
    assert sol.scale_factor == pytest.approx((sol.E - sol.kappa) * 1.0, rel=1e-15)
    assert sol.prefactor > 0.0
    assert sol.angular_momenta == (0.5, 1.5, 0.5, 1.5)


def test_assemble_rejects_bad_inputs():
    with pytest.raises(DomainError):
        fs.assemble_bispinor(PARAMS, -1, 0, 0)
    with pytest.raises(DomainError):
        fs.assemble_bispinor(PARAMS, 0, -2, 0)
    off = SpectrumParams(m=1.0, g=2.0, mu0=0.5, omega=0.0, L=7.0)
    with pytest.raises(ParameterError):
        fs.assemble_bispinor(off, 0, 0, 0)
    flipped = SpectrumParams(m=1.0, g=2.0, mu0=0.5, omega=-1.0, L=7.0)
    with pytest.raises(ParameterError):
        fs.assemble_bispinor(flipped, 0, 0, 0)


def test_solution_invariant_validation():
    sol = fs.assemble_bispinor(PARAMS, 0, 1, 0)
    with pytest.raises(KinematicsError):
        dataclasses.replace(sol, kappa=sol.E + 1.0)
    with pytest.raises(DomainError):
        dataclasses.replace(sol, N=7)
    with pytest.raises(DomainError):
        dataclasses.replace(sol, scale_factor=-1.0)


def test_value_components_finite_and_decaying():
    for k in (1, 2):
        sol = fs.assemble_bispinor(PARAMS, 0, k, 1)
        mid = np.abs(sol.value_at(0.2, 2.0 / sol.scale_factor, 0.0, 0.5))
        assert np.all(np.isfinite(mid)) and np.max(mid) > 0.0
        # slowest near-axis component goes like sqrt(r) log r, so the
        # approach to zero is gentle; check the level and the trend
        near = np.abs(sol.value_at(0.2, 1e-5 / sol.scale_factor, 0.0, 0.5))
        nearer = np.abs(sol.value_at(0.2, 1e-8 / sol.scale_factor, 0.0, 0.5))
        far = np.abs(sol.value_at(0.2, 60.0 * sol.N / sol.scale_factor, 0.0, 0.5))
        assert np.max(near) < 0.05 * np.max(mid)
        assert np.max(nearer) < 0.1 * np.max(near)
        assert np.max(far) < 1e-8 * np.max(mid)


def test_value_axis_profile_lowest_sector():
    # the k = 0 lower-first component approaches a constant radial factor
    # at the axis, so |psi| grows like r^(-1/2) there while the density
    # integral stays finite
    sol = fs.assemble_bispinor(PARAMS, 0, 0, 0)
    r = 1e-4
    value = abs(sol.value_at(0.0, r / sol.scale_factor, 0.0, 0.0)[2])
    assert value * math.sqrt(r) / sol.prefactor == pytest.approx(1.0, rel=5e-3)


def test_value_phase_factors_pin_sign_convention():
    sol = fs.assemble_bispinor(PARAMS, 0, 1, 2)
    base = sol.value_at(0.0, 1.3, 0.4, 0.0)
    shifted_t = sol.value_at(0.7, 1.3, 0.4, 0.0)
    shifted_z = sol.value_at(0.0, 1.3, 0.4, 1.1)
    assert shifted_t == pytest.approx(base * cmath.exp(-1j * sol.E * 0.7), rel=1e-12)
    assert shifted_z == pytest.approx(base * cmath.exp(-1j * sol.kappa * 1.1), rel=1e-12)


def test_value_branch_reference_keeps_half_integer_phases_continuous():
    sol = fs.assemble_bispinor(PARAMS, 0, 1, 0)
    delta = 1e-9
    above = sol.value_at(0.0, -1.5, +delta, 0.0, branch_ref=math.pi)
    below = sol.value_at(0.0, -1.5, -delta, 0.0, branch_ref=math.pi)
    assert np.max(np.abs(above - below)) < 1e-7
    # without a branch reference the angle jumps by 2 pi and every
    # half-integer phase flips sign
    raw_below = sol.value_at(0.0, -1.5, -delta, 0.0)
    assert np.max(np.abs(raw_below + below)) < 1e-12 * np.max(np.abs(below))


def test_value_rejects_filament():
    sol = fs.assemble_bispinor(PARAMS, 0, 0, 0)
    with pytest.raises(DomainError):
        sol.value_at(0.0, 0.0, 0.0, 1.0)


# ---------------------------------------------------------- dirac residual


def test_residual_second_order_stencil_ratio():
    sol = fs.assemble_bispinor(PARAMS, 0, 0, 0)
    point = (0.3, 1.1, -0.7, 0.25)
    coarse = fs.dirac_residual(sol, PARAMS, point, 1e-4)
    fine = fs.dirac_residual(sol, PARAMS, point, 5e-5)
    assert coarse / fine == pytest.approx(4.0, abs=0.4)


def test_residual_extrapolated_below_contract():
    cases = [(0, 0, 0), (1, 1, 2), (0, 2, -1)]
    for n, k, ntilde in cases:
        sol = fs.assemble_bispinor(PARAMS, n, k, ntilde)
        for point in [(0.3, 1.1, -0.7, 0.25), (0.0, -0.6, 1.4, 2.0)]:
            assert fs.dirac_residual_extrapolated(sol, PARAMS, point) < 1e-6


def test_residual_free_wave_same_order():
    free_params = SpectrumParams(m=1.3, g=2.0, mu0=0.5, omega=0.0, L=7.0)
    wave = fs.FreePlaneWave(m=1.3, kappa=0.6, w1=0.8 + 0.1j, w2=-0.3 + 0.55j, L=7.0)
    point = (0.2, 0.9, 0.4, -1.0)
    coarse = fs.dirac_residual(wave, free_params, point, 1e-4)
    fine = fs.dirac_residual(wave, free_params, point, 5e-5)
    assert coarse / fine == pytest.approx(4.0, abs=0.4)
    assert fs.dirac_residual_extrapolated(wave, free_params, point) < 1e-9


def test_residual_detects_wrong_energy():
    sol = fs.assemble_bispinor(PARAMS, 0, 1, 0)
    off = dataclasses.replace(sol, E=sol.E * (1.0 + 1e-4))
    assert fs.dirac_residual_extrapolated(off, PARAMS, (0.3, 1.1, -0.7, 0.25)) > 1e-6


def test_residual_stencil_guard():
    sol = fs.assemble_bispinor(PARAMS, 0, 0, 0)
    with pytest.raises(StencilError):
        fs.dirac_residual(sol, PARAMS, (0.0, 5e-4, 0.0, 0.0), 1e-4)
    with pytest.raises(DomainError):
        fs.dirac_residual(sol, PARAMS, (0.0, 1.0, 0.0, 0.0), -1e-4)


# ---------------------------------------------------------- reduced system


def test_reduced_system_rows_vanish():
    for n, k in [(0, 0), (1, 0), (0, 2), (2, 1)]:
        sol = fs.assemble_bispinor(PARAMS, n, k, 1)
        worst = max(fs.reduced_system_residual(sol, r) for r in (0.4, 1.0, 3.0, 8.0))
        assert worst < 1e-7


def test_reduced_system_detects_inconsistent_upper_pair():
    sol = fs.assemble_bispinor(PARAMS, 1, 0, 1)
    bad = dataclasses.replace(sol, eta2=ba.combine(sol.eta2, sol.phi1, 1.0, 0.05))
    assert fs.reduced_system_residual(bad, 2.0) > 1e-3


def test_reduced_system_guards():
    sol = fs.assemble_bispinor(PARAMS, 0, 0, 0)
    with pytest.raises(DomainError):
        fs.reduced_system_residual(sol, -1.0)
    with pytest.raises(StencilError):
        fs.reduced_system_residual(sol, 1e-5, 1e-5)


# ----------------------------------------------------------------- density


def test_density_nonnegative_and_matches_component_sum():
    sol = fs.assemble_bispinor(PARAMS, 1, 1, 1)
    rng = np.random.default_rng(87)
    for _ in range(200):
        x1, x2 = rng.uniform(-8.0, 8.0, size=2)
        if x1 * x1 + x2 * x2 < 1e-4:
            continue
        dens = fs.probability_density(sol, x1, x2)
        assert dens >= 0.0
    for x1, x2 in [(0.5, 0.2), (-2.0, 1.0), (4.0, -3.0)]:
        from_values = sum(abs(v) ** 2 for v in sol.value_at(0.37, x1, x2, -1.4))
        assert fs.probability_density(sol, x1, x2) == pytest.approx(from_values, rel=1e-12)


def test_density_rejects_filament():
    sol = fs.assemble_bispinor(PARAMS, 0, 0, 0)
    with pytest.raises(DomainError):
        fs.probability_density(sol, 0.0, 0.0)


def test_total_probability_is_unity():
    for n, k, ntilde in [(0, 0, 0), (1, 0, 1), (0, 1, -2)]:
        sol = fs.assemble_bispinor(PARAMS, n, k, ntilde)
        assert abs(fs.total_probability(sol, PARAMS.L) - 1.0) < 1e-6


def test_density_deviation_scales_linearly_with_coupling():
    # in the weak-coupling regime the density shape approaches the
    # lower-pair-only profile; the normalized deviation is dominated by a
    # cross term linear in the coupling, so halving it halves the deviation
    def shape_deviation(lam_t, n, k):
        params = SpectrumParams(m=1.0, g=2.0, mu0=0.5, omega=lam_t, L=7.0)
        sol = fs.assemble_bispinor(params, n, k, 0)
        rs = np.linspace(0.05 * sol.N, 6.0 * sol.N, 160)
        full = np.array([fs.probability_density(sol, r / sol.scale_factor, 0.0) for r in rs])
        phi_only = np.array(
            [(ba.evaluate(sol.phi1, r) ** 2 + ba.evaluate(sol.phi2, r) ** 2) / r for r in rs]
        )
        full /= full.sum()
        phi_only /= phi_only.sum()
        return float(np.abs(full - phi_only).sum())

    for n, k in [(0, 1), (1, 0)]:
        base = shape_deviation(1e-2, n, k)
        halved = shape_deviation(5e-3, n, k)
        assert base < 0.05
        assert 0.45 < halved / base < 0.55


# -------------------------------------------------------------- reflection


def test_reflection_flips_sector_and_phases():
    sol = fs.assemble_bispinor(PARAMS, 0, 1, 0)
    mirrored = fs.reflect_solution(sol)
    assert mirrored.k == -1
    # regression: the worked-out matrix action fixes this phase pattern
    assert mirrored.angular_momenta == (-1.5, -0.5, -1.5, -0.5)
    assert mirrored.E == sol.E and mirrored.N == sol.N
    sign = -1.0
    assert mirrored.eta1.terms == ba.scaled(sol.eta2, sign).terms
    assert mirrored.eta2.terms == ba.scaled(sol.eta1, sign).terms
    assert mirrored.phi1.terms == ba.scaled(sol.phi2, sign).terms
    assert mirrored.phi2.terms == ba.scaled(sol.phi1, sign).terms


def test_reflection_even_sector_keeps_sign():
    sol = fs.assemble_bispinor(PARAMS, 0, 2, 1)
    mirrored = fs.reflect_solution(sol)
    assert mirrored.k == -2
    assert mirrored.phi1.terms == sol.phi2.terms


def test_reflection_applied_twice_returns_original():
    for n, k in [(0, 1), (1, 0), (0, 2)]:
        sol = fs.assemble_bispinor(PARAMS, n, k, 1)
        twice = fs.reflect_solution(fs.reflect_solution(sol))
        assert twice.k == sol.k and twice.E == sol.E
        for name in ("eta1", "eta2", "phi1", "phi2"):
            assert getattr(twice, name).terms == getattr(sol, name).terms


def test_reflected_solution_satisfies_equation():
    for n, k in [(0, 1), (0, 2)]:
        sol = fs.assemble_bispinor(PARAMS, n, k, 2)
        mirrored = fs.reflect_solution(sol)
        for point in [(0.1, 0.8, 0.5, 0.3), (0.0, -1.2, 0.9, -0.6)]:
            assert fs.dirac_residual_extrapolated(mirrored, PARAMS, point) < 1e-6
