"""Curvature operators, sector reductions, shooting, constraint slopes,
and constrained positivity."""

import numpy as np
import pytest

from mtmlab.conserved import lyapunov
from mtmlab.experiments import random_h1_perturbation
from mtmlab.grid import FieldState, Grid, quadrature
from mtmlab.soliton import (
    SolitonParams,
    eval_profile,
    eval_soliton,
    profile_derivative,
    zero_mode_fields,
)
from mtmlab.spectral import (
    SchrodingerProblem,
    apply_to_pair,
    block_diagonalize_check,
    build_hessian,
    build_schrodinger,
    build_sector_operator,
    constrained_min_eig,
    eigs_below_continuum,
    embed_conjugate_pair,
    generalized_mode_residual,
    hessian_quadratic_form,
    _prufer_zero_count,
    sigma_closed_form,
    sigma_index,
    sigma_profile_path,
    similarity_orthogonality_defect,
    spectral_grid,
    splitting_probe,
    stretched_grid,
    sturm_eigenvalues,
    sturm_shoot,
)

# smallest projected curvature eigenvalue at omega = 0, frozen on the
# automatic spectral grid (L = 22, N = 640)
CONSTRAINED_MARGIN_ZERO = 0.7350832488511114


class TestSectorOperators:
    def test_assembly_is_symmetric(self):
        g = spectral_grid(0.5)
        op = build_sector_operator(0.5, g, +1)
        assert op.pre_symmetry_defect < 1e-12
        assert op.continuum_edge == pytest.approx(0.75)

    @pytest.mark.parametrize("omega", [0.3, 0.5])
    def test_kernel_vectors(self, omega):
        g = spectral_grid(omega)
        up = profile_derivative(omega, g.x)
        u = eval_profile(omega, g)
        plus = build_sector_operator(omega, g, +1)
        minus = build_sector_operator(omega, g, -1)
        assert np.max(np.abs(plus.matrix @ embed_conjugate_pair(up))) < 1e-6
        assert np.max(np.abs(minus.matrix @ embed_conjugate_pair(u, anti=True))) < 1e-6

    def test_extra_kernels_at_zero_frequency(self):
        g = spectral_grid(0.0)
        u = eval_profile(0.0, g)
        up = profile_derivative(0.0, g.x)
        plus = build_sector_operator(0.0, g, +1)
        minus = build_sector_operator(0.0, g, -1)
        assert np.max(np.abs(plus.matrix @ embed_conjugate_pair(up, anti=True))) < 1e-6
        assert np.max(np.abs(minus.matrix @ embed_conjugate_pair(u))) < 1e-6

    def test_sign_argument(self):
        with pytest.raises(ValueError):
            build_sector_operator(0.3, spectral_grid(0.3), 0)


class TestIsolatedSpectrum:
    def test_minus_sector_at_positive_omega(self):
        g = spectral_grid(0.5)
        pairs = eigs_below_continuum(build_sector_operator(0.5, g, -1))
        assert len(pairs) == 2
        assert abs(pairs[0][0]) < 1e-6
        assert pairs[1][0] > 0.0

    def test_minus_sector_at_negative_omega(self):
        g = spectral_grid(-0.5)
        pairs = eigs_below_continuum(build_sector_operator(-0.5, g, -1))
        assert len(pairs) == 2
        assert pairs[0][0] < 0.0
        assert abs(pairs[1][0]) < 1e-6

    def test_plus_sector_small_positive_omega(self):
        g = spectral_grid(0.2)
        pairs = eigs_below_continuum(build_sector_operator(0.2, g, +1))
        assert len(pairs) == 2
        assert pairs[0][0] < 0.0
        assert abs(pairs[1][0]) < 1e-6


@pytest.fixture(scope="module")
def hessian_setup():
    omega = 0.4
    g = spectral_grid(omega)
    return omega, g, build_hessian(omega, g)


class TestHessian:

    def test_kernel_quadratic_forms(self, hessian_setup):
        omega, g, op = hessian_setup
        modes = zero_mode_fields(omega, g)
        for name in ("gauge", "translation"):
            a, b = modes[name][0], modes[name][1]
            assert abs(hessian_quadratic_form(op, a, b)) < 1e-6
            assert np.max(np.abs(apply_to_pair(op, a, b))) < 1e-6

    def test_quadratic_form_matches_second_difference(self, hessian_setup):
        omega, g, op = hessian_setup
        wu, wv = random_h1_perturbation(g, seed=5, size=1.0)
        form = hessian_quadratic_form(op, wu, wv)
        base = eval_soliton(SolitonParams(omega), g)

        def lam(eps: float) -> float:
            state = FieldState(g, base.u + eps * wu, base.v + eps * wv, 0.0)
            return lyapunov(state, omega)

        l0 = lam(0.0)

        def second(eps: float) -> float:
            return (lam(eps) - 2.0 * l0 + lam(-eps)) / eps**2

        rich = (4.0 * second(5e-4) - second(1e-3)) / 3.0
        assert abs(form - rich) / abs(rich) < 1e-4

    def test_block_diagonalization(self):
        assert block_diagonalize_check(0.3, Grid(25.0, 512)) < 1e-8
        assert similarity_orthogonality_defect() < 1e-12

    def test_block_defect_grid_independent(self):
        # the similarity identity is exact, not asymptotic
        defects = [block_diagonalize_check(0.3, Grid(25.0, n)) for n in (256, 384)]
        assert all(d < 1e-8 for d in defects)


class TestSchrodingerForms:
    def test_kernel_mode_difference_sector(self):
        pr = SchrodingerProblem("difference_sector", 0.5)
        zg = stretched_grid(0.5, spectral_grid(0.5))
        op = build_schrodinger(pr, zg)
        psi0, loc = pr.reference_mode(zg.x)
        assert loc == 0.0
        assert np.max(np.abs(op.matrix @ psi0.real)) < 1e-6

    def test_zero_frequency_ground_state(self):
        # the stretched sum-sector well at omega = 0 is the classic
        # -(3/4) sech^2 well with its single bound state exactly at the edge
        # value mapping to zero
        zg = stretched_grid(0.0, spectral_grid(0.0))
        op = build_schrodinger(SchrodingerProblem("sum_sector", 0.0), zg)
        pairs = eigs_below_continuum(op)
        assert len(pairs) == 1
        assert abs(pairs[0][0]) < 1e-6

    def test_coupled_kernel_mode(self):
        pr = SchrodingerProblem("coupled_system", 0.3)
        zg = stretched_grid(0.3, spectral_grid(0.3))
        op = build_schrodinger(pr, zg)
        phi0, loc = pr.reference_mode(zg.x)
        assert loc == 0.0
        assert np.max(np.abs(op.matrix @ embed_conjugate_pair(phi0))) < 1e-6

    def test_minus_sector_matches_scalar_problems(self):
        omega = 0.5
        g = spectral_grid(omega)
        zg = stretched_grid(omega, g)
        sector = [v for v, _ in eigs_below_continuum(build_sector_operator(omega, g, -1))]
        scalars = []
        for kind in ("sum_sector", "difference_sector"):
            op = build_schrodinger(SchrodingerProblem(kind, omega), zg)
            scalars += [(1.0 - omega**2) * v for v, _ in eigs_below_continuum(op)]
        assert np.allclose(sorted(sector), sorted(scalars), atol=1e-5)

    def test_plus_sector_matches_coupled_problem(self):
        omega = 0.3
        g = spectral_grid(omega)
        zg = stretched_grid(omega, g)
        sector = [v for v, _ in eigs_below_continuum(build_sector_operator(omega, g, +1))]
        coupled = [
            (1.0 - omega**2) * v
            for v, _ in eigs_below_continuum(
                build_schrodinger(SchrodingerProblem("coupled_system", omega), zg)
            )
        ]
        assert np.allclose(sorted(sector), sorted(coupled), atol=1e-5)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            SchrodingerProblem("mystery", 0.3)


class TestShooting:
    def test_resonance_well_has_one_zero(self):
        assert sturm_shoot(SchrodingerProblem("resonance_comparison", 0.5), 1.0) == 1

    def test_difference_sector_edge_count(self):
        assert sturm_shoot(SchrodingerProblem("difference_sector", 0.5), 1.0) == 1

    def test_algebraic_reference_resonance(self):
        assert sturm_shoot(SchrodingerProblem("algebraic_reference", 0.0), 1.0) == 1

    def test_zero_potential_has_no_zeros(self):
        count = _prufer_zero_count(lambda z, lam: 1.0 - lam, -15.0, 15.0, 0.0)
        assert count == 0

    def test_parameter_guards(self):
        with pytest.raises(ValueError):
            sturm_shoot(SchrodingerProblem("sum_sector", 0.5), 1.2)
        with pytest.raises(ValueError):
            sturm_shoot(SchrodingerProblem("coupled_system", 0.5), 0.5)

    def test_eigenvalues_match_dense_solve(self):
        pr = SchrodingerProblem("sum_sector", 0.5)
        shot = sturm_eigenvalues(pr)
        zg = stretched_grid(0.5, spectral_grid(0.5))
        dense = [v for v, _ in eigs_below_continuum(build_schrodinger(pr, zg))]
        assert len(shot) == len(dense) == 1
        assert abs(shot[0] - dense[0]) < 1e-5


class TestSigma:
    @pytest.mark.parametrize("omega", [0.3, 0.5, 0.7, -0.3, -0.5, -0.7])
    def test_closed_forms(self, omega):
        g = spectral_grid(omega)
        for sign in (1, -1):
            assert sigma_index(omega, g, sign) == pytest.approx(
                sigma_closed_form(omega, sign), abs=1e-3
            )

    @pytest.mark.parametrize("omega", [0.3, -0.3, 0.5, -0.5, 0.7, -0.7])
    def test_solve_and_profile_paths_agree(self, omega):
        g = spectral_grid(omega)
        for sign in (1, -1):
            assert abs(sigma_index(omega, g, sign) - sigma_profile_path(omega, g, sign)) < 1e-4

    def test_sign_pattern_across_zero(self):
        for omega in (0.5, -0.5):
            assert np.sign(sigma_closed_form(omega, +1)) == -np.sign(omega)
            assert np.sign(sigma_closed_form(omega, -1)) == np.sign(omega)

    def test_degenerate_frequency(self):
        g = spectral_grid(0.3)
        with pytest.raises(ValueError):
            sigma_index(5e-4, g, +1)


class TestGeneralizedMode:
    def test_minus_sector_identity(self):
        g = spectral_grid(0.5)
        assert generalized_mode_residual(0.5, g) < 1e-5


class TestConstrainedPositivity:
    def test_zero_frequency_margin_regression(self):
        g = spectral_grid(0.0)
        val = constrained_min_eig(0.0, g)
        assert val > 0.05
        assert val == pytest.approx(CONSTRAINED_MARGIN_ZERO, abs=1e-8)

    def test_unprojected_operator_is_not_positive(self):
        g = spectral_grid(0.0)
        pairs = eigs_below_continuum(build_hessian(0.0, g))
        near_kernel = [v for v, _ in pairs if abs(v) < 1e-6]
        assert len(near_kernel) >= 4
        assert min(v for v, _ in pairs) < 1e-6
        g3 = spectral_grid(0.3)
        pairs3 = eigs_below_continuum(build_hessian(0.3, g3))
        assert min(v for v, _ in pairs3) < -1e-3

    def test_excluded_direction_overlap(self):
        # the extra zero-frequency kernel pair has overlap -2i with the
        # charge-type constraint vector, so the constraint removes it
        g = spectral_grid(0.0)
        u0 = eval_profile(0.0, g)
        up0 = profile_derivative(0.0, g.x)
        overlap = quadrature(np.conj(u0) * up0 - u0 * np.conj(up0), g)
        assert abs(overlap - (-2j)) < 1e-8


class TestSplittingProbe:
    def test_eigenvalue_signs_near_zero(self):
        g = spectral_grid(0.1)
        rows = splitting_probe([0.1, -0.1], g)
        by_omega = {row["omega"]: row for row in rows}
        assert by_omega[0.1]["second_plus"] < 0.0
        assert by_omega[-0.1]["second_plus"] > 0.0
        assert by_omega[0.1]["second_minus"] > 0.0
        assert by_omega[-0.1]["second_minus"] < 0.0
        for row in rows:
            assert row["count_plus"] == 2
            assert row["count_minus"] == 2

    def test_degenerate_splitting_integral_value(self):
        # quadrature check of the displayed integral at omega -> 0; its sign
        # is recorded alongside the directly measured eigenvalue signs
        g = spectral_grid(0.01)
        row = splitting_probe([0.01], g)[0]
        assert row["splitting_integral"] == pytest.approx(-2.0 / 3.0, abs=0.05)
