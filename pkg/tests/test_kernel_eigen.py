import math

import numpy as np
import pytest

from wmixgof import (
    DomainError,
    KernelMatrix,
    SingularInformation,
    brownian_bridge_q,
    build_q_matrix,
    cdf_gradient,
    eigen_spectrum,
    mixture_cdf,
    mixture_quantile,
    psi_at,
    rho_hat,
    simple_hypothesis_lambdas,
)
import wmixgof.kernel_eigen as kernel_eigen


def bridge_eigen_errors(m, count=10):
    spec = eigen_spectrum(brownian_bridge_q(m), tail_tolerance=0.0)
    exact = simple_hypothesis_lambdas(count)
    return np.abs(spec.lambdas[:count] - exact) / exact


class TestPsiAt:
    def test_vanishes_toward_boundaries(self, populations):
        theta = populations[1].theta
        for s in (1e-6, 1 - 1e-6):
            assert np.all(np.abs(psi_at(s, theta).components) < 1e-3)

    def test_p_component_vanishes_where_component_cdfs_cross(self, populations):
        theta = populations[0].theta  # components (3, 0.9) and (2, 3)
        # (x/0.9)^3 = (x/3)^2  =>  x = 0.9^3 * 9 / ... solved directly:
        x_cross = (theta.beta1**theta.alpha1 / theta.beta2**theta.alpha2) ** (
            1.0 / (theta.alpha1 - theta.alpha2)
        )
        s_cross = mixture_cdf(x_cross, theta)
        assert abs(psi_at(s_cross, theta).components[4]) < 1e-6

    def test_composes_quantile_and_gradient(self, populations):
        theta = populations[2].theta
        x = mixture_quantile(0.5, theta)
        expected = cdf_gradient(x, theta).as_array()
        assert psi_at(0.5, theta).components == pytest.approx(expected, abs=1e-6)

    def test_rejects_boundary_levels(self, populations):
        with pytest.raises(DomainError):
            psi_at(0.0, populations[0].theta)
        with pytest.raises(DomainError):
            psi_at(1.0, populations[0].theta)


class TestRhoHat:
    def test_zero_correction_gives_brownian_bridge(self, populations):
        theta = populations[1].theta
        zero = np.zeros((5, 5))
        for s, t in [(0.2, 0.7), (0.5, 0.5), (0.9, 0.1)]:
            assert rho_hat(s, t, theta, zero) == pytest.approx(min(s, t) - s * t, rel=1e-12)

    def test_center_value(self, populations):
        zero = np.zeros((5, 5))
        assert rho_hat(0.5, 0.5, populations[0].theta, zero) == pytest.approx(0.25)

    def test_symmetric_on_fitted_parameters(self, fitted_pop2, rng):
        sample, fit = fitted_pop2
        inv_info = np.linalg.inv(-fit.hessian / sample.n)
        for _ in range(10):
            s, t = rng.random(2) * 0.98 + 0.01
            left = rho_hat(float(s), float(t), fit.theta_hat, inv_info)
            right = rho_hat(float(t), float(s), fit.theta_hat, inv_info)
            assert abs(left - right) < 1e-10


class TestBuildQMatrix:
    def test_simple_hypothesis_leading_eigenvalue(self):
        spec = eigen_spectrum(brownian_bridge_q(500), tail_tolerance=0.0)
        assert abs(spec.lambdas[0] - 1 / math.pi**2) < 1e-4

    def test_symmetric(self, fitted_pop1):
        sample, fit = fitted_pop1
        q = build_q_matrix(fit.theta_hat, fit.hessian, sample.n, 60)
        assert np.array_equal(q.entries, q.entries.T)

    def test_composite_eigenvalues_dominated_by_simple(self, fitted_pop1):
        # subtracting a positive semidefinite correction can only shrink
        # the quadratic form, so eigenvalues drop pointwise
        sample, fit = fitted_pop1
        m = 120
        composite = np.linalg.eigvalsh(
            build_q_matrix(fit.theta_hat, fit.hessian, sample.n, m).entries
        )[::-1]
        simple = np.linalg.eigvalsh(brownian_bridge_q(m).entries)[::-1]
        assert np.all(composite <= simple + 1e-8)

    def test_psi_evaluated_once_per_grid_point(self, fitted_pop1, monkeypatch):
        sample, fit = fitted_pop1
        calls = {"n": 0}
        original = kernel_eigen.psi_at

        def counting(s, theta_hat):
            calls["n"] += 1
            return original(s, theta_hat)

        monkeypatch.setattr(kernel_eigen, "psi_at", counting)
        m = 40
        build_q_matrix(fit.theta_hat, fit.hessian, sample.n, m)
        assert calls["n"] == m

    def test_singular_information_raises(self, fitted_pop1):
        sample, fit = fitted_pop1
        with pytest.raises(SingularInformation):
            build_q_matrix(fit.theta_hat, np.eye(5), sample.n, 20)

    def test_literal_mode_differs_from_inverse(self, fitted_pop1):
        sample, fit = fitted_pop1
        q_inv = build_q_matrix(fit.theta_hat, fit.hessian, sample.n, 30)
        q_lit = build_q_matrix(
            fit.theta_hat, fit.hessian, sample.n, 30, info_matrix_mode="literal"
        )
        assert not np.allclose(q_inv.entries, q_lit.entries)
        with pytest.raises(DomainError):
            build_q_matrix(fit.theta_hat, fit.hessian, sample.n, 30, info_matrix_mode="bogus")

    def test_rejects_small_grid(self, fitted_pop1):
        sample, fit = fitted_pop1
        with pytest.raises(DomainError):
            build_q_matrix(fit.theta_hat, fit.hessian, sample.n, 1)


class TestEigenSpectrum:
    def test_simple_hypothesis_first_five(self):
        rel = bridge_eigen_errors(500, count=5)
        assert np.all(rel < 1e-4)

    def test_diagonal_matrix_sorted(self):
        m = 3
        q = KernelMatrix(m=m, entries=np.diag([3.0, 1.0, 2.0]) / m)
        spec = eigen_spectrum(q, tail_tolerance=0.0)
        assert spec.lambdas == pytest.approx(np.array([3.0, 2.0, 1.0]) / m)

    def test_trace_identity(self, fitted_pop2):
        sample, fit = fitted_pop2
        q = build_q_matrix(fit.theta_hat, fit.hessian, sample.n, 80)
        spec = eigen_spectrum(q, tail_tolerance=0.0)
        assert float(np.sum(spec.lambdas)) == pytest.approx(float(np.trace(q.entries)), abs=1e-8)

    def test_negative_eigenvalues_counted_not_retained(self):
        q = KernelMatrix(m=2, entries=np.diag([1.0, -0.1]))
        spec = eigen_spectrum(q)
        assert spec.n_negative == 1
        assert spec.min_eigenvalue == pytest.approx(-0.1)
        assert np.all(spec.retained > 0)

    def test_truncation_respects_tail_tolerance(self):
        q = brownian_bridge_q(200)
        spec = eigen_spectrum(q, tail_tolerance=0.05)
        assert spec.n_retained < 200
        assert spec.trace_captured >= 0.95

    def test_nystrom_errors_shrink_with_grid(self):
        errors = [np.max(bridge_eigen_errors(m)) for m in (50, 100, 200, 500)]
        for coarse, fine in zip(errors, errors[1:]):
            assert fine < coarse * 1.1


class TestSimpleHypothesisLambdas:
    def test_first_value(self):
        assert simple_hypothesis_lambdas(1)[0] == pytest.approx(0.1013212, abs=1e-7)

    def test_first_three(self):
        lam = simple_hypothesis_lambdas(3)
        expected = [1 / math.pi**2, 1 / (4 * math.pi**2), 1 / (9 * math.pi**2)]
        assert lam == pytest.approx(expected, rel=1e-12)

    def test_partial_sum_approaches_basel_limit(self):
        assert float(np.sum(simple_hypothesis_lambdas(10000))) == pytest.approx(1 / 6, abs=1e-4)

    def test_rejects_nonpositive_count(self):
        with pytest.raises(DomainError):
            simple_hypothesis_lambdas(0)


class TestKernelMatrixType:
    def test_rejects_asymmetric(self):
        bad = np.array([[1.0, 0.2], [0.1, 1.0]])
        with pytest.raises(DomainError):
            KernelMatrix(m=2, entries=bad)

    def test_rejects_wrong_shape(self):
        with pytest.raises(DomainError):
            KernelMatrix(m=3, entries=np.eye(2))
