"""Objective constructors: constants, oracles, combinators, certification."""

import math

import numpy as np
import pytest

from gensmooth.kernels import SmoothnessParams
from gensmooth.problems import (
    Objective,
    affine_logistic,
    certify_smoothness,
    exp_phi,
    logistic_1d,
    power_norm,
    sample_ball,
    separable_pnorm,
    separable_sum,
    spectral_norm,
    sum_with_smooth,
)


def fd_gradient(f, x, h=1e-6):
    h = h * (1.0 + np.linalg.norm(x))
    out = np.empty(f.dim)
    for j in range(f.dim):
        e = np.zeros(f.dim)
        e[j] = h
        out[j] = (f.value(x + e) - f.value(x - e)) / (2.0 * h)
    return out


def fd_hessian(f, x, h=1e-5):
    h = h * (1.0 + np.linalg.norm(x))
    out = np.empty((f.dim, f.dim))
    for j in range(f.dim):
        e = np.zeros(f.dim)
        e[j] = h
        out[:, j] = (f.gradient(x + e) - f.gradient(x - e)) / (2.0 * h)
    return 0.5 * (out + out.T)


def assert_oracles_consistent(f, n_points=200, radius=3.0, seed=3):
    rng = np.random.default_rng(seed)
    for x in sample_ball(rng, f.dim, radius, n_points):
        grad = f.gradient(x)
        np.testing.assert_allclose(
            grad, fd_gradient(f, x), rtol=1e-5, atol=1e-5 * (1 + np.linalg.norm(grad))
        )
        if f.hessian is not None:
            hess = f.hessian(x)
            np.testing.assert_allclose(hess, hess.T, atol=1e-10)
            scale = 1.0 + np.abs(hess).max()
            np.testing.assert_allclose(hess, fd_hessian(f, x), atol=1e-4 * scale)


class TestPowerNorm:
    def test_constants_p4(self):
        assert power_norm(2, 4, 1).params == SmoothnessParams(4.0, 1)

    def test_constants_p6(self):
        assert power_norm(2, 6, 1).params.l0 == pytest.approx(256.0)

    def test_point_values(self):
        f = power_norm(2, 4, 1)
        x = np.array([1.0, 1.0])
        assert f.value(x) == pytest.approx(1.0)
        np.testing.assert_allclose(f.gradient(x), [2.0, 2.0])

    def test_origin(self):
        f = power_norm(3, 4, 1)
        zero = np.zeros(3)
        assert f.value(zero) == 0.0
        np.testing.assert_allclose(f.gradient(zero), zero)
        np.testing.assert_allclose(f.hessian(zero), np.zeros((3, 3)))

    def test_oracles(self):
        assert_oracles_consistent(power_norm(3, 4, 1))
        assert_oracles_consistent(power_norm(2, 6, 1))
        assert_oracles_consistent(power_norm(2, 8, 1))

    def test_value_above_optimum(self):
        f = power_norm(2, 4, 1)
        rng = np.random.default_rng(0)
        assert all(f.value(x) >= f.f_star for x in sample_ball(rng, 2, 5.0, 100))

    @pytest.mark.parametrize("p,l1", [(2.0, 1.0), (1.5, 1.0), (4.0, 0.0), (4.0, -1.0)])
    def test_rejects_bad_parameters(self, p, l1):
        with pytest.raises(ValueError):
            power_norm(2, p, l1)


class TestLogistic:
    def test_constants(self):
        assert logistic_1d(0.0).params == SmoothnessParams(0.25, 0.0)
        assert logistic_1d(0.5).params == SmoothnessParams(0.0625, 0.5)
        assert logistic_1d(1.0).params.l0 == 0.0

    def test_point_values(self):
        f = logistic_1d(0.5)
        zero = np.zeros(1)
        assert f.value(zero) == pytest.approx(math.log(2.0))
        assert f.gradient(zero)[0] == pytest.approx(0.5)
        assert f.hessian(zero)[0, 0] == pytest.approx(0.25)

    def test_no_recorded_optimum(self):
        # the infimum is unattained; callers must supply explicit targets
        f = logistic_1d(0.5)
        assert f.f_star is None and f.x_star is None

    def test_overflow_safe(self):
        f = logistic_1d(0.0)
        assert f.value(np.array([800.0])) == pytest.approx(800.0)
        assert f.value(np.array([-800.0])) == pytest.approx(0.0, abs=1e-300)
        assert np.isfinite(f.gradient(np.array([800.0]))).all()

    def test_oracles(self):
        assert_oracles_consistent(logistic_1d(0.5), radius=5.0)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            logistic_1d(1.5)


class TestAffineLogistic:
    def test_constants(self):
        f = affine_logistic(np.array([2.0, 0.0]), 0.0, 2.0)
        assert f.params.l0 == 0.0
        g = affine_logistic(np.array([3.0, 0.0]), 0.0, 1.0)
        assert g.params == SmoothnessParams(1.0, 1.0)

    def test_reduces_to_logistic_at_zero(self):
        f = affine_logistic(np.array([1.0, 0.0]), 0.0, 0.5)
        assert f.value(np.zeros(2)) == pytest.approx(math.log(2.0))

    def test_certifier_confirms_derived_constants(self):
        f = affine_logistic(np.array([3.0, 0.0]), 0.0, 1.0)
        report = certify_smoothness(f, f.params, 5.0, 2000, seed=5)
        assert report.passes(1e-8)

    def test_oracles(self):
        assert_oracles_consistent(affine_logistic(np.array([1.5, -2.0]), 0.3, 1.0))

    def test_rejects_l1_above_norm(self):
        with pytest.raises(ValueError):
            affine_logistic(np.array([1.0, 0.0]), 0.0, 1.5)


class TestExpPhi:
    def test_origin(self):
        f = exp_phi(2, SmoothnessParams(1.0, 1.0))
        assert f.value(np.zeros(2)) == 0.0
        np.testing.assert_allclose(f.gradient(np.zeros(2)), np.zeros(2))

    def test_value_on_unit_sphere(self):
        f = exp_phi(2, SmoothnessParams(1.0, 1.0))
        x = np.array([math.sqrt(0.5), math.sqrt(0.5)])
        assert f.value(x) == pytest.approx(math.e - 2.0, rel=1e-12)

    def test_curvature_inequality_is_tight(self):
        f = exp_phi(2, SmoothnessParams(1.0, 1.0))
        report = certify_smoothness(f, f.params, 3.0, 10**4, seed=2)
        assert report.max_violation <= 1e-8

    def test_oracles(self):
        assert_oracles_consistent(exp_phi(2, SmoothnessParams(1.0, 1.0)))
        assert_oracles_consistent(exp_phi(3, SmoothnessParams(2.0, 0.5)))

    def test_rejects_zero_l1(self):
        with pytest.raises(ValueError):
            exp_phi(2, SmoothnessParams(1.0, 0.0))


def softmax_term(mu, vectors, offsets):
    """mu * ln(sum_i exp((<a_i, x> + b_i)/mu)): smooth, Lipschitz, convex."""
    a = np.asarray(vectors, dtype=float)
    b = np.asarray(offsets, dtype=float)

    def weights(x):
        z = (a @ x + b) / mu
        z -= z.max()
        w = np.exp(z)
        return w / w.sum()

    def value(x):
        z = (a @ x + b) / mu
        zmax = z.max()
        return float(mu * (zmax + math.log(np.sum(np.exp(z - zmax)))))

    def gradient(x):
        return a.T @ weights(x)

    def hessian(x):
        w = weights(x)
        mean = a.T @ w
        return (a.T * w) @ a / mu - np.outer(mean, mean) / mu

    lip_val = float(np.max(np.linalg.norm(a, axis=1)))
    lip_grad = lip_val**2 / mu
    obj = Objective(
        dim=a.shape[1], value=value, gradient=gradient, hessian=hessian,
        name=f"softmax(mu={mu})",
    )
    return obj, lip_grad, lip_val


class TestSumWithSmooth:
    def test_affine_term_shifts_floor_only(self):
        f = power_norm(2, 4, 1)
        slope = np.array([0.7, -0.2])
        m = float(np.linalg.norm(slope))
        g = Objective(
            dim=2,
            value=lambda x: float(slope @ x),
            gradient=lambda x: slope.copy(),
            hessian=lambda x: np.zeros((2, 2)),
            name="affine",
        )
        total = sum_with_smooth(f, g, g_lip_grad=0.0, g_lip_val=m)
        assert total.params == SmoothnessParams(f.params.l0 + m * f.params.l1, f.params.l1)

    def test_zero_term_keeps_params(self):
        f = power_norm(2, 4, 1)
        zero = Objective(
            dim=2,
            value=lambda x: 0.0,
            gradient=lambda x: np.zeros(2),
            hessian=lambda x: np.zeros((2, 2)),
            name="zero",
        )
        total = sum_with_smooth(f, zero, g_lip_grad=0.0, g_lip_val=0.0)
        assert total.params == f.params

    def test_softmax_sum_certifies(self):
        f = power_norm(2, 4, 1)
        g, lip_grad, lip_val = softmax_term(
            2.0, [[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0]], [0.0, 0.1, -0.2]
        )
        total = sum_with_smooth(f, g, g_lip_grad=lip_grad, g_lip_val=lip_val)
        assert_oracles_consistent(total)
        report = certify_smoothness(total, total.params, 5.0, 4000, seed=9)
        assert report.passes(1e-8)

    def test_rejects_dim_mismatch(self):
        with pytest.raises(ValueError):
            sum_with_smooth(power_norm(2, 4, 1), power_norm(3, 4, 1), 0.0, 0.0)


class TestSeparableSum:
    def test_single_part_identity(self):
        part = power_norm(2, 4, 1)
        h = separable_sum([part])
        x = np.array([0.3, -1.2])
        assert h.value(x) == pytest.approx(part.value(x))
        np.testing.assert_allclose(h.gradient(x), part.gradient(x))
        assert h.params == part.params

    def test_params_take_componentwise_max(self):
        a = exp_phi(1, SmoothnessParams(1.0, 2.0))
        b = exp_phi(1, SmoothnessParams(3.0, 1.0))
        assert separable_sum([a, b]).params == SmoothnessParams(3.0, 2.0)

    def test_gradient_is_exact_concatenation(self):
        parts = [power_norm(2, 4, 1), power_norm(3, 6, 1)]
        h = separable_sum(parts)
        rng = np.random.default_rng(4)
        for x in sample_ball(rng, 5, 3.0, 20):
            expected = np.concatenate(
                [parts[0].gradient(x[:2]), parts[1].gradient(x[2:])]
            )
            np.testing.assert_array_equal(h.gradient(x), expected)

    def test_pnorm_composition(self):
        h = separable_pnorm(4, 4, 1.0)
        assert h.params == SmoothnessParams(4.0, 1.0)
        x = np.array([1.0, -1.0, 2.0, 0.0])
        assert h.value(x) == pytest.approx((1 + 1 + 16) / 4)
        assert h.f_star == 0.0
        assert_oracles_consistent(h)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            separable_sum([])


class TestSpectralNorm:
    def test_matches_eigvalsh(self):
        rng = np.random.default_rng(8)
        for _ in range(20):
            m = rng.standard_normal((4, 4))
            h = m + m.T
            expected = float(np.max(np.abs(np.linalg.eigvalsh(h))))
            assert spectral_norm(h, rng) == pytest.approx(expected, rel=1e-6)

    def test_zero_matrix(self):
        rng = np.random.default_rng(8)
        assert spectral_norm(np.zeros((3, 3)), rng) == 0.0


class TestCertifier:
    def test_power_norm_true_constants_pass(self):
        f = power_norm(3, 4, 1)
        report = certify_smoothness(f, f.params, 10.0, 10**4, seed=7)
        assert report.max_violation <= 1e-8
        assert report.n_samples == 10**4
        assert report.region_radius == 10.0

    def test_loosened_constants_leave_slack(self):
        f = power_norm(3, 4, 1)
        loose = SmoothnessParams(f.params.l0 + 1.0, f.params.l1)
        report = certify_smoothness(f, loose, 10.0, 10**4, seed=7)
        assert report.max_violation <= -1.0 + 1e-8

    def test_understated_floor_is_detected(self):
        # curvature of ln(1+exp(x)) peaks at 1/4 > 0.2 near the origin
        f = logistic_1d(0.0)
        report = certify_smoothness(f, SmoothnessParams(0.2, 0.0), 0.001, 10**4, seed=7)
        assert report.max_violation >= 0.05 - 1e-8
        assert not report.passes(1e-8)
        assert report.violating_point is not None

    def test_deterministic_given_seed(self):
        f = power_norm(2, 4, 1)
        a = certify_smoothness(f, f.params, 5.0, 500, seed=13)
        b = certify_smoothness(f, f.params, 5.0, 500, seed=13)
        assert a.max_violation == b.max_violation
        np.testing.assert_array_equal(a.violating_point, b.violating_point)

    def test_requires_hessian(self):
        f = power_norm(2, 4, 1)
        bare = Objective(dim=2, value=f.value, gradient=f.gradient, name="bare")
        with pytest.raises(ValueError):
            certify_smoothness(bare, f.params, 1.0, 10, seed=0)
