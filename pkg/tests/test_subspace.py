import dataclasses
import math

import numpy as np
import pytest

from asopt import subspace as sub
from asopt.objectives import get_function, make_embedded, polynomial_example
from conftest import constant_base, linear_base


class TestSamplingDistribution:
    def test_standard_normal_shapes(self, rng):
        rho = sub.standard_normal()
        assert rho.sample(rng, 7).shape == (7,)
        assert rho.sample(rng, 7, n=3).shape == (3, 7)

    def test_uniform_box(self, rng):
        rho = sub.uniform_box(-2.0, 2.0)
        pts = rho.sample(rng, 1, n=1000)
        assert pts.min() >= -2 and pts.max() <= 2

    def test_uniform_needs_box(self):
        with pytest.raises(ValueError):
            sub.SamplingDistribution("uniform")
        with pytest.raises(ValueError):
            sub.uniform_box(1.0, -1.0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            sub.SamplingDistribution("lognormal")


class TestSampleGradients:
    def test_constant_objective_all_zero(self, rng):
        obj = make_embedded(constant_base(2.0, 2), 9, seed=0)
        ens = sub.sample_gradients(obj, 4, sub.standard_normal(), rng)
        assert np.all(ens.gradients == 0)

    def test_deterministic(self):
        obj = make_embedded(get_function("branin"), 20, seed=0)
        a = sub.sample_gradients(obj, 3, sub.standard_normal(), np.random.default_rng(5))
        b = sub.sample_gradients(obj, 3, sub.standard_normal(), np.random.default_rng(5))
        assert np.array_equal(a.points, b.points)
        assert np.array_equal(a.gradients, b.gradients)

    def test_rosenbrock_gradients_independent(self):
        obj = make_embedded(get_function("rosenbrock"), 100, seed=2)
        ens = sub.sample_gradients(obj, 7, sub.standard_normal(), np.random.default_rng(2))
        gram = ens.gradients @ ens.gradients.T
        assert np.linalg.matrix_rank(gram) == 7

    def test_validation(self, rng):
        obj = make_embedded(get_function("branin"), 10, seed=0)
        with pytest.raises(ValueError):
            sub.sample_gradients(obj, 0, sub.standard_normal(), rng)
        with pytest.raises(ValueError):
            sub.sample_gradients(obj, 2, sub.standard_normal(), rng, grad_mode="exact")


class TestEstimate:
    def test_single_gradient(self, rng):
        obj = make_embedded(get_function("branin"), 15, seed=1)
        ens = sub.sample_gradients(obj, 1, sub.standard_normal(), rng)
        est = sub.estimate_C(ens)
        g = ens.gradients[0]
        assert est.d == 1
        assert abs(est.eigenvalues[0] - g @ g) <= 1e-8 * (g @ g)
        u = est.basis.columns[:, 0]
        assert min(np.linalg.norm(u - g / np.linalg.norm(g)), np.linalg.norm(u + g / np.linalg.norm(g))) <= 1e-8

    def test_linear_objective_rank_one(self, rng):
        obj = make_embedded(linear_base(np.array([1.0, -2.0])), 10, seed=3)
        ens = sub.sample_gradients(obj, 6, sub.standard_normal(), rng)
        est = sub.estimate_C(ens)
        assert est.d == 1

    def test_all_zero_gradients(self):
        ens = sub.GradientEnsemble(np.zeros((3, 8)), np.zeros((3, 8)))
        est = sub.estimate_C(ens)
        assert est.d == 0
        assert est.basis.dim == 0
        assert np.all(est.eigenvalues == 0)

    def test_flat_region_rank_zero(self):
        # every sample in the plateau of the 1-d bump: zero estimate
        base = polynomial_example()
        obj = make_embedded(base, 1, seed=0, rotate=False)
        pts = np.array([[1.5], [-1.7], [1.9]])
        grads = np.array([base.grad(p) for p in pts])
        est = sub.estimate_C(sub.GradientEnsemble(pts, grads))
        assert est.d == 0

    def test_routes_agree(self, rng):
        obj = make_embedded(get_function("trid"), 50, seed=4)
        ens = sub.sample_gradients(obj, 5, sub.standard_normal(), rng)
        direct = sub.estimate_C(ens, route="direct")
        gram = sub.estimate_C(ens, route="gram")
        assert direct.d == gram.d
        lam_scale = max(direct.eigenvalues[0], 1e-300)
        assert np.max(np.abs(direct.eigenvalues - gram.eigenvalues)) <= 1e-8 * lam_scale
        Pa = direct.basis.columns @ direct.basis.columns.T
        Pb = gram.basis.columns @ gram.basis.columns.T
        assert np.linalg.norm(Pa - Pb, 2) <= 1e-6  # sine of the largest principal angle

    def test_gram_route_automatic_beyond_threshold(self, rng):
        obj = make_embedded(get_function("branin"), 600, seed=5)
        ens = sub.sample_gradients(obj, 2, sub.standard_normal(), rng)
        est = sub.estimate_C(ens)
        assert est.d == 2
        assert est.eigenvalues.shape == (2,)

    def test_basis_spans_top_eigenspace(self, rng):
        obj = make_embedded(get_function("hartmann3"), 40, seed=6)
        ens = sub.sample_gradients(obj, 5, sub.standard_normal(), rng)
        est = sub.estimate_C(ens)
        G = ens.gradients.T
        C = G @ G.T / ens.M
        B = est.basis.columns
        resid = C @ B - B @ (B.T @ C @ B)
        assert np.max(np.abs(resid)) <= 1e-8 * est.eigenvalues[0]

    def test_rank_cap(self):
        obj = make_embedded(get_function("camel"), 30, seed=7)
        for M in (1, 2, 3, 5):
            ens = sub.sample_gradients(obj, M, sub.standard_normal(), np.random.default_rng(M))
            est = sub.estimate_C(ens)
            assert est.d <= min(M, obj.d_e)


class TestBasisForRP:
    def test_rank_one_diagonal(self):
        pts = np.zeros((1, 4))
        grads = np.zeros((1, 4))
        grads[0, 0] = 2.0
        est = sub.estimate_C(sub.GradientEnsemble(pts, grads))
        basis = sub.basis_for_rp(est)
        assert basis.dim == 1
        assert abs(abs(basis.columns[0, 0]) - 1.0) <= 1e-12

    def test_zero_gives_empty(self):
        est = sub.estimate_C(sub.GradientEnsemble(np.zeros((2, 5)), np.zeros((2, 5))))
        assert sub.basis_for_rp(est).dim == 0

    def test_range_inside_effective_subspace(self):
        base = get_function("hartmann3")
        obj = make_embedded(base, 100, seed=8)
        ens = sub.sample_gradients(obj, 3, sub.standard_normal(), np.random.default_rng(8))
        basis = sub.basis_for_rp(sub.estimate_C(ens))
        U = obj.effective_basis
        resid = basis.columns - U @ (U.T @ basis.columns)
        assert np.max(np.abs(resid)) <= 1e-8


class TestBoundCalculators:
    def test_lower_bound_linear_case(self):
        # lambda1 = lambdak = C with L = sqrt(C) collapses the prefactor to 4
        for c in (0.3, 1.0, 17.0):
            for alpha in (0.01, 0.3, 0.9):
                got = sub.sampling_lower_bound(c, c, math.sqrt(c), 1, 0.0, alpha)
                want = 4.0 * math.log(1.0 / alpha)
                assert abs(got - want) <= 1e-12 * max(1.0, want)

    def test_lower_bound_alpha_one(self):
        assert sub.sampling_lower_bound(1.0, 1.0, 1.0, 1, 0.0, 1.0) == 0.0

    def test_lower_bound_validation(self):
        with pytest.raises(ValueError):
            sub.sampling_lower_bound(1.0, 2.0, 1.0, 1, 0.0, 0.5)
        with pytest.raises(ValueError):
            sub.sampling_lower_bound(1.0, 1.0, 1.0, 1, 1.0, 0.5)
        with pytest.raises(ValueError):
            sub.sampling_lower_bound(1.0, 1.0, 1.0, 1, 0.0, 0.0)
        with pytest.raises(ValueError):
            sub.sampling_lower_bound(1.0, 1.0, -1.0, 1, 0.0, 0.5)

    def test_lower_bound_monotonicity(self):
        alphas = np.linspace(0.05, 1.0, 12)
        vals = [sub.sampling_lower_bound(2.0, 1.0, 1.5, 3, 0.2, a) for a in alphas]
        assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))
        lams = np.linspace(0.2, 2.0, 10)
        vals = [sub.sampling_lower_bound(2.0, lk, 1.5, 3, 0.2, 0.1) for lk in lams]
        assert all(x >= y - 1e-12 for x, y in zip(vals, vals[1:]))
        taus = np.linspace(0.0, 0.9, 10)
        vals = [sub.sampling_lower_bound(2.0, 1.0, 1.5, 3, t, 0.1) for t in taus]
        assert all(x <= y + 1e-12 for x, y in zip(vals, vals[1:]))

    def test_m_zero_values(self):
        assert sub.m_zero(3.0, 1.0, 2.0, 1) == 1
        assert sub.m_zero(1.0, 1.0, 1.0, 2) == 4  # ceil(4 ln 2) + 1
        assert sub.m_zero(2.0, 1.0, 1.0, 3) == 10  # ceil(8 ln 3) + 1

    def test_tau_const_values(self):
        assert abs(sub.tau_const(1.0, 1.0, 1.0) - 0.22119921692859512) <= 1e-15
        assert sub.tau_const(1.0, 1e-8, 1.0) <= 1e-15
        assert 0 < sub.tau_const(5.0, 2.0, 3.0) < 1

    def test_k_xi_values(self):
        assert sub.k_xi(0.0, 0.5, 1.0, 7) == 6
        assert sub.k_xi(0.9, 0.25, 1.0, 4) == 13
        grid = np.arange(0.0, 0.995, 0.1)
        vals = [sub.k_xi(x, 0.3, 0.8, 5) for x in grid]
        assert all(a <= b for a, b in zip(vals, vals[1:]))

    def test_success_floor_values(self):
        tau = 0.37
        assert abs(sub.success_floor(3, tau, 1.0, 3) - tau) <= 1e-15
        assert sub.success_floor(9, 1.0, 1.0, 2) == 1.0
        got = sub.success_floor(10, 0.2212, 1.0, 1)
        assert abs(got - 0.9179158267235553) <= 1e-12
        assert abs(got - 0.918) <= 1e-3
        with pytest.raises(ValueError):
            sub.success_floor(2, 0.5, 1.0, 3)

    def test_scale_and_rotation_invariance(self):
        lam1, lamk, L = 1.7, 0.9, 2.3
        for beta in (0.01, 1.0, 100.0):
            a = sub.sampling_lower_bound(beta**2 * lam1, beta**2 * lamk, beta * L, 2, 0.3, 0.1)
            b = sub.sampling_lower_bound(lam1, lamk, L, 2, 0.3, 0.1)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(b))
            a = sub.m_zero(beta**2 * lam1, beta**2 * lamk, beta * L, 4)
            assert a == sub.m_zero(lam1, lamk, L, 4)
            a = sub.tau_const(beta**2 * lam1, beta**2 * lamk, beta * L)
            b = sub.tau_const(lam1, lamk, L)
            assert abs(a - b) <= 1e-12 * max(1.0, abs(b))

    def test_bound_against_known_flat_quartic_constants(self):
        # mean-squared-derivative of the 1-d bump under the standard normal,
        # by trapezoid quadrature, and the known derivative bound
        xs = np.linspace(-1.0, 1.0, 200001)
        phi = np.exp(-xs * xs / 2) / np.sqrt(2 * np.pi)
        deriv = -4 * xs**3 + 4 * xs
        c_val = np.trapezoid(deriv**2 * phi, xs)
        L = 8 / (3 * math.sqrt(3))
        coeff = sub.sampling_lower_bound(c_val, c_val, L, 1, 0.0, math.exp(-1.0))
        assert abs(coeff - 4 * L**2 / c_val) <= 1e-10
        assert 11.3 <= 4 * L**2 / c_val <= 11.7


class TestEmpiricalRankProbability:
    def test_fast_path_matches_generic(self):
        base = polynomial_example()
        rho = sub.uniform_box(-2.0, 2.0)
        fast = sub.empirical_rank_probability(base, 1, 2, 3000, rho, np.random.default_rng(0))
        slow_base = dataclasses.replace(base, grad_elementwise=None)
        slow = sub.empirical_rank_probability(slow_base, 1, 2, 3000, rho, np.random.default_rng(0))
        assert abs(fast - slow) <= 0.035  # independent 3000-trial binomials

    def test_flat_quartic_quick(self):
        base = polynomial_example()
        p = sub.empirical_rank_probability(base, 1, 2, 20000, sub.uniform_box(-2.0, 2.0), np.random.default_rng(1))
        assert abs((1 - p) - 0.25) <= 0.012

    def test_rosenbrock_exact_dimension(self):
        base = get_function("rosenbrock")
        p = sub.empirical_rank_probability(base, 100, 7, 5, sub.standard_normal(), np.random.default_rng(2))
        assert p == 1.0
