import numpy as np
import pytest
import sympy

from hypergraph_ssl import (
    ConvergenceWarning,
    PropagationConfig,
    alpha_from_gamma,
    build_initial_labels,
    compute_degrees,
    predict,
    propagate_closed_form,
    propagate_iterative,
    propagation_matrix,
    quadratic_form_oracle,
    solve_sym_regularized,
    solve_unnormalized,
    symmetric_laplacian,
    unnormalized_laplacian,
)

from conftest import random_hypergraph

Y_CHAIN = np.array([1.0, 0.0, -1.0])


def ops(h):
    d = compute_degrees(h)
    return (
        d,
        propagation_matrix(h, d, "rw"),
        propagation_matrix(h, d, "sym"),
        unnormalized_laplacian(h, d),
        symmetric_laplacian(h, d),
    )


def random_labels(rng, n, c):
    Y = rng.choice([-1.0, 1.0], size=(n, c))
    Y[rng.random(n) < 0.4] = 0.0
    return Y


class TestConfig:
    @pytest.mark.parametrize("alpha", [0.0, 1.0, -0.1, 1.5])
    def test_alpha_open_interval(self, alpha):
        with pytest.raises(ValueError, match=r"\(0, 1\)"):
            PropagationConfig(alpha=alpha)

    def test_gamma_positive(self):
        with pytest.raises(ValueError, match="gamma"):
            PropagationConfig(gamma=0.0)

    def test_defaults(self):
        cfg = PropagationConfig()
        assert (cfg.alpha, cfg.gamma, cfg.tolerance, cfg.max_iterations) == (0.85, 1.0, 1e-6, 1000)

    def test_bridge(self):
        assert alpha_from_gamma(1.0) == 0.5


class TestInitialLabels:
    def test_cases(self):
        ann = np.array([[1, 0], [0, 1], [1, 1]])
        Y = build_initial_labels(ann, [True, False, True])
        np.testing.assert_array_equal(Y, [[1, -1], [0, 0], [1, 1]])

    def test_all_train_no_zeros(self, rng):
        ann = rng.integers(0, 2, size=(10, 3))
        Y = build_initial_labels(ann, np.ones(10, bool))
        assert np.all(Y != 0)

    def test_empty_train(self):
        with pytest.raises(ValueError, match="empty"):
            build_initial_labels(np.ones((3, 1)), np.zeros(3, bool))

    def test_non_binary(self):
        with pytest.raises(ValueError, match="binary"):
            build_initial_labels(np.array([[2], [0]]), [True, True])


class TestIterative:
    def test_tiny_alpha_returns_y_after_one_step(self, chain):
        _, Srw, _, _, _ = ops(chain)
        res = propagate_iterative(Srw, Y_CHAIN, PropagationConfig(alpha=1e-300))
        np.testing.assert_array_equal(res.F, Y_CHAIN)
        assert res.converged and res.n_iterations == 1

    def test_chain_matches_closed_form(self, chain):
        _, Srw, Ssym, _, _ = ops(chain)
        for S in (Srw, Ssym):
            res = propagate_iterative(S, Y_CHAIN, PropagationConfig(alpha=0.85))
            assert res.converged
            np.testing.assert_allclose(res.F, propagate_closed_form(S, Y_CHAIN, 0.85), atol=1e-6)

    def test_antisymmetric_middle_stays_zero(self, chain):
        _, Srw, Ssym, _, _ = ops(chain)
        for S in (Srw, Ssym):
            F = Y_CHAIN.copy()
            for _ in range(50):
                F = 0.85 * (S.values @ F) + 0.15 * Y_CHAIN
                assert abs(F[1]) < 1e-15
            res = propagate_iterative(S, Y_CHAIN)
            assert abs(res.F[1]) < 1e-15

    def test_non_convergence_reported(self, chain):
        _, Srw, _, _, _ = ops(chain)
        cfg = PropagationConfig(alpha=0.99, tolerance=1e-14, max_iterations=3)
        with pytest.warns(ConvergenceWarning):
            res = propagate_iterative(Srw, Y_CHAIN, cfg)
        assert not res.converged and res.n_iterations == 3

    def test_fixed_point_property(self, rng):
        cfg = PropagationConfig()
        for _ in range(10):
            h = random_hypergraph(rng, n_max=40)
            _, Srw, Ssym, _, _ = ops(h)
            Y = random_labels(rng, h.n_vertices, 3)
            for S in (Srw, Ssym):
                res = propagate_iterative(S, Y, cfg)
                gap = res.F - (cfg.alpha * S.values @ res.F + (1 - cfg.alpha) * Y)
                assert np.max(np.abs(gap)) < cfg.tolerance


class TestClosedForm:
    def test_alpha_zero_is_identity(self, chain):
        _, Srw, Ssym, _, _ = ops(chain)
        for S in (Srw, Ssym):
            np.testing.assert_array_equal(propagate_closed_form(S, Y_CHAIN, 0.0), Y_CHAIN)

    def test_chain_sign_pattern(self, chain):
        _, _, Ssym, _, _ = ops(chain)
        F = propagate_closed_form(Ssym, Y_CHAIN, 0.85)
        assert abs(F[1]) < 1e-15
        assert F[0] > 0
        assert F[0] == pytest.approx(-F[2], abs=1e-15)

    def test_residual(self, rng):
        for _ in range(10):
            h = random_hypergraph(rng, n_max=40)
            _, Srw, Ssym, _, _ = ops(h)
            Y = random_labels(rng, h.n_vertices, 4)
            for S in (Srw, Ssym):
                F = propagate_closed_form(S, Y, 0.85)
                R = (np.eye(h.n_vertices) - 0.85 * S.values) @ F - 0.15 * Y
                assert np.linalg.norm(R) <= 1e-8 * max(np.linalg.norm(0.15 * Y), 1e-300)

    def test_rw_similarity_path_matches_lu(self, rng):
        h = random_hypergraph(rng, n_max=30)
        _, Srw, _, _, _ = ops(h)
        Y = random_labels(rng, h.n_vertices, 2)
        direct = np.linalg.solve(np.eye(h.n_vertices) - 0.85 * Srw.values, 0.15 * Y)
        np.testing.assert_allclose(propagate_closed_form(Srw, Y, 0.85), direct, atol=1e-10)
        # plain ndarray takes the general path
        np.testing.assert_allclose(propagate_closed_form(Srw.values, Y, 0.85), direct, atol=1e-10)

    def test_equivalence_with_iteration(self, rng):
        for _ in range(20):
            h = random_hypergraph(rng, n_max=40)
            _, Srw, Ssym, _, _ = ops(h)
            Y = random_labels(rng, h.n_vertices, int(rng.integers(1, 5)))
            for S in (Srw, Ssym):
                res = propagate_iterative(S, Y)
                assert res.converged and res.n_iterations <= 1000
                assert np.max(np.abs(res.F - propagate_closed_form(S, Y, 0.85))) < 1e-5


class TestRegularized:
    def test_chain_exact(self, chain):
        # exact rational solve of (L + I) F = Y
        M = sympy.Matrix([[sympy.Rational(3, 2), -sympy.Rational(1, 2), 0],
                          [-sympy.Rational(1, 2), 2, -sympy.Rational(1, 2)],
                          [0, -sympy.Rational(1, 2), sympy.Rational(3, 2)]])
        exact = M.LUsolve(sympy.Matrix([1, 0, -1]))
        assert list(exact) == [sympy.Rational(2, 3), 0, -sympy.Rational(2, 3)]
        _, _, _, L, _ = ops(chain)
        np.testing.assert_allclose(solve_unnormalized(L, Y_CHAIN, 1.0), [2 / 3, 0, -2 / 3], atol=1e-10)

    def test_sym_chain_symmetry(self, chain):
        _, _, _, _, Lsym = ops(chain)
        F = solve_sym_regularized(Lsym, Y_CHAIN, 1.0)
        assert abs(F[1]) < 1e-15 and F[0] == pytest.approx(-F[2], abs=1e-15)

    def test_large_gamma_keeps_labels(self, rng):
        h = random_hypergraph(rng, n_max=30)
        _, _, _, L, _ = ops(h)
        Y = random_labels(rng, h.n_vertices, 2)
        F = solve_unnormalized(L, Y, 1e8)
        lab = Y != 0
        assert np.max(np.abs(F[lab] - Y[lab])) < 1e-6

    def test_zero_labels(self, chain):
        _, _, _, L, Lsym = ops(chain)
        np.testing.assert_array_equal(solve_unnormalized(L, np.zeros((3, 2)), 1.0), 0.0)
        np.testing.assert_array_equal(solve_sym_regularized(Lsym, np.zeros((3, 2)), 1.0), 0.0)

    def test_gamma_must_be_positive(self, chain):
        _, _, _, L, _ = ops(chain)
        with pytest.raises(ValueError):
            solve_unnormalized(L, Y_CHAIN, 0.0)

    def test_stationarity_linearity_energy(self, rng):
        for _ in range(15):
            h = random_hypergraph(rng, n_max=40)
            d, _, Ssym, L, Lsym = ops(h)
            Y = random_labels(rng, h.n_vertices, 3)
            g = float(rng.uniform(0.1, 5.0))
            F = solve_unnormalized(L, Y, g)
            Fs = solve_sym_regularized(Lsym, Y, g)
            assert np.max(np.abs(L.values @ F + g * (F - Y))) <= 1e-8
            assert np.max(np.abs(Lsym.values @ Fs + g * (Fs - Y))) <= 1e-8
            np.testing.assert_allclose(solve_unnormalized(L, 2 * Y, g), 2 * F, atol=1e-10)
            np.testing.assert_allclose(propagate_closed_form(Ssym, Y, alpha_from_gamma(g)), Fs, atol=1e-10)

            def energy(G):
                smooth = sum(quadratic_form_oracle(h, d, G[:, j]) for j in range(G.shape[1]))
                return smooth + g * np.sum((G - Y) ** 2)

            assert energy(F) <= energy(Y) + 1e-12
            # F is the minimizer, so perturbing it cannot lower the energy
            assert energy(F) <= energy(F + 1e-3 * rng.standard_normal(F.shape))


class TestPredict:
    def test_signs(self):
        np.testing.assert_array_equal(predict([0.37, -2.1, 0.0]), [1, -1, -1])

    def test_chain_tie(self, chain):
        _, _, _, L, _ = ops(chain)
        P = predict(solve_unnormalized(L, Y_CHAIN, 1.0))
        np.testing.assert_array_equal(P, [1, -1, -1])

    def test_roundoff_counts_as_tie(self):
        np.testing.assert_array_equal(predict([1e-17, -1e-17, 1e-9]), [-1, -1, 1])
