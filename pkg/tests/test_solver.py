import numpy as np
import pytest

from ellipcenters import (GenParams, QuadraticProblem, SolverConfig,
                          StationaryPointError, Termination, Variant,
                          generate_instance, me_step, minimize,
                          semiline_search)


class TestMeStep:
    def test_radial_symmetry_takes_midpoint_to_minimizer(self):
        p = QuadraticProblem(np.eye(3), np.zeros(3))
        x = np.array([1.0, -2.0, 0.5])
        x_next, diag = me_step(p, x)
        assert diag.branch == "midpoint"  # grad at y = -x is collinear
        assert np.linalg.norm(x_next) <= 1e-8

    def test_two_dimensional_quadratic_one_shot(self):
        p = QuadraticProblem(np.diag([1.0, 4.0]), np.zeros(2))
        x_next, diag = me_step(p, np.array([1.0, 1.0]))
        assert diag.branch == "ellipse"
        assert np.linalg.norm(x_next) <= 1e-10

    def test_descent_contract_both_branches(self):
        for kind in ("quadratic", "logsumexp"):
            p, x0 = generate_instance(kind, 10, 3, GenParams(kappa=100))
            x_next, diag = me_step(p, x0)
            f0 = p.value(x0)
            assert diag.f_next <= diag.f_mid
            assert diag.f_mid < f0
            assert p.value(x_next) == pytest.approx(diag.f_next, abs=1e-12)

    def test_rejects_already_converged_point(self):
        p = QuadraticProblem(np.eye(2), np.zeros(2))
        with pytest.raises(StationaryPointError):
            me_step(p, np.array([1e-6, 0.0]))

    def test_level_point_gradient_never_uphill_along_ray(self):
        # the ray re-crosses the level set going uphill, so the gradients at
        # x and at the level point have a nonpositive inner product
        p, x = generate_instance("logsumexp", 12, 8)
        for _ in range(6):
            g = p.gradient(x)
            if np.linalg.norm(g) <= 0.01:
                break
            x_next, diag = me_step(p, x)
            assert p.gradient(diag.y) @ g <= 1e-9
            x = x_next


class TestSemilineSearch:
    def test_sphere_lands_at_origin(self):
        p = QuadraticProblem(np.eye(2), np.zeros(2))
        v = semiline_search(p, np.array([1.0, 0.0]), np.array([-1.0, 0.0]),
                            Variant.SEMILINE_MIN)
        assert v == pytest.approx(1.0, abs=1e-8)

    def test_ascent_direction_returns_zero(self):
        p = QuadraticProblem(np.eye(2), np.zeros(2))
        v = semiline_search(p, np.array([1.0, 0.0]), np.array([1.0, 0.0]),
                            Variant.SEMILINE_MIN)
        assert v == pytest.approx(0.0, abs=1e-6)

    def test_shifted_quadratic_vertex(self):
        # f restricted to the ray is (v - 0.7)^2 + 1
        p = QuadraticProblem(np.diag([2.0, 2.0]), np.array([1.4, 0.0]))
        base = np.zeros(2)
        d = np.array([1.0, 0.0])
        v = semiline_search(p, base, d, Variant.SEMILINE_MIN)
        assert v == pytest.approx(0.7, abs=1e-8)

    def test_decrease_search_beats_the_base(self):
        p, x0 = generate_instance("logsumexp", 8, 1)
        base = 0.9 * x0
        d = -p.gradient(base)
        d = d / np.linalg.norm(d)
        v = semiline_search(p, base, d, Variant.DECREASE_SEARCH, scale=1.0)
        assert v > 0.0
        assert p.value(base + v * d) < p.value(base)


class TestMinimize:
    def test_stationary_start_reports_zero_iterations(self):
        p = QuadraticProblem(np.eye(2), np.zeros(2))
        run = minimize(p, np.array([1e-8, 0.0]))
        assert run.termination is Termination.CONVERGED
        assert run.iterations == 0
        assert len(run.iterates) == 1

    def test_two_dimensional_newton_equivalence(self):
        for seed in range(20):
            p, x0 = generate_instance("quadratic", 2, seed, GenParams(kappa=50))
            run = minimize(p, x0, SolverConfig(epsilon=1e-8, max_iterations=4))
            assert run.termination is Termination.CONVERGED
            assert run.iterations <= 2
            first_ellipse = next(k for k, r in enumerate(run.iterates[:-1])
                                 if r.branch == "ellipse")
            xs = np.linalg.solve(p.a, p.b)
            assert np.linalg.norm(run.iterates[first_ellipse + 1].x - xs) <= 1e-8

    def test_quadratic_convergence_and_distance_bound(self):
        p, x0 = generate_instance("quadratic", 100, 0, GenParams(kappa=1000))
        run = minimize(p, x0, SolverConfig(epsilon=0.01, max_iterations=2000))
        assert run.termination is Termination.CONVERGED
        values = [r.f for r in run.iterates]
        assert all(b < a for a, b in zip(values, values[1:]))
        xs = p.solution()
        assert np.linalg.norm(run.x_final - xs) <= run.grad_norm_final / p.mu + 1e-8

    def test_logsumexp_converges_with_sandwich_descent(self):
        p, x0 = generate_instance("logsumexp", 50, 4)
        run = minimize(p, x0)
        assert run.termination is Termination.CONVERGED
        f_start = run.iterates[0].f
        for rec, nxt in zip(run.iterates[:-1], run.iterates[1:]):
            assert rec.branch in ("ellipse", "midpoint")
            assert nxt.f <= rec.f_mid + 1e-12 * (1.0 + abs(rec.f))
            assert rec.f_mid <= rec.f
            assert rec.f <= f_start  # level-set containment
            gain = p.mu * rec.t**2 / 8.0 * rec.grad_norm**2
            assert rec.f_mid <= rec.f - gain + 1e-9 * (1.0 + abs(rec.f))

    def test_decrease_search_variant_converges(self):
        p, x0 = generate_instance("logsumexp", 30, 6)
        run = minimize(p, x0, SolverConfig(variant=Variant.DECREASE_SEARCH))
        assert run.termination is Termination.CONVERGED
        values = [r.f for r in run.iterates]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_max_iterations_reported(self):
        p, x0 = generate_instance("quadratic", 20, 2, GenParams(kappa=1000))
        run = minimize(p, x0, SolverConfig(epsilon=1e-6, max_iterations=3))
        assert run.termination is Termination.MAX_ITERATIONS
        assert run.iterations == 3

    def test_evaluation_counters_track_work(self):
        p, x0 = generate_instance("quadratic", 10, 5, GenParams(kappa=10))
        run = minimize(p, x0)
        assert run.n_grad_evals >= run.iterations + 1
        assert run.n_value_evals > run.iterations  # level step + line search work
        assert run.evaluations == run.n_value_evals + run.n_grad_evals

    def test_trace_records_steps(self):
        p, x0 = generate_instance("quadratic", 6, 9, GenParams(kappa=10))
        run = minimize(p, x0)
        for rec in run.iterates[:-1]:
            assert rec.t > 0.0
            assert rec.branch in ("ellipse", "midpoint", "stationary")
        assert run.iterates[-1].branch == "final"
        assert np.isnan(run.iterates[-1].t)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SolverConfig(epsilon=0.0)
        with pytest.raises(ValueError):
            SolverConfig(max_iterations=0)
        with pytest.raises(ValueError):
            SolverConfig(tau_level=-1.0)
