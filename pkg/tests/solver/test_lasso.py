"""
加权 lasso 求解器测试

- 软阈值算子
- 单坐标闭式解与 KKT 证书
- 暴力枚举 oracle 对照 (k <= 3)
- 权重单调性、齐次性、路径求解
"""

import itertools

import numpy as np
import pytest

from app.core.errors import DimensionMismatchError, DomainError, NotConvergedError
from app.solver.lasso import (
    KKT_TOL_FACTOR,
    LassoProblem,
    kkt_check,
    lambda_max,
    lasso_path,
    soft_threshold,
    solve_weighted_lasso,
)
from tests.conftest import standardized


def single_coordinate(c: float, lam: float, weight: float = 1.0) -> LassoProblem:
    """k=1 标准化问题，n^{-1} xᵀy = c"""
    x = np.array([1.0, -1.0, 1.0, -1.0])
    u = np.array([1.0, 1.0, -1.0, -1.0])
    y = c * x + np.sqrt(1.0 - c * c) * u
    return LassoProblem(x[:, None], y, np.array([weight]), lam)


def random_problem(rng: np.random.Generator, n: int, k: int, lam: float | None = None) -> LassoProblem:
    x = standardized(rng.normal(size=(n, k)) + 0.5 * rng.normal(size=(n, 1)))
    beta = rng.normal(size=k) * (rng.random(k) < 0.7)
    y = standardized(x @ beta + rng.normal(size=n))
    weights = rng.uniform(1.0, 5.0, size=k)
    prob = LassoProblem(x, y, weights, 0.0)
    if lam is None:
        lam = float(rng.uniform(0.0, 1.2)) * lambda_max(prob)
    return prob.with_lambda(lam)


def oracle(prob: LassoProblem) -> np.ndarray:
    """
    枚举支撑集与符号模式：θ_S = G_SS^{-1}(c_S - λ w_S s / 2)，
    保留符号一致的候选，取目标函数最小者
    """
    best = np.zeros(prob.k)
    best_value = prob.objective(best)
    for size in range(1, prob.k + 1):
        for support in itertools.combinations(range(prob.k), size):
            idx = list(support)
            g = prob.gram[np.ix_(idx, idx)]
            for signs in itertools.product((-1.0, 1.0), repeat=size):
                s = np.array(signs)
                theta_s = np.linalg.solve(g, prob.xty[idx] - prob.lam * prob.weights[idx] * s / 2.0)
                if not np.all(np.sign(theta_s) == s):
                    continue
                theta = np.zeros(prob.k)
                theta[idx] = theta_s
                value = prob.objective(theta)
                if value < best_value:
                    best, best_value = theta, value
    return best


class TestSoftThreshold:
    """软阈值算子"""

    @pytest.mark.parametrize(
        ("z", "t", "expected"),
        [(1.0, 0.3, 0.7), (-0.2, 0.3, 0.0), (0.0, 0.0, 0.0), (-1.0, 0.25, -0.75), (0.3, 0.3, 0.0)],
    )
    def test_scalar(self, z, t, expected):
        assert soft_threshold(z, t) == pytest.approx(expected)

    def test_array(self):
        result = soft_threshold(np.array([1.0, -0.2, -2.0]), 0.5)

        np.testing.assert_allclose(result, [0.5, 0.0, -1.5])

    def test_negative_threshold(self):
        with pytest.raises(DomainError):
            soft_threshold(1.0, -0.1)


class TestLassoProblem:
    """LassoProblem 校验"""

    def test_rejects_unstandardized_design(self, rng):
        x = rng.normal(loc=3.0, size=(10, 2))
        y = standardized(rng.normal(size=(10, 1)))[:, 0]

        with pytest.raises(DomainError):
            LassoProblem(x, y, lam=0.1)

    def test_allows_unstandardized_when_requested(self, rng):
        x = rng.normal(loc=3.0, size=(10, 2))
        y = rng.normal(size=10)

        prob = LassoProblem(x, y, lam=0.1, require_standardized=False)

        assert prob.k == 2

    def test_rejects_weight_below_one(self):
        with pytest.raises(DomainError):
            single_coordinate(0.5, 0.4, weight=0.5)

    def test_rejects_negative_lambda(self):
        with pytest.raises(DomainError):
            single_coordinate(0.5, -0.1)

    def test_rejects_shape_mismatch(self, rng):
        x = standardized(rng.normal(size=(8, 2)))
        y = standardized(rng.normal(size=(7, 1)))[:, 0]

        with pytest.raises(DimensionMismatchError):
            LassoProblem(x, y)

    def test_rejects_wrong_weight_length(self, rng):
        x = standardized(rng.normal(size=(8, 2)))
        y = standardized(rng.normal(size=(8, 1)))[:, 0]

        with pytest.raises(DimensionMismatchError):
            LassoProblem(x, y, weights=np.ones(3))


class TestSolveSingleCoordinate:
    """k=1 闭式解"""

    def test_active_coefficient(self):
        # Arrange
        prob = single_coordinate(0.5, 0.4)

        # Act
        solution = solve_weighted_lasso(prob)

        # Assert
        assert solution.converged
        assert solution.coefficients[0] == pytest.approx(0.3, abs=1e-12)

    def test_zero_coefficient_and_slack(self):
        # Arrange
        prob = single_coordinate(0.15, 0.4)

        # Act
        solution = solve_weighted_lasso(prob)
        report = kkt_check(prob, solution.coefficients, 1e-9)

        # Assert
        assert solution.coefficients[0] == 0.0
        assert abs(prob.gradient(solution.coefficients)[0]) == pytest.approx(0.3)
        assert report.passed
        assert report.worst_violation == 0.0

    def test_weight_scales_threshold(self):
        # λ w / 2 = 0.4 -> θ = 0.1
        solution = solve_weighted_lasso(single_coordinate(0.5, 0.4, weight=2.0))

        assert solution.coefficients[0] == pytest.approx(0.1, abs=1e-12)

    def test_infinite_weight_pins_zero(self):
        solution = solve_weighted_lasso(single_coordinate(0.9, 0.01, weight=np.inf))

        assert solution.coefficients[0] == 0.0
        assert solution.converged


class TestSolveGeneral:
    """一般问题"""

    def test_zero_lambda_matches_least_squares(self, rng):
        # Arrange
        prob = random_problem(rng, 50, 4, lam=0.0)

        # Act
        solution = solve_weighted_lasso(prob, tol=1e-10)

        # Assert
        expected, *_ = np.linalg.lstsq(prob.design, prob.response, rcond=None)
        np.testing.assert_allclose(solution.coefficients, expected, atol=1e-7)

    def test_converged_solution_passes_kkt(self, rng):
        for _ in range(50):
            prob = random_problem(rng, 30, 6)

            solution = solve_weighted_lasso(prob)

            assert solution.converged
            assert kkt_check(prob, solution.coefficients, KKT_TOL_FACTOR * 1e-7).passed
            assert solution.kkt_worst <= KKT_TOL_FACTOR * 1e-7

    def test_objective_non_increasing(self, rng):
        prob = random_problem(rng, 40, 8)

        solution = solve_weighted_lasso(prob)

        trace = np.array(solution.objective_trace)
        assert np.all(np.diff(trace) <= 1e-12 * (1.0 + np.abs(trace[:-1])))
        assert solution.objective == pytest.approx(prob.objective(solution.coefficients))

    def test_large_lambda_gives_zero(self, rng):
        prob = random_problem(rng, 30, 5, lam=0.0)
        top = lambda_max(prob)

        at_top = solve_weighted_lasso(prob.with_lambda(top * (1.0 + 1e-9)))
        below = solve_weighted_lasso(prob.with_lambda(0.9 * top))

        assert not at_top.coefficients.any()
        assert below.coefficients.any()

    def test_infinite_weights_excluded(self, rng):
        # Arrange
        base = random_problem(rng, 30, 4, lam=0.05)
        weights = base.weights.copy()
        weights[[0, 2]] = np.inf
        prob = LassoProblem(base.design, base.response, weights, base.lam)

        # Act
        solution = solve_weighted_lasso(prob)

        # Assert
        assert solution.coefficients[0] == 0.0
        assert solution.coefficients[2] == 0.0
        assert kkt_check(prob, solution.coefficients, 1e-6).passed

    def test_warm_start_reaches_same_solution(self, rng):
        prob = random_problem(rng, 40, 5)
        cold = solve_weighted_lasso(prob, tol=1e-10)

        warm = solve_weighted_lasso(prob, tol=1e-10, warm_start=rng.normal(size=5))

        np.testing.assert_allclose(warm.coefficients, cold.coefficients, atol=1e-8)

    def test_deterministic(self, rng):
        prob = random_problem(rng, 40, 5)

        first = solve_weighted_lasso(prob)
        second = solve_weighted_lasso(prob)

        np.testing.assert_array_equal(first.coefficients, second.coefficients)
        assert first.iterations == second.iterations

    def test_not_converged_flagged(self, rng):
        prob = random_problem(rng, 40, 6, lam=0.0)

        solution = solve_weighted_lasso(prob, max_sweeps=1)

        assert not solution.converged
        assert solution.iterations == 1

    def test_not_converged_raises_when_requested(self, rng):
        prob = random_problem(rng, 40, 6, lam=0.0)

        with pytest.raises(NotConvergedError) as exc_info:
            solve_weighted_lasso(prob, max_sweeps=1, raise_on_failure=True)

        assert exc_info.value.solution.iterations == 1

    def test_warm_start_shape_checked(self, rng):
        prob = random_problem(rng, 20, 3)

        with pytest.raises(DimensionMismatchError):
            solve_weighted_lasso(prob, warm_start=np.zeros(2))

    def test_rejects_nonpositive_tol(self, rng):
        with pytest.raises(DomainError):
            solve_weighted_lasso(random_problem(rng, 20, 3), tol=0.0)


class TestOracle:
    """对照暴力枚举 oracle"""

    def test_matches_enumeration(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            # Arrange
            k = int(rng.integers(1, 4))
            n = int(rng.integers(5, 21))
            prob = random_problem(rng, n, k)

            # Act
            solution = solve_weighted_lasso(prob, tol=1e-10)
            expected = oracle(prob)

            # Assert
            assert solution.converged
            assert solution.objective == pytest.approx(prob.objective(expected), abs=1e-6)
            np.testing.assert_allclose(solution.coefficients, expected, atol=1e-5)
            assert set(np.flatnonzero(solution.coefficients)) == set(np.flatnonzero(expected))
            assert kkt_check(prob, solution.coefficients, KKT_TOL_FACTOR * 1e-10).passed


class TestStructuralProperties:
    """权重单调性与齐次性"""

    def test_weight_monotonicity(self, rng):
        for _ in range(30):
            prob = random_problem(rng, 40, 4)
            j = int(rng.integers(0, 4))
            heavier = prob.weights.copy()
            heavier[j] *= 1.5

            base = solve_weighted_lasso(prob, tol=1e-10)
            more = solve_weighted_lasso(LassoProblem(prob.design, prob.response, heavier, prob.lam), tol=1e-10)

            assert abs(more.coefficients[j]) <= abs(base.coefficients[j]) + 1e-8

    def test_homogeneity(self, rng):
        """权重 w、λ 的问题等价于列除以 w、单位权重的问题"""
        # Arrange
        prob = random_problem(rng, 50, 5)
        rescaled = LassoProblem(
            prob.design / prob.weights,
            prob.response,
            np.ones(5),
            prob.lam,
            require_standardized=False,
        )

        # Act
        weighted = solve_weighted_lasso(prob, tol=1e-11)
        unit = solve_weighted_lasso(rescaled, tol=1e-11)

        # Assert
        np.testing.assert_allclose(unit.coefficients / prob.weights, weighted.coefficients, atol=1e-7)
        assert unit.objective == pytest.approx(weighted.objective, abs=1e-9)


class TestKKTCheck:
    """KKT 证书"""

    def test_zero_vector_above_null_threshold_passes(self, rng):
        prob = random_problem(rng, 30, 4, lam=0.0)

        report = kkt_check(prob.with_lambda(lambda_max(prob)), np.zeros(4), 1e-12)

        assert report.passed

    def test_zero_vector_below_null_threshold_fails(self, rng):
        prob = random_problem(rng, 30, 4, lam=0.0)
        top = lambda_max(prob)

        report = kkt_check(prob.with_lambda(0.5 * top), np.zeros(4), 1e-9)

        expected = np.max(np.abs(2.0 * prob.xty) - 0.5 * top * prob.weights)
        assert not report.passed
        assert report.worst_violation == pytest.approx(expected)

    def test_nonzero_on_infinite_weight_fails(self):
        prob = single_coordinate(0.5, 0.4, weight=np.inf)

        report = kkt_check(prob, np.array([0.1]), 1.0)

        assert not report.passed
        assert report.worst_violation == np.inf

    def test_shape_mismatch(self, rng):
        prob = random_problem(rng, 20, 3)

        with pytest.raises(DimensionMismatchError):
            kkt_check(prob, np.zeros(4), 1e-6)


class TestLassoPath:
    """路径式求解"""

    def test_path_from_null_to_dense(self, rng):
        # Arrange
        prob = random_problem(rng, 60, 5, lam=0.0)

        # Act
        path = lasso_path(prob, n_lambdas=10)

        # Assert
        lams = [lam for lam, _ in path]
        assert lams == sorted(lams, reverse=True)
        assert lams[0] == pytest.approx(lambda_max(prob))
        assert np.max(np.abs(path[0][1].coefficients)) < 1e-12
        assert path[-1][1].coefficients.any()
        for lam, solution in path:
            assert solution.converged
            assert kkt_check(prob.with_lambda(lam), solution.coefficients, KKT_TOL_FACTOR * 1e-7).passed

    def test_explicit_grid_sorted(self, rng):
        prob = random_problem(rng, 30, 3)

        path = lasso_path(prob, lambdas=[0.01, 0.5, 0.1])

        assert [lam for lam, _ in path] == [0.5, 0.1, 0.01]
