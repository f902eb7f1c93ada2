"""
结构恢复的统计验收测试 (慢速，默认不运行)

    pytest -m slow tests/acceptance
"""

import time

import numpy as np
import pytest

from app.estimator import EstimationConfig, estimate, row_lambdas, standardize, verify_kkt
from app.graph.ops import block_diagonal, skeleton
from app.metrics import evaluate, map_to_original
from app.solver import LassoProblem, solve_weighted_lasso
from app.synth import DagGenSpec, NoiseSpec, SeedStream, derive_seed, permute_columns, random_dag, sample_data

pytestmark = pytest.mark.slow

PENALTIES = ("lasso", "adaptive_lasso")


def bootstrap_lower(values: np.ndarray, seed: int = 0, draws: int = 2000) -> float:
    """均值的 95% 单侧 bootstrap 下界"""
    rng = np.random.default_rng(seed)
    means = rng.choice(values, size=(draws, values.size), replace=True).mean(axis=1)
    return float(np.quantile(means, 0.05))


def replicate_metrics(p: int, n: int, replicates: int, noise: NoiseSpec, base_seed: int = 2024) -> dict[str, list]:
    """同一份数据上比较两种惩罚，返回逐重复指标 (按惩罚类型)"""
    gen = DagGenSpec(p=p, target_edges=100, max_neighborhood=5, edge_weight=0.8)
    out: dict[str, list] = {penalty: [] for penalty in PENALTIES}
    for r in range(replicates):
        model = random_dag(gen, derive_seed(base_seed, 0, r, SeedStream.DAG))
        x = sample_data(model, n, noise, seed=derive_seed(base_seed, 0, r, SeedStream.DATA))
        truth = skeleton(model.adjacency, 0.0)
        for penalty in PENALTIES:
            result = estimate(x, EstimationConfig(penalty=penalty, alpha=0.10))
            out[penalty].append(evaluate(truth, result.skeleton(), p))
    return out


@pytest.fixture(scope="module")
def gaussian_runs() -> dict[str, list]:
    return replicate_metrics(50, 100, 100, NoiseSpec.gaussian())


class TestErrorControl:
    """两个互不相连的块：跨块连边的重复比例受 α 控制"""

    @pytest.mark.parametrize("penalty", PENALTIES)
    def test_cross_block_rate(self, penalty):
        # Arrange
        alpha = 0.05
        gen = DagGenSpec(p=20, target_edges=20, max_neighborhood=5)
        replicates = 400
        cfg = EstimationConfig(penalty=penalty, alpha=alpha)

        # Act
        crossed = 0
        for r in range(replicates):
            model = block_diagonal(
                [
                    random_dag(gen, derive_seed(7, 0, r, SeedStream.DAG)),
                    random_dag(gen, derive_seed(7, 1, r, SeedStream.DAG)),
                ]
            )
            x = sample_data(model, 100, seed=derive_seed(7, 0, r, SeedStream.DATA))
            result = estimate(x, cfg)
            crossed += any(j < 20 <= i for j, i in result.skeleton())

        # Assert
        assert crossed / replicates <= alpha + 0.03


class TestGaussianStudy:
    """p = 50, n = 100, ρ = 0.8, 100 条边，高斯噪声"""

    def test_adaptive_beats_lasso(self, gaussian_runs):
        lasso = np.array([m.shd for m in gaussian_runs["lasso"]], dtype=float)
        adaptive = np.array([m.shd for m in gaussian_runs["adaptive_lasso"]], dtype=float)

        assert adaptive.mean() < lasso.mean()
        assert bootstrap_lower(lasso - adaptive) > 0.0

    @pytest.mark.parametrize("penalty", PENALTIES)
    def test_false_positive_rate(self, gaussian_runs, penalty):
        fp_rate = np.mean([m.fp_rate for m in gaussian_runs[penalty]])

        assert fp_rate <= 0.04

    @pytest.mark.parametrize("noise", [NoiseSpec.student_t(4), NoiseSpec.mixture(0.5)], ids=["t4", "mixture"])
    def test_non_gaussian_robustness(self, gaussian_runs, noise):
        runs = replicate_metrics(50, 100, 100, noise)

        for penalty in PENALTIES:
            gaussian_mcc = np.mean([m.mcc for m in gaussian_runs[penalty]])
            other_mcc = np.mean([m.mcc for m in runs[penalty]])
            assert abs(other_mcc - gaussian_mcc) <= 0.1


class TestPermutedOrder:
    """置换列顺序：更高维、更稀疏时自适应 lasso 的 MCC 更高"""

    def test_mcc_improves_with_dimension(self):
        # Arrange
        cfg = EstimationConfig(penalty="adaptive_lasso")
        replicates = 20

        # Act
        mean_mcc = {}
        for cell, p in enumerate((50, 200)):
            gen = DagGenSpec(p=p, target_edges=100, max_neighborhood=5)
            values = []
            for r in range(replicates):
                model = random_dag(gen, derive_seed(11, cell, r, SeedStream.DAG))
                x = sample_data(model, 100, seed=derive_seed(11, cell, r, SeedStream.DATA))
                shuffled, permutation = permute_columns(x, derive_seed(11, cell, r, SeedStream.PERMUTATION))
                estimated = map_to_original(estimate(shuffled, cfg).skeleton(), permutation)
                values.append(evaluate(skeleton(model.adjacency, 0.0), estimated, p).mcc)
            mean_mcc[p] = float(np.mean(values))

        # Assert
        assert mean_mcc[200] > mean_mcc[50]


class TestConsistencyTrend:
    """固定 p = 30 的 DAG，MCC 随 n 增大 (允许一次逆序)"""

    def test_mcc_nondecreasing_in_n(self):
        # Arrange
        model = random_dag(DagGenSpec(p=30, target_edges=30, max_neighborhood=5), seed=5)
        truth = skeleton(model.adjacency, 0.0)
        cfg = EstimationConfig(penalty="adaptive_lasso")

        # Act
        means = []
        for cell, n in enumerate((50, 100, 200, 400)):
            values = []
            for r in range(100):
                x = sample_data(model, n, seed=derive_seed(13, cell, r, SeedStream.DATA))
                result = estimate(x, cfg)
                assert all(report.passed for report in verify_kkt(x, result))
                values.append(evaluate(truth, result.skeleton(), 30).mcc)
            means.append(float(np.mean(values)))

        # Assert
        inversions = sum(b < a for a, b in zip(means, means[1:], strict=False))
        assert inversions <= 1
        assert means[-1] > means[0]


def row_solve_seconds(p: int, n: int, repetitions: int, seed: int) -> float:
    """标准化与 Gram 预先算好，只对逐行坐标下降计时，返回重复的中位数 (秒)"""
    gen = DagGenSpec(p=p, target_edges=p, max_neighborhood=5)
    model = random_dag(gen, derive_seed(seed, p, 0, SeedStream.DAG))
    z, _, _ = standardize(sample_data(model, n, seed=derive_seed(seed, p, 0, SeedStream.DATA)))
    values = z.values
    gram = values.T @ values / n
    lambdas = row_lambdas(p, n, 0.1)
    problems = [
        LassoProblem(
            design=values[:, :r],
            response=values[:, r],
            weights=np.ones(r),
            lam=float(lambdas[r]),
            gram=gram[:r, :r],
            xty=gram[r, :r],
            yy=gram[r, r],
        )
        for r in range(1, p)
    ]
    for prob in problems:
        solve_weighted_lasso(prob)

    timings = []
    for _ in range(repetitions):
        start = time.perf_counter()
        for prob in problems:
            solve_weighted_lasso(prob)
        timings.append(time.perf_counter() - start)
    return float(np.median(timings))


class TestComplexity:
    """n 固定、稀疏度相当时，p 翻倍的逐行求解耗时约为 4 倍"""

    def test_quadratic_scaling(self):
        # Act
        small = row_solve_seconds(200, 100, repetitions=9, seed=3)
        large = row_solve_seconds(400, 100, repetitions=9, seed=3)

        # Assert
        assert 2.5 <= large / small <= 6.0
