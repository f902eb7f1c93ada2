"""
惩罚似然 DAG 估计

已知因果顺序时，邻接矩阵的估计按行可分：
对 i = 2..p，把第 i 列对前 i-1 列做加权 lasso 回归，得到第 i 行系数。

- estimate_lasso: 单位权重
- estimate_adaptive_lasso: 先以 alpha0 跑 lasso 选支撑集并重拟合得初始估计 Ã，
  再以 w_ij = max(1, |Ã_ij|^{-γ}) (Ã_ij = 0 时为 +inf) 重新求解

λ_i(α) 的误差控制以单位噪声方差为前提。自适应 lasso 第二阶段因此在噪声尺度上
求解每一行：响应除以重拟合残差标准差 σ̂_i，Ã 也换算到同一尺度 (Ã_ij / σ̂_i)
后再取权重。λ 与权重下限 1 不变。

数据先按列标准化；系数在标准化尺度上报告。
各行子问题互不重叠，可并行 (joblib 线程)，按行号组装，结果与调度无关。
"""

import logging
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from app.core.data import DataMatrix
from app.core.errors import ConstantColumnError, DomainError
from app.core.registry import PriorityRegistry
from app.estimator.config import EstimationConfig, normalize_penalty
from app.estimator.tuning import lambda_for_row
from app.graph.ops import skeleton
from app.graph.types import AdjacencyMatrix, EdgeSet
from app.solver.lasso import (
    KKT_TOL_FACTOR,
    KKTReport,
    LassoProblem,
    kkt_check,
    solve_weighted_lasso,
)

logger = logging.getLogger(__name__)

RESIDUAL_SCALE_FLOOR = 1e-3


@dataclass(frozen=True)
class RowDiagnostics:
    """单行子问题诊断信息 (row 为 1-based)"""

    row: int
    lam: float
    iterations: int
    converged: bool
    kkt_worst: float
    n_active: int
    # 响应所除的噪声尺度 σ̂_i (lasso 为 1)
    noise_scale: float = 1.0


@dataclass(frozen=True)
class EstimateResult:
    """估计结果"""

    adjacency: AdjacencyMatrix
    rows: list[RowDiagnostics]
    config: EstimationConfig

    # 实际使用的权重矩阵 (下三角有效，+inf 表示系数固定为 0)
    weights: np.ndarray = field(repr=False)

    # 各行实际使用的 λ (下标 0-based，首行为 0)
    lambdas: np.ndarray = field(repr=False)

    columns: tuple[str, ...] = ()
    means: np.ndarray | None = field(default=None, repr=False)
    scales: np.ndarray | None = field(default=None, repr=False)

    # 各行响应的噪声尺度 (下标 0-based；缺省全为 1)
    noise_scales: np.ndarray | None = field(default=None, repr=False)

    # 自适应 lasso 第一阶段估计 Ã
    initial: "EstimateResult | None" = field(default=None, repr=False)

    @property
    def partial(self) -> bool:
        """任一行 (含第一阶段) 未收敛"""
        own = any(not r.converged for r in self.rows)
        return own or (self.initial is not None and self.initial.partial)

    @property
    def p(self) -> int:
        return self.adjacency.p

    def skeleton(self, threshold: float | None = None) -> EdgeSet:
        level = self.config.edge_threshold if threshold is None else threshold
        return skeleton(self.adjacency, level)

    def to_original_scale(self) -> AdjacencyMatrix:
        """回到原始单位：A_ij · scale_i / scale_j"""
        if self.scales is None:
            return self.adjacency
        ratio = self.scales[:, None] / self.scales[None, :]
        return AdjacencyMatrix(self.adjacency.entries * ratio)


def standardize(x: DataMatrix) -> tuple[DataMatrix, np.ndarray, np.ndarray]:
    """
    列标准化：均值 0，n^{-1}‖column‖² = 1

    Returns:
        (标准化矩阵, 列均值, 列尺度)

    Raises:
        DomainError: n < 2
        ConstantColumnError: 某列为常数
    """
    if x.n < 2:
        raise DomainError("n", x.n, "n >= 2")
    values = x.values
    for j in range(x.p):
        if np.ptp(values[:, j]) == 0.0:
            raise ConstantColumnError(j, x.columns[j])
    means = values.mean(axis=0)
    centered = values - means
    scales = np.sqrt(np.mean(centered**2, axis=0))
    for j in np.flatnonzero(scales <= 1e-12 * np.maximum(np.abs(means), 1e-300)):
        raise ConstantColumnError(int(j), x.columns[int(j)])
    return DataMatrix(centered / scales, x.columns), means, scales


def row_lambdas(p: int, n: int, alpha: float) -> np.ndarray:
    """全部行的 λ (0-based 下标，第 0 行无子问题记为 0)"""
    lambdas = np.zeros(p)
    for r in range(1, p):
        lambdas[r] = lambda_for_row(r + 1, p, n, alpha)
    return lambdas


def adaptive_weights(initial: AdjacencyMatrix, gamma: float) -> np.ndarray:
    """
    自适应权重 w_ij = max(1, |Ã_ij|^{-γ})，Ã_ij = 0 时为 +inf

    上三角与对角线不参与求解，置为 1。
    """
    magnitude = np.abs(initial.entries)
    with np.errstate(divide="ignore"):
        raw = np.where(magnitude > 0.0, magnitude ** (-gamma), np.inf)
    weights = np.maximum(1.0, raw)
    weights[np.triu_indices(initial.p)] = 1.0
    return weights


def refit_support(z: DataMatrix, initial: AdjacencyMatrix) -> tuple[AdjacencyMatrix, np.ndarray]:
    """
    在 lasso 选出的支撑集上做最小二乘重拟合

    Returns:
        (重拟合系数 (标准化尺度，支撑集外为 0), 各行残差标准差 σ̂)

    σ̂_i² = RSS_i / (n - k_i)，k_i 为第 i 行支撑集大小 (n <= k_i 时不做自由度修正)；
    第 0 行与空支撑集的行 σ̂_i = 1。下限 RESIDUAL_SCALE_FLOOR 防止近乎无噪声的列放大响应。
    """
    values = z.values
    n, p = values.shape
    gram = values.T @ values / n
    refit = np.zeros((p, p))
    scales = np.ones(p)
    for r in range(1, p):
        support = np.flatnonzero(initial.entries[r, :r])
        if support.size == 0:
            continue
        # G_SS b = n^{-1} Z_Sᵀ z_r 总有解；共线时取最小范数解
        b = np.linalg.lstsq(gram[np.ix_(support, support)], gram[support, r], rcond=None)[0]
        refit[r, support] = b
        loss = gram[r, r] - 2.0 * float(gram[support, r] @ b) + float(b @ gram[np.ix_(support, support)] @ b)
        dof = n - support.size
        variance = loss * n / dof if dof > 0 else loss
        scales[r] = np.sqrt(max(variance, RESIDUAL_SCALE_FLOOR**2))
    return AdjacencyMatrix(refit), scales


def noise_scaled(adjacency: AdjacencyMatrix, scales: np.ndarray) -> AdjacencyMatrix:
    """把标准化尺度的系数换算到噪声尺度：第 i 行除以 σ̂_i"""
    return AdjacencyMatrix(adjacency.entries / scales[:, None])


def _row_problem(
    z: np.ndarray,
    gram: np.ndarray,
    r: int,
    weights: np.ndarray,
    lam: float,
    noise_scale: float = 1.0,
) -> LassoProblem:
    if noise_scale == 1.0:
        return LassoProblem(
            design=z[:, :r],
            response=z[:, r],
            weights=weights[r, :r],
            lam=lam,
            gram=gram[:r, :r],
            xty=gram[r, :r],
            yy=gram[r, r],
        )
    # 响应为 z_i / σ̂_i，不再是单位尺度
    return LassoProblem(
        design=z[:, :r],
        response=z[:, r] / noise_scale,
        weights=weights[r, :r],
        lam=lam,
        gram=gram[:r, :r],
        xty=gram[r, :r] / noise_scale,
        yy=gram[r, r] / noise_scale**2,
        require_standardized=False,
    )


def _solve_rows(
    z: DataMatrix,
    weights: np.ndarray,
    lambdas: np.ndarray,
    cfg: EstimationConfig,
    warm: np.ndarray | None = None,
    noise: np.ndarray | None = None,
) -> tuple[np.ndarray, list[RowDiagnostics]]:
    values = z.values
    n, p = values.shape
    noise = np.ones(p) if noise is None else noise
    # S = n^{-1} XᵀX 只算一次，各行取切片
    gram = values.T @ values / n

    def solve_row(r: int) -> tuple[int, np.ndarray, RowDiagnostics]:
        scale = float(noise[r])
        prob = _row_problem(values, gram, r, weights, float(lambdas[r]), scale)
        start = None if warm is None else np.where(np.isfinite(prob.weights), warm[r, :r] / scale, 0.0)
        solution = solve_weighted_lasso(prob, tol=cfg.tol, max_sweeps=cfg.max_sweeps, warm_start=start)
        if not solution.converged:
            logger.warning("Row %d (%s) did not converge after %d sweeps", r + 1, z.columns[r], solution.iterations)
        diag = RowDiagnostics(
            row=r + 1,
            lam=float(lambdas[r]),
            iterations=solution.iterations,
            converged=solution.converged,
            kkt_worst=solution.kkt_worst,
            n_active=len(solution.support),
            noise_scale=scale,
        )
        # 换回标准化尺度
        return r, solution.coefficients * scale, diag

    if cfg.n_jobs == 1:
        outputs = [solve_row(r) for r in range(1, p)]
    else:
        outputs = Parallel(n_jobs=cfg.n_jobs, backend="threading")(delayed(solve_row)(r) for r in range(1, p))

    entries = np.zeros((p, p))
    diagnostics: list[RowDiagnostics] = []
    for r, coefficients, diag in sorted(outputs, key=lambda item: item[0]):
        entries[r, :r] = coefficients
        diagnostics.append(diag)
    return entries, diagnostics


def _check_shape(x: DataMatrix) -> None:
    if x.p < 2:
        raise DomainError("p", x.p, "p >= 2")


def _estimate_weighted(
    x: DataMatrix,
    cfg: EstimationConfig,
    alpha: float,
    weights: np.ndarray | None = None,
    warm: np.ndarray | None = None,
    initial: EstimateResult | None = None,
    noise: np.ndarray | None = None,
) -> EstimateResult:
    _check_shape(x)
    z, means, scales = standardize(x)
    w = np.ones((x.p, x.p)) if weights is None else weights
    lambdas = row_lambdas(x.p, x.n, alpha)
    entries, diagnostics = _solve_rows(z, w, lambdas, cfg, warm=warm, noise=noise)
    result = EstimateResult(
        adjacency=AdjacencyMatrix(entries),
        rows=diagnostics,
        config=cfg,
        weights=w,
        lambdas=lambdas,
        columns=x.columns,
        means=means,
        scales=scales,
        noise_scales=noise,
        initial=initial,
    )
    if result.partial:
        logger.warning("Estimate is partial: %d row(s) did not converge", sum(not r.converged for r in diagnostics))
    return result


def estimate_lasso(x: DataMatrix, cfg: EstimationConfig) -> EstimateResult:
    """
    lasso 估计：单位权重，λ_i = lambda_for_row(i, p, n, cfg.alpha)

    Raises:
        DomainError: p < 2 或 n < 2
        ConstantColumnError: 存在常数列
    """
    logger.debug("Estimating lasso DAG (n=%d, p=%d, alpha=%g)", x.n, x.p, cfg.alpha)
    return _estimate_weighted(x, cfg, cfg.alpha)


def estimate_adaptive_lasso(x: DataMatrix, cfg: EstimationConfig) -> EstimateResult:
    """
    自适应 lasso 估计

    第一阶段以 cfg.alpha0 跑 lasso 选出支撑集，在支撑集上最小二乘重拟合得 Ã
    与各行残差尺度 σ̂；第二阶段以噪声尺度的 Ã_ij / σ̂_i 计算权重，响应除以 σ̂_i，
    以 cfg.alpha 重新求解全部行 (以第一阶段 lasso 解热启动)。
    第一阶段支撑集外权重为 +inf，估计支撑集必为其子集。
    """
    logger.debug("Estimating adaptive lasso DAG (n=%d, p=%d, alpha=%g, alpha0=%g)", x.n, x.p, cfg.alpha, cfg.alpha0)
    initial = _estimate_weighted(x, cfg, cfg.alpha0)
    z, _, _ = standardize(x)
    refit, noise = refit_support(z, initial.adjacency)
    weights = adaptive_weights(noise_scaled(refit, noise), cfg.gamma)
    return _estimate_weighted(
        x,
        cfg,
        cfg.alpha,
        weights=weights,
        warm=initial.adjacency.entries,
        initial=initial,
        noise=noise,
    )


Estimator = Callable[[DataMatrix, EstimationConfig], EstimateResult]

ESTIMATORS: PriorityRegistry[Estimator] = PriorityRegistry("penalty")
ESTIMATORS.register_builtin("lasso", estimate_lasso)
ESTIMATORS.register_builtin("adaptive_lasso", estimate_adaptive_lasso, aliases=("alasso",))


def estimate(x: DataMatrix, cfg: EstimationConfig) -> EstimateResult:
    """按 cfg.penalty 分派到已注册的估计器"""
    return ESTIMATORS.get(normalize_penalty(cfg.penalty))(x, cfg)


def verify_kkt(x: DataMatrix, result: EstimateResult, tol: float | None = None) -> list[KKTReport]:
    """
    用结果中实际使用的 λ、权重与噪声尺度逐行重新检查 KKT 条件

    tol 缺省为 KKT_TOL_FACTOR · cfg.tol。
    """
    level = KKT_TOL_FACTOR * result.config.tol if tol is None else tol
    z, _, _ = standardize(x)
    values = z.values
    gram = values.T @ values / x.n
    noise = np.ones(x.p) if result.noise_scales is None else result.noise_scales
    reports = []
    for r in range(1, x.p):
        scale = float(noise[r])
        prob = _row_problem(values, gram, r, result.weights, float(result.lambdas[r]), scale)
        reports.append(kkt_check(prob, result.adjacency.entries[r, :r] / scale, level))
    return reports
