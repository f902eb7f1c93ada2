"""
加权 ℓ1 正则最小二乘求解器

目标函数 (无 1/2 因子):

    n^{-1} ‖y - Xθ‖² + λ Σ_j w_j |θ_j|

一阶最优 (KKT) 条件，G_j(θ) = -2 n^{-1} X_jᵀ (y - Xθ):
- θ_j ≠ 0:  G_j(θ) = -sign(θ_j) w_j λ
- θ_j = 0:  |G_j(θ)| <= w_j λ

坐标更新与 KKT 检查共用同一约定：θ_j ← S(z_j, λ w_j / 2) / G_jj，
其中 z_j 为偏残差相关，单位列尺度下 G_jj = 1。
w_j = +inf 的坐标不参与扫描，系数固定为 0。
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np

from app.core.errors import DimensionMismatchError, DomainError, NotConvergedError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-7
DEFAULT_MAX_SWEEPS = 10_000

# 收敛时要求 KKT 在 KKT_TOL_FACTOR * tol 内成立
KKT_TOL_FACTOR = 10.0

STANDARDIZATION_TOL = 1e-8


def soft_threshold(z, t):
    """
    软阈值算子 sign(z) · max(|z| - t, 0)

    标量输入返回 float，数组输入逐元素计算。
    """
    if np.isscalar(z) and np.isscalar(t):
        if t < 0:
            raise DomainError("t", t, "t >= 0")
        if z > t:
            return float(z - t)
        if z < -t:
            return float(z + t)
        return 0.0
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise DomainError("t", "negative entry", "t >= 0")
    z_arr = np.asarray(z, dtype=float)
    return np.sign(z_arr) * np.maximum(np.abs(z_arr) - t_arr, 0.0)


@dataclass(frozen=True)
class LassoProblem:
    """
    单行加权 lasso 子问题

    gram / xty / yy 可由调用方预先给出 (估计器对整张数据只算一次 S = n^{-1} XᵀX，
    各行取切片)；未给出时由 design / response 计算。
    """

    design: np.ndarray
    response: np.ndarray
    weights: np.ndarray | None = None
    lam: float = 0.0

    # 预计算的 n^{-1} XᵀX、n^{-1} Xᵀy、n^{-1} yᵀy
    gram: np.ndarray | None = field(default=None, repr=False)
    xty: np.ndarray | None = field(default=None, repr=False)
    yy: float | None = field(default=None, repr=False)

    # 要求列与响应已标准化 (均值 0, n^{-1}‖·‖² = 1)
    require_standardized: bool = True

    def __post_init__(self) -> None:
        design = np.asarray(self.design, dtype=float)
        response = np.asarray(self.response, dtype=float)
        if design.ndim != 2:
            raise DimensionMismatchError("design", "2-d array", design.shape)
        if response.shape != (design.shape[0],):
            raise DimensionMismatchError("response", (design.shape[0],), response.shape)
        n, k = design.shape
        if n < 1:
            raise DimensionMismatchError("design", "n >= 1 rows", design.shape)

        weights = np.ones(k) if self.weights is None else np.asarray(self.weights, dtype=float)
        if weights.shape != (k,):
            raise DimensionMismatchError("weights", (k,), weights.shape)
        if np.any(np.isnan(weights)) or np.any(weights < 1.0):
            raise DomainError("weights", weights.tolist(), "[1, +inf]")
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise DomainError("lambda", self.lam, "[0, +inf)")

        if self.require_standardized:
            _check_standardized("design", design)
            _check_standardized("response", response[:, None])

        gram = design.T @ design / n if self.gram is None else np.asarray(self.gram, dtype=float)
        xty = design.T @ response / n if self.xty is None else np.asarray(self.xty, dtype=float)
        if gram.shape != (k, k):
            raise DimensionMismatchError("gram", (k, k), gram.shape)
        if xty.shape != (k,):
            raise DimensionMismatchError("xty", (k,), xty.shape)
        yy = float(response @ response / n) if self.yy is None else float(self.yy)

        object.__setattr__(self, "design", design)
        object.__setattr__(self, "response", response)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "xty", xty)
        object.__setattr__(self, "yy", yy)

    @property
    def n(self) -> int:
        return int(self.design.shape[0])

    @property
    def k(self) -> int:
        return int(self.design.shape[1])

    def gradient(self, coefficients: np.ndarray) -> np.ndarray:
        """G(θ) = -2 (n^{-1}Xᵀy - n^{-1}XᵀX θ)"""
        return -2.0 * (self.xty - self.gram @ coefficients)

    def objective(self, coefficients: np.ndarray) -> float:
        """n^{-1}‖y - Xθ‖² + λ Σ w_j |θ_j|"""
        theta = np.asarray(coefficients, dtype=float)
        finite = np.isfinite(self.weights)
        if np.any(theta[~finite] != 0.0):
            return float("inf")
        loss = self.yy - 2.0 * float(self.xty @ theta) + float(theta @ self.gram @ theta)
        penalty = self.lam * float(np.sum(self.weights[finite] * np.abs(theta[finite])))
        return loss + penalty

    def with_lambda(self, lam: float) -> "LassoProblem":
        return replace(self, lam=lam, require_standardized=False)


def _check_standardized(what: str, columns: np.ndarray) -> None:
    if columns.shape[1] == 0:
        return
    means = columns.mean(axis=0)
    scales = np.mean(columns**2, axis=0)
    if np.max(np.abs(means)) > STANDARDIZATION_TOL or np.max(np.abs(scales - 1.0)) > STANDARDIZATION_TOL:
        raise DomainError(what, "unstandardized columns", "mean 0 and n^{-1}‖column‖² = 1")


@dataclass(frozen=True)
class LassoSolution:
    """求解结果"""

    coefficients: np.ndarray
    iterations: int
    converged: bool
    objective: float
    kkt_worst: float = float("nan")
    objective_trace: tuple[float, ...] = field(default=(), repr=False)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(np.flatnonzero(self.coefficients).tolist())


@dataclass(frozen=True)
class KKTReport:
    """KKT 证书：逐坐标松弛量与最坏违背"""

    passed: bool
    worst_violation: float
    slacks: np.ndarray = field(repr=False)

    @property
    def worst_index(self) -> int:
        return int(np.argmax(self.slacks)) if self.slacks.size else -1


def kkt_check(prob: LassoProblem, coefficients: np.ndarray, tol: float) -> KKTReport:
    """
    检查加权 lasso 的 KKT 条件

    Raises:
        DimensionMismatchError: coefficients 长度与问题不符
    """
    theta = np.asarray(coefficients, dtype=float)
    if theta.shape != (prob.k,):
        raise DimensionMismatchError("coefficients", (prob.k,), theta.shape)
    if tol <= 0:
        raise DomainError("tol", tol, "tol > 0")

    grad = prob.gradient(theta)
    bound = prob.weights * prob.lam
    slacks = np.zeros(prob.k)
    finite = np.isfinite(prob.weights)
    nonzero = theta != 0.0

    on = finite & nonzero
    slacks[on] = np.abs(grad[on] + np.sign(theta[on]) * bound[on])
    off = finite & ~nonzero
    slacks[off] = np.maximum(np.abs(grad[off]) - bound[off], 0.0)
    # 无穷权重坐标必须为 0
    slacks[~finite & nonzero] = np.inf

    worst = float(slacks.max()) if slacks.size else 0.0
    return KKTReport(passed=worst <= tol, worst_violation=worst, slacks=slacks)


def lambda_max(prob: LassoProblem) -> float:
    """使全零解满足 KKT 的最小 λ：max_j |2 n^{-1} X_jᵀ y| / w_j"""
    finite = np.isfinite(prob.weights)
    if not np.any(finite):
        return 0.0
    return float(np.max(np.abs(2.0 * prob.xty[finite]) / prob.weights[finite]))


def _tracked_objective(prob: LassoProblem, theta: np.ndarray, resid: np.ndarray, thresholds: np.ndarray) -> float:
    # resid = c - Gθ，故 θᵀGθ = θᵀc - θᵀresid，单次扫描内 O(k)
    loss = prob.yy - float(prob.xty @ theta) - float(theta @ resid)
    return loss + 2.0 * float(thresholds @ np.abs(theta))


def solve_weighted_lasso(
    prob: LassoProblem,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    warm_start: np.ndarray | None = None,
    raise_on_failure: bool = False,
) -> LassoSolution:
    """
    循环坐标下降求解加权 lasso

    首轮全量扫描后在活跃集上迭代，活跃集收敛后再做一次全量扫描确认；
    全量扫描最大系数变化 < tol 且 KKT 在 10·tol 内成立时判定收敛。
    扫描顺序固定，结果确定性可复现。

    Raises:
        DimensionMismatchError: warm_start 形状不符
        NotConvergedError: 仅当 raise_on_failure=True 且达到 max_sweeps
    """
    if tol <= 0:
        raise DomainError("tol", tol, "tol > 0")
    if max_sweeps < 1:
        raise DomainError("max_sweeps", max_sweeps, "max_sweeps >= 1")

    k = prob.k
    theta = np.zeros(k)
    if warm_start is not None:
        start = np.asarray(warm_start, dtype=float)
        if start.shape != (k,):
            raise DimensionMismatchError("warm_start", (k,), start.shape)
        theta[:] = start
    free = np.flatnonzero(np.isfinite(prob.weights))
    theta[~np.isfinite(prob.weights)] = 0.0

    gram = prob.gram
    diag = np.diag(gram).copy()
    thresholds = np.zeros(k)
    thresholds[free] = prob.lam * prob.weights[free] / 2.0
    # 全零列的系数无法被识别，固定为 0
    free = free[diag[free] > 0.0]
    free_list = free.tolist()

    objective = prob.objective(theta)
    trace = [objective]
    sweeps = 0
    converged = False
    full_sweep = True
    kkt_worst = float("nan")

    while sweeps < max_sweeps:
        if full_sweep:
            coords = free_list
            # 全量扫描前重算残差相关，消除增量更新的舍入漂移；只用非零列
            nz = np.flatnonzero(theta)
            resid = prob.xty - gram[:, nz] @ theta[nz]
        else:
            coords = [j for j in free_list if theta[j] != 0.0]

        max_change = 0.0
        for j in coords:
            old = theta[j]
            z = resid[j] + diag[j] * old
            t = thresholds[j]
            if z > t:
                new = (z - t) / diag[j]
            elif z < -t:
                new = (z + t) / diag[j]
            else:
                new = 0.0
            if new != old:
                delta = new - old
                resid -= gram[j] * delta
                theta[j] = new
                if abs(delta) > max_change:
                    max_change = abs(delta)
        sweeps += 1

        previous = objective
        objective = _tracked_objective(prob, theta, resid, thresholds)
        trace.append(objective)
        if objective > previous + 1e-12 * (1.0 + abs(previous)):
            logger.warning("Objective increased during sweep %d: %.17g -> %.17g", sweeps, previous, objective)

        if max_change < tol:
            if not full_sweep:
                full_sweep = True
                continue
            report = kkt_check(prob, theta, KKT_TOL_FACTOR * tol)
            kkt_worst = report.worst_violation
            if report.passed:
                converged = True
                break
        else:
            full_sweep = False

    if not converged:
        kkt_worst = kkt_check(prob, theta, KKT_TOL_FACTOR * tol).worst_violation
        logger.warning(
            "Coordinate descent stopped after %d sweeps without converging (k=%d, kkt=%.3g)",
            sweeps,
            k,
            kkt_worst,
        )
    else:
        logger.debug("Converged in %d sweeps (k=%d, kkt=%.3g)", sweeps, k, kkt_worst)

    solution = LassoSolution(
        coefficients=theta,
        iterations=sweeps,
        converged=converged,
        objective=prob.objective(theta),
        kkt_worst=kkt_worst,
        objective_trace=tuple(trace),
    )
    if not converged and raise_on_failure:
        raise NotConvergedError(solution)
    return solution


def lasso_path(
    prob: LassoProblem,
    lambdas: Sequence[float] | None = None,
    n_lambdas: int = 20,
    min_ratio: float = 1e-3,
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> list[tuple[float, LassoSolution]]:
    """
    路径式求解：λ 从大到小，逐个热启动

    未给出 lambdas 时在 [min_ratio·λ_max, λ_max] 上取对数等距网格。

    Returns:
        [(λ, solution)]，λ 递减
    """
    if lambdas is None:
        top = lambda_max(prob)
        if top == 0.0:
            grid = [0.0]
        else:
            grid = np.geomspace(top, top * min_ratio, n_lambdas).tolist()
    else:
        grid = sorted((float(v) for v in lambdas), reverse=True)

    path: list[tuple[float, LassoSolution]] = []
    warm: np.ndarray | None = None
    for lam in grid:
        solution = solve_weighted_lasso(prob.with_lambda(lam), tol=tol, max_sweeps=max_sweeps, warm_start=warm)
        path.append((lam, solution))
        warm = solution.coefficients
    return path
