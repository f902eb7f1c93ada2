"""
Estimator 估计层

按行可分的惩罚似然 DAG 估计 (lasso / 自适应 lasso)。

主要组件：
- EstimationConfig: 估计配置 (alpha, alpha0, gamma, 求解器控制)
- standardize: 列标准化
- normal_upper_quantile / lambda_for_row: 控制误差的调参公式
- estimate_lasso / estimate_adaptive_lasso / estimate: 估计入口
- adaptive_weights / refit_support / noise_scaled: 自适应权重 (重拟合、噪声尺度)
- verify_kkt: 逐行 KKT 复核
- ESTIMATORS: 惩罚类型注册表
"""

from app.estimator.config import EstimationConfig, normalize_penalty
from app.estimator.estimator import (
    ESTIMATORS,
    EstimateResult,
    RowDiagnostics,
    adaptive_weights,
    estimate,
    estimate_adaptive_lasso,
    estimate_lasso,
    noise_scaled,
    refit_support,
    row_lambdas,
    standardize,
    verify_kkt,
)
from app.estimator.tuning import lambda_for_row, normal_upper_quantile

__all__ = [
    "EstimationConfig",
    "normalize_penalty",
    "EstimateResult",
    "RowDiagnostics",
    "standardize",
    "normal_upper_quantile",
    "lambda_for_row",
    "row_lambdas",
    "adaptive_weights",
    "refit_support",
    "noise_scaled",
    "estimate_lasso",
    "estimate_adaptive_lasso",
    "estimate",
    "verify_kkt",
    "ESTIMATORS",
]
