"""
Solver 求解层

单行加权 ℓ1 正则最小二乘 (循环坐标下降) 与 KKT 证书检查。

主要组件：
- LassoProblem / LassoSolution / KKTReport
- soft_threshold: 坐标下降核心算子
- solve_weighted_lasso: 支持热启动的坐标下降
- kkt_check: 最优性证书
- lambda_max / lasso_path: 零解阈值与路径式求解
"""

from app.solver.lasso import (
    DEFAULT_MAX_SWEEPS,
    DEFAULT_TOL,
    KKT_TOL_FACTOR,
    KKTReport,
    LassoProblem,
    LassoSolution,
    kkt_check,
    lambda_max,
    lasso_path,
    soft_threshold,
    solve_weighted_lasso,
)

__all__ = [
    "LassoProblem",
    "LassoSolution",
    "KKTReport",
    "soft_threshold",
    "solve_weighted_lasso",
    "kkt_check",
    "lambda_max",
    "lasso_path",
    "DEFAULT_TOL",
    "DEFAULT_MAX_SWEEPS",
    "KKT_TOL_FACTOR",
]
