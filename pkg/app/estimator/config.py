"""
估计器配置数据类
"""

from dataclasses import asdict, dataclass, fields
from typing import Any

from app.core.errors import DomainError
from app.graph.types import DEFAULT_EDGE_THRESHOLD
from app.solver.lasso import DEFAULT_MAX_SWEEPS, DEFAULT_TOL

# CLI / 报告中接受的惩罚名称别名
PENALTY_ALIASES: dict[str, str] = {
    "alasso": "adaptive_lasso",
    "adaptive": "adaptive_lasso",
}


def normalize_penalty(name: str) -> str:
    key = name.strip().lower()
    return PENALTY_ALIASES.get(key, key)


@dataclass(frozen=True)
class EstimationConfig:
    """
    估计配置

    使用示例:

    ```python
    cfg = EstimationConfig(penalty="lasso", alpha=0.05)
    cfg = EstimationConfig.from_settings(penalty="alasso")  # 从 Settings 取默认值
    ```
    """

    # 惩罚类型: lasso / adaptive_lasso (别名 alasso)
    penalty: str = "adaptive_lasso"

    # 调参公式中的显著性水平 α
    alpha: float = 0.10

    # 自适应 lasso 第一阶段 (初始权重) 的显著性水平
    alpha0: float = 0.50

    # 自适应权重的幂 γ
    gamma: float = 1.0

    # 求解器控制
    tol: float = DEFAULT_TOL
    max_sweeps: int = DEFAULT_MAX_SWEEPS

    # |A_ij| > edge_threshold 才计为边
    edge_threshold: float = DEFAULT_EDGE_THRESHOLD

    # 行子问题并行数 (joblib 线程)
    n_jobs: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "penalty", normalize_penalty(self.penalty))
        if not 0.0 < self.alpha < 1.0:
            raise DomainError("alpha", self.alpha, "(0, 1)")
        if not 0.0 < self.alpha0 < 1.0:
            raise DomainError("alpha0", self.alpha0, "(0, 1)")
        if not self.gamma > 0.0:
            raise DomainError("gamma", self.gamma, "(0, +inf)")
        if not self.tol > 0.0:
            raise DomainError("tol", self.tol, "(0, +inf)")
        if self.max_sweeps < 1:
            raise DomainError("max_sweeps", self.max_sweeps, "positive integers")
        if self.edge_threshold < 0.0:
            raise DomainError("edge_threshold", self.edge_threshold, "[0, +inf)")
        if self.n_jobs == 0:
            raise DomainError("n_jobs", self.n_jobs, "nonzero integers (joblib convention)")

    @classmethod
    def from_settings(cls, settings: Any = None, **overrides: Any) -> "EstimationConfig":
        """由 Settings 构造，overrides 中非 None 的值优先"""
        if settings is None:
            from app.config import get_settings

            settings = get_settings()
        values: dict[str, Any] = {
            "alpha": settings.alpha,
            "alpha0": settings.alpha0,
            "gamma": settings.gamma,
            "tol": settings.tol,
            "max_sweeps": settings.max_sweeps,
            "edge_threshold": settings.edge_threshold,
            "n_jobs": settings.workers,
        }
        known = {f.name for f in fields(cls)}
        values.update({k: v for k, v in overrides.items() if v is not None and k in known})
        return cls(**values)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)
