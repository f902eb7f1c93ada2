"""
实验规格

ExperimentSpec 描述一个模拟网格：(p, n, rho, dist, penalty, alpha, gamma) 的笛卡尔积，
每个单元重复 replicates 次。可由 CLI 参数或 YAML 文件 (--spec) 构造。

YAML 示例:

    p: [50, 100, 200]
    n: [100]
    penalty: [lasso, alasso]
    replicates: 100
    base_seed: 2024
"""

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml
from pydantic import BaseModel, Field, field_validator

from app.core.errors import DataFormatError, DomainError, InfeasibleSpecError
from app.estimator.config import EstimationConfig, normalize_penalty
from app.estimator.estimator import ESTIMATORS
from app.graph.types import DEFAULT_EDGE_THRESHOLD
from app.solver.lasso import DEFAULT_MAX_SWEEPS, DEFAULT_TOL
from app.synth.config import DagGenSpec, NoiseSpec, parse_noise_spec
from app.synth.noise import NOISE_SAMPLERS


@dataclass(frozen=True)
class GridCell:
    """网格中的一个单元 (index 为 0-based 的单元序号)"""

    index: int
    p: int
    n: int
    rho: float
    dist: str
    penalty: str
    alpha: float
    gamma: float
    edges: int
    max_neighborhood: int

    def gen_spec(self) -> DagGenSpec:
        return DagGenSpec(
            p=self.p,
            target_edges=self.edges,
            max_neighborhood=self.max_neighborhood,
            edge_weight=self.rho,
        )

    def noise_spec(self, mixture_weight: float = 0.5) -> NoiseSpec:
        return parse_noise_spec(self.dist, default_mixture_weight=mixture_weight)

    def settings(self) -> dict[str, Any]:
        return {
            "p": self.p,
            "n": self.n,
            "rho": self.rho,
            "dist": self.dist,
            "penalty": self.penalty,
            "alpha": self.alpha,
            "gamma": self.gamma,
            "edges": self.edges,
        }


class ExperimentSpec(BaseModel):
    """模拟实验规格"""

    # ----------------- 网格 -----------------

    p: list[int] = Field(default_factory=lambda: [50], min_length=1)
    n: list[int] = Field(default_factory=lambda: [100], min_length=1)
    rho: list[float] = Field(default_factory=lambda: [0.8], min_length=1)
    dist: list[str] = Field(default_factory=lambda: ["gaussian"], min_length=1)
    penalty: list[str] = Field(default_factory=lambda: ["adaptive_lasso"], min_length=1)
    alpha: list[float] = Field(default_factory=lambda: [0.10], min_length=1)
    gamma: list[float] = Field(default_factory=lambda: [1.0], min_length=1)

    # ----------------- 生成 -----------------

    edges: int | None = Field(default=None, ge=1, description="目标边数，缺省取 n")
    max_neighborhood: int = Field(default=5, ge=1)
    mixture_weight: float = Field(default=0.5, ge=0.0, le=1.0)
    fixed_dag: bool = Field(default=False, description="每个单元只生成一个 DAG，各重复重新采样数据")
    permute_order: bool = Field(default=False, description="估计前随机置换列顺序")

    # ----------------- 估计 -----------------

    alpha0: float = Field(default=0.50, gt=0.0, lt=1.0)
    tol: float = Field(default=DEFAULT_TOL, gt=0.0)
    max_sweeps: int = Field(default=DEFAULT_MAX_SWEEPS, ge=1)
    threshold: float = Field(default=DEFAULT_EDGE_THRESHOLD, ge=0.0)

    # ----------------- 运行 -----------------

    replicates: int = Field(default=1, ge=1)
    base_seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)
    allow_partial: bool = False

    @field_validator("p", "n")
    @classmethod
    def _positive(cls, values: list[int]) -> list[int]:
        if any(v < 1 for v in values):
            raise ValueError("grid sizes must be positive")
        return values

    @field_validator("alpha")
    @classmethod
    def _alpha_range(cls, values: list[float]) -> list[float]:
        if any(not 0.0 < v < 1.0 for v in values):
            raise ValueError("alpha must lie in (0, 1)")
        return values

    @field_validator("gamma")
    @classmethod
    def _gamma_positive(cls, values: list[float]) -> list[float]:
        if any(v <= 0.0 for v in values):
            raise ValueError("gamma must be positive")
        return values

    @field_validator("penalty")
    @classmethod
    def _known_penalty(cls, values: list[str]) -> list[str]:
        normalized = [normalize_penalty(v) for v in values]
        unknown = [v for v in normalized if v not in ESTIMATORS]
        if unknown:
            raise ValueError(f"unknown penalty {unknown}; known: {ESTIMATORS.list_names()}")
        return normalized

    @field_validator("dist")
    @classmethod
    def _valid_dist(cls, values: list[str]) -> list[str]:
        labels = []
        for v in values:
            noise = parse_noise_spec(v)
            if noise.kind not in NOISE_SAMPLERS:
                raise DomainError("dist", v, f"one of {NOISE_SAMPLERS.list_names()}")
            # 不带权重的 mixture 保持原样，由 mixture_weight 决定权重
            labels.append("mixture" if noise.kind == "mixture" and ":" not in v else noise.label())
        return labels

    @classmethod
    def from_yaml(
        cls,
        path: str | Path,
        defaults: dict[str, Any] | None = None,
        **overrides: Any,
    ) -> "ExperimentSpec":
        """
        从 YAML 文件加载

        优先级: overrides 中非 None 的值 > 文件内容 > defaults > 字段默认值
        """
        path = Path(path)
        try:
            with open(path, encoding="utf-8") as f:
                data = yaml.safe_load(f) or {}
        except (yaml.YAMLError, OSError) as e:
            raise DataFormatError(str(path), str(e)) from e
        if not isinstance(data, dict):
            raise DataFormatError(str(path), "top level must be a mapping")
        for key in ("p", "n", "rho", "dist", "penalty", "alpha", "gamma"):
            if key in data and not isinstance(data[key], list):
                data[key] = [data[key]]
        merged = dict(defaults or {})
        merged.update(data)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        return cls.model_validate(merged)

    def cells(self) -> list[GridCell]:
        """网格单元，按字段顺序的笛卡尔积确定编号"""
        grid = itertools.product(self.p, self.n, self.rho, self.dist, self.penalty, self.alpha, self.gamma)
        return [
            GridCell(
                index=k,
                p=p,
                n=n,
                rho=rho,
                dist=dist,
                penalty=penalty,
                alpha=alpha,
                gamma=gamma,
                edges=self.edges if self.edges is not None else n,
                max_neighborhood=self.max_neighborhood,
            )
            for k, (p, n, rho, dist, penalty, alpha, gamma) in enumerate(grid)
        ]

    def check_feasible(self) -> None:
        """
        Raises:
            InfeasibleSpecError: 某单元的目标边数超过度上限允许的最大值
        """
        for cell in self.cells():
            spec = cell.gen_spec()
            if spec.target_edges > spec.max_feasible_edges:
                raise InfeasibleSpecError(spec.target_edges, spec.max_feasible_edges)

    def estimation_config(self, cell: GridCell) -> EstimationConfig:
        # 外层按重复并行，行级求解保持单线程
        return EstimationConfig(
            penalty=cell.penalty,
            alpha=cell.alpha,
            alpha0=self.alpha0,
            gamma=cell.gamma,
            tol=self.tol,
            max_sweeps=self.max_sweeps,
            edge_threshold=self.threshold,
            n_jobs=1,
        )
