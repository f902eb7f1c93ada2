"""
Experiments 实验层

模拟网格 (lasso / 自适应 lasso 的结构恢复研究、列顺序置换研究) 与计算时间研究。

主要组件：
- ExperimentSpec / GridCell: 实验规格 (CLI 参数或 YAML)
- run_replicate / run_simulation: 逐重复计算与产物写出
- run_benchmark: 耗时网格
"""

from app.experiments.benchmark import run_benchmark, time_estimate
from app.experiments.simulate import (
    GRID_COLUMNS,
    ReplicateOutcome,
    SimulationOutput,
    package_versions,
    run_replicate,
    run_simulation,
)
from app.experiments.spec import ExperimentSpec, GridCell

__all__ = [
    "ExperimentSpec",
    "GridCell",
    "ReplicateOutcome",
    "SimulationOutput",
    "GRID_COLUMNS",
    "run_replicate",
    "run_simulation",
    "package_versions",
    "run_benchmark",
    "time_estimate",
]
