"""
结构化产物 Schema

所有 JSON 产物 (估计报告、指标报告、DAG sidecar、运行清单) 的 Pydantic Model，
统一以 model_dump_json(indent=2) 写出。
"""

from typing import Any

from pydantic import BaseModel, Field


class EdgeRecord(BaseModel):
    """一条有向边 parent -> child"""

    parent: str = Field(..., description="父节点列名")
    child: str = Field(..., description="子节点列名")
    weight: float = Field(..., description="边权 (标准化尺度)")


class RowDiagnosticsModel(BaseModel):
    """单行子问题诊断"""

    row: int = Field(..., ge=2, description="行号 (1-based)")
    column: str = Field(..., description="该行对应的响应变量列名")
    lam: float = Field(..., ge=0.0, description="该行使用的 λ")
    iterations: int = Field(..., ge=0, description="完整扫描次数")
    converged: bool
    kkt_worst: float | None = Field(
        default=None,
        description="最终 KKT 最大违背量 (未计算时为 null)",
    )
    n_active: int = Field(..., ge=0, description="非零系数个数")
    noise_scale: float = Field(default=1.0, gt=0.0, description="响应所除的噪声尺度 (自适应 lasso 第二阶段)")


class EstimateReport(BaseModel):
    """估计诊断报告"""

    penalty: str
    config: dict[str, Any] = Field(default_factory=dict, description="估计配置回显")
    n: int = Field(..., ge=1)
    p: int = Field(..., ge=1)
    columns: list[str] = Field(default_factory=list)
    partial: bool = Field(default=False, description="存在未收敛的行")
    edges: list[EdgeRecord] = Field(default_factory=list)
    rows: list[RowDiagnosticsModel] = Field(default_factory=list)
    initial_edges: list[EdgeRecord] | None = Field(
        default=None,
        description="自适应 lasso 第一阶段估计的边 (lasso 时为 null)",
    )
    initial_rows: list[RowDiagnosticsModel] | None = None


class MetricsModel(BaseModel):
    """单次比较的指标"""

    tp: int = Field(..., ge=0)
    tn: int = Field(..., ge=0)
    fp: int = Field(..., ge=0)
    fn: int = Field(..., ge=0)
    shd: int = Field(..., ge=0)
    mcc: float = Field(..., ge=-1.0, le=1.0)
    fp_rate: float = Field(..., ge=0.0, le=1.0)
    tp_rate: float = Field(..., ge=0.0, le=1.0)


class MetricsReport(BaseModel):
    """逐重复指标 + 均值 / 标准差汇总"""

    replicates: list[MetricsModel] = Field(default_factory=list)
    mean: dict[str, float] = Field(default_factory=dict)
    sd: dict[str, float] = Field(default_factory=dict)


class DagSidecar(BaseModel):
    """DAG 模型的 JSON sidecar (边与权重在同名 CSV 中)"""

    p: int = Field(..., ge=1)
    columns: list[str] = Field(default_factory=list)
    noise_sd: list[float] = Field(default_factory=list)
    seed: int | None = None
    spec: dict[str, Any] = Field(default_factory=dict, description="生成规格 (DagGenSpec)")


class RunManifest(BaseModel):
    """运行清单：足以精确复现全部输出"""

    command: str
    package_version: str
    versions: dict[str, str] = Field(default_factory=dict, description="python / numpy / scipy / pandas 版本")
    config: dict[str, Any] = Field(default_factory=dict)
    spec: dict[str, Any] = Field(default_factory=dict)
    seeds: list[dict[str, Any]] = Field(default_factory=list, description="每个 (cell, replicate) 派生的种子")
    outputs: list[str] = Field(default_factory=list)


class CellMetricsReport(MetricsReport):
    """一个网格单元的指标报告"""

    cell: int = Field(..., ge=0)
    settings: dict[str, Any] = Field(default_factory=dict, description="该单元的 p, n, rho, dist, penalty, alpha, gamma")


class SimulationReport(BaseModel):
    """simulate 命令的 metrics.json"""

    cells: list[CellMetricsReport] = Field(default_factory=list)
    partial_replicates: int = Field(default=0, ge=0, description="含未收敛行的重复数")
