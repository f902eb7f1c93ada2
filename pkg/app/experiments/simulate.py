"""
模拟研究驱动

对每个网格单元与重复 r：生成 DAG -> 采样数据 -> (可选) 置换列顺序 -> 估计 -> 与真值比较。
种子由 (base_seed, cell, r, stream) 派生，重复之间可用 joblib 进程池并行，
结果按 (cell, r) 顺序组装，输出文件只在主进程中写出。

输出目录内容：
- replicates.csv: 逐重复指标行
- summary.csv: 按单元汇总 (由 replicates.csv 的数据重新计算)
- metrics.json: 逐单元 MetricsReport
- inclusion_cell<k>.csv: 边包含频率矩阵
- truth_cell<k>.csv / .json: --fixed-dag 时的真实 DAG
- manifest.json: 配置、种子与版本
"""

import logging
import platform
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
import scipy
from joblib import Parallel, delayed

from app import __version__
from app.core.errors import NotConvergedError
from app.estimator.estimator import estimate
from app.experiments.spec import ExperimentSpec, GridCell
from app.graph.ops import skeleton
from app.graph.types import AdjacencyMatrix, DagModel, EdgeSet
from app.io.csv_io import FLOAT_FORMAT, write_dag, write_inclusion_csv, write_json
from app.io.schemas import CellMetricsReport, MetricsModel, RunManifest, SimulationReport
from app.metrics.confusion import map_to_original
from app.metrics.inclusion import inclusion_matrix
from app.metrics.report import ReplicateMetrics, aggregate, evaluate, summarize
from app.synth.generator import permute_columns, random_dag, sample_data
from app.synth.seeds import SeedStream, derive_seed

logger = logging.getLogger(__name__)

GRID_COLUMNS = ("cell", "p", "n", "rho", "dist", "penalty", "alpha", "gamma", "edges")


@dataclass(frozen=True)
class ReplicateOutcome:
    cell: int
    replicate: int
    dag_seed: int
    data_seed: int
    permutation_seed: int | None
    true_edges: int
    estimated: EdgeSet
    metrics: ReplicateMetrics
    partial: bool

    def row(self, cell: GridCell) -> dict:
        return {
            "cell": cell.index,
            **cell.settings(),
            "replicate": self.replicate,
            "dag_seed": self.dag_seed,
            "data_seed": self.data_seed,
            "permutation_seed": self.permutation_seed if self.permutation_seed is not None else -1,
            "true_edges": self.true_edges,
            "estimated_edges": len(self.estimated),
            "partial": self.partial,
            **self.metrics.to_dict(),
        }


def dag_seed_for(spec: ExperimentSpec, cell: GridCell, replicate: int) -> int:
    # --fixed-dag 时同一单元共用重复 0 的 DAG 种子
    r = 0 if spec.fixed_dag else replicate
    return derive_seed(spec.base_seed, cell.index, r, SeedStream.DAG)


def cell_dag(spec: ExperimentSpec, cell: GridCell, replicate: int) -> DagModel:
    return random_dag(cell.gen_spec(), dag_seed_for(spec, cell, replicate))


def run_replicate(spec: ExperimentSpec, cell: GridCell, replicate: int) -> ReplicateOutcome:
    """单个 (cell, replicate)：纯函数，只依赖派生种子"""
    dag_seed = dag_seed_for(spec, cell, replicate)
    data_seed = derive_seed(spec.base_seed, cell.index, replicate, SeedStream.DATA)
    model = random_dag(cell.gen_spec(), dag_seed)
    x = sample_data(model, cell.n, cell.noise_spec(spec.mixture_weight), seed=data_seed)
    cfg = spec.estimation_config(cell)

    permutation_seed = None
    if spec.permute_order:
        permutation_seed = derive_seed(spec.base_seed, cell.index, replicate, SeedStream.PERMUTATION)
        shuffled, permutation = permute_columns(x, permutation_seed)
        result = estimate(shuffled, cfg)
        estimated = map_to_original(result.skeleton(spec.threshold), permutation)
    else:
        result = estimate(x, cfg)
        estimated = result.skeleton(spec.threshold)

    truth = skeleton(model.adjacency, 0.0)
    metrics = evaluate(truth, estimated, cell.p)
    logger.debug(
        "cell=%d replicate=%d shd=%d mcc=%.4f partial=%s",
        cell.index,
        replicate,
        metrics.shd,
        metrics.mcc,
        result.partial,
    )
    return ReplicateOutcome(
        cell=cell.index,
        replicate=replicate,
        dag_seed=dag_seed,
        data_seed=data_seed,
        permutation_seed=permutation_seed,
        true_edges=len(truth),
        estimated=estimated,
        metrics=metrics,
        partial=result.partial,
    )


def package_versions() -> dict[str, str]:
    return {
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pandas": pd.__version__,
    }


@dataclass(frozen=True)
class SimulationOutput:
    replicates: pd.DataFrame
    summary: pd.DataFrame
    report: SimulationReport
    files: list[Path]

    @property
    def partial_replicates(self) -> int:
        return self.report.partial_replicates


def run_simulation(spec: ExperimentSpec, out_dir: str | Path) -> SimulationOutput:
    """
    运行整个网格并写出全部产物

    Raises:
        InfeasibleSpecError: 某单元的边数目标不可行 (在任何计算之前)
        NotConvergedError: 存在未收敛重复且未设置 allow_partial (产物已写出)
    """
    spec.check_feasible()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cells = spec.cells()
    tasks = [(cell, r) for cell in cells for r in range(spec.replicates)]
    logger.info("Running %d cell(s) x %d replicate(s) with %d worker(s)", len(cells), spec.replicates, spec.workers)

    if spec.workers == 1:
        outcomes = [run_replicate(spec, cell, r) for cell, r in tasks]
    else:
        outcomes = Parallel(n_jobs=spec.workers)(delayed(run_replicate)(spec, cell, r) for cell, r in tasks)

    by_cell = {cell.index: cell for cell in cells}
    frame = pd.DataFrame([o.row(by_cell[o.cell]) for o in outcomes])
    summary = summarize(frame, by=GRID_COLUMNS)

    files: list[Path] = []
    replicates_path = out / "replicates.csv"
    frame.to_csv(replicates_path, index=False, float_format=FLOAT_FORMAT)
    summary_path = out / "summary.csv"
    summary.to_csv(summary_path, index=False, float_format=FLOAT_FORMAT)
    files += [replicates_path, summary_path]

    reports = []
    for cell in cells:
        own = [o for o in outcomes if o.cell == cell.index]
        mean, sd = aggregate([o.metrics for o in own])
        reports.append(
            CellMetricsReport(
                cell=cell.index,
                settings=cell.settings(),
                replicates=[MetricsModel(**o.metrics.to_dict()) for o in own],
                mean=mean,
                sd=sd,
            )
        )
        indicators = [AdjacencyMatrix.from_edges(o.estimated, cell.p) for o in own]
        inclusion_path = out / f"inclusion_cell{cell.index}.csv"
        write_inclusion_csv(inclusion_matrix(indicators, threshold=0.0), inclusion_path)
        files.append(inclusion_path)
        if spec.fixed_dag:
            files += list(
                write_dag(
                    cell_dag(spec, cell, 0),
                    out / f"truth_cell{cell.index}",
                    seed=dag_seed_for(spec, cell, 0),
                    spec=cell.settings(),
                )
            )

    partial = sum(o.partial for o in outcomes)
    report = SimulationReport(cells=reports, partial_replicates=partial)
    metrics_path = out / "metrics.json"
    write_json(report, metrics_path)
    files.append(metrics_path)

    manifest_path = out / "manifest.json"
    files.append(manifest_path)
    manifest = RunManifest(
        command="simulate",
        package_version=__version__,
        versions=package_versions(),
        spec=spec.model_dump(),
        seeds=[
            {
                "cell": o.cell,
                "replicate": o.replicate,
                "dag_seed": o.dag_seed,
                "data_seed": o.data_seed,
                "permutation_seed": o.permutation_seed,
            }
            for o in outcomes
        ],
        outputs=[p.name for p in files],
    )
    write_json(manifest, manifest_path)

    if partial:
        logger.warning("%d replicate(s) contain rows that did not converge", partial)
        if not spec.allow_partial:
            raise NotConvergedError(None, context=f"{partial} simulated replicate(s); use --allow-partial to accept")
    return SimulationOutput(replicates=frame, summary=summary, report=report, files=files)
