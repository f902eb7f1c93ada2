"""
DAG 结构估计 - 命令行入口

子命令：
- simulate: 模拟网格 (结构恢复研究、列顺序置换研究)
- estimate: 对用户 CSV 数据估计 DAG
- evaluate: 比较两份边列表
- benchmark: 计算时间研究

退出码: 0 成功, 1 用法错误, 2 数据错误, 3 未收敛

示例:
    python -m app.main simulate --p 50 --n 100 --penalty alasso --replicates 100 --out results/
    python -m app.main estimate data.csv --penalty lasso --dense --out fit/
    python -m app.main evaluate truth.csv estimate.csv --p 50
"""

import argparse
import logging
import math
import sys
from collections.abc import Sequence
from pathlib import Path

from pydantic import ValidationError

from app import __version__
from app.config import Settings, get_settings
from app.core.data import default_column_names
from app.core.errors import DagEstimationError, DomainError, NotConvergedError
from app.core.registry import UnknownEntryError
from app.estimator.config import EstimationConfig
from app.estimator.estimator import EstimateResult, RowDiagnostics, estimate
from app.experiments.benchmark import run_benchmark
from app.experiments.simulate import package_versions, run_simulation
from app.experiments.spec import ExperimentSpec
from app.io.csv_io import (
    edge_records,
    read_data_csv,
    read_edges_csv,
    read_order_file,
    write_adjacency_csv,
    write_edges_csv,
    write_json,
)
from app.io.schemas import EstimateReport, MetricsModel, MetricsReport, RowDiagnosticsModel, RunManifest
from app.metrics.report import evaluate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NOT_CONVERGED = 3

PENALTY_CHOICES = ("lasso", "alasso", "adaptive_lasso")


class UsageError(Exception):
    """参数组合无效"""


class _ArgumentParser(argparse.ArgumentParser):
    """argparse 默认以 2 退出，这里统一为用法错误码 1"""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha0", type=float, help="自适应 lasso 第一阶段的 α (默认 0.5)")
    parser.add_argument("--tol", type=float, help="坐标下降收敛容差")
    parser.add_argument("--max-sweeps", type=int, help="最大完整扫描次数")
    parser.add_argument("--threshold", type=float, help="|A_ij| 超过该值才计为边 (默认 1e-4)")
    parser.add_argument("--workers", type=int, help="并行 worker 数")
    parser.add_argument("--allow-partial", action="store_true", help="存在未收敛行时仍以 0 退出")
    parser.add_argument("-v", "--verbose", action="store_true", help="DEBUG 日志")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="dag-estimate", description="已知顺序下的稀疏 DAG 惩罚似然估计")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    # ----------------- simulate -----------------
    sim = sub.add_parser("simulate", help="运行模拟网格")
    sim.add_argument("--spec", type=Path, help="YAML 实验规格，命令行参数覆盖其中的值")
    sim.add_argument("--p", type=int, nargs="+", help="节点数 (可多个)")
    sim.add_argument("--n", type=int, nargs="+", help="样本量 (可多个)")
    sim.add_argument("--rho", type=float, nargs="+", help="边权 ρ (可多个)")
    sim.add_argument("--dist", nargs="+", help="噪声: gaussian | t:DF | mixture:W")
    sim.add_argument("--penalty", nargs="+", choices=PENALTY_CHOICES, help="惩罚类型 (可多个)")
    sim.add_argument("--alpha", type=float, nargs="+", help="调参公式 α (可多个)")
    sim.add_argument("--gamma", type=float, nargs="+", help="自适应权重幂 γ (可多个)")
    sim.add_argument("--edges", type=int, help="目标边数 (默认等于 n)")
    sim.add_argument("--max-neighborhood", type=int, help="每个节点入度 + 出度上限")
    sim.add_argument("--replicates", type=int, help="每个单元的重复次数")
    sim.add_argument("--seed", type=int, help="基础种子")
    sim.add_argument("--permute-order", action="store_true", help="估计前随机置换列顺序")
    sim.add_argument("--fixed-dag", action="store_true", help="每个单元只生成一个 DAG")
    sim.add_argument("--out", type=Path, help="输出目录")
    _add_solver_flags(sim)

    # ----------------- estimate -----------------
    est = sub.add_parser("estimate", help="对 CSV 数据估计 DAG")
    est.add_argument("input", type=Path, help="观测 CSV (表头 + n 行，列按因果顺序)")
    est.add_argument("--order", type=Path, help="变量顺序文件，估计前先按其重排列")
    est.add_argument("--penalty", choices=PENALTY_CHOICES, default="adaptive_lasso")
    est.add_argument("--alpha", type=float, help="调参公式 α (默认 0.10)")
    est.add_argument("--gamma", type=float, help="自适应权重幂 γ (默认 1)")
    est.add_argument("--dense", action="store_true", help="同时写出稠密邻接矩阵 CSV")
    est.add_argument("--original-scale", action="store_true", help="边权换算回原始单位")
    est.add_argument("--out", type=Path, help="输出目录")
    _add_solver_flags(est)

    # ----------------- evaluate -----------------
    ev = sub.add_parser("evaluate", help="比较真实边列表与估计边列表")
    ev.add_argument("truth", type=Path, help="真实边列表 CSV")
    ev.add_argument("estimate", type=Path, help="估计边列表 CSV")
    group = ev.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=int, help="节点数 (节点名为 X1..Xp 或 1-based 整数)")
    group.add_argument("--columns", type=Path, help="列名文件 (因果顺序)")
    ev.add_argument("--out", type=Path, help="写出 JSON 的路径 (默认输出到 stdout)")
    ev.add_argument("-v", "--verbose", action="store_true", help="DEBUG 日志")

    # ----------------- benchmark -----------------
    bench = sub.add_parser("benchmark", help="计算时间研究")
    bench.add_argument("--p", type=int, nargs="+", default=[50, 100, 200])
    bench.add_argument("--n", type=int, nargs="+", default=[100])
    bench.add_argument("--penalty", choices=PENALTY_CHOICES, default="lasso")
    bench.add_argument("--alpha", type=float)
    bench.add_argument("--repetitions", type=int, default=5)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--out", type=Path, help="输出目录")
    _add_solver_flags(bench)
    return parser


def _estimation_config(args: argparse.Namespace, settings: Settings) -> EstimationConfig:
    try:
        return EstimationConfig.from_settings(
            settings,
            penalty=args.penalty,
            alpha=getattr(args, "alpha", None),
            alpha0=args.alpha0,
            gamma=getattr(args, "gamma", None),
            tol=args.tol,
            max_sweeps=args.max_sweeps,
            edge_threshold=args.threshold,
            n_jobs=args.workers,
        )
    except DomainError as e:
        raise UsageError(str(e)) from e


def _row_models(rows: Sequence[RowDiagnostics], columns: Sequence[str]) -> list[RowDiagnosticsModel]:
    return [
        RowDiagnosticsModel(
            row=r.row,
            column=columns[r.row - 1],
            lam=r.lam,
            iterations=r.iterations,
            converged=r.converged,
            kkt_worst=None if math.isnan(r.kkt_worst) else r.kkt_worst,
            n_active=r.n_active,
            noise_scale=r.noise_scale,
        )
        for r in rows
    ]


def estimate_report(result: EstimateResult, n: int, original_scale: bool = False) -> EstimateReport:
    columns = list(result.columns)
    threshold = result.config.edge_threshold
    adjacency = result.to_original_scale() if original_scale else result.adjacency
    initial = result.initial
    return EstimateReport(
        penalty=result.config.penalty,
        config=result.config.to_dict(),
        n=n,
        p=result.p,
        columns=columns,
        partial=result.partial,
        edges=edge_records(adjacency, columns, threshold),
        rows=_row_models(result.rows, columns),
        initial_edges=edge_records(initial.adjacency, columns, threshold) if initial else None,
        initial_rows=_row_models(initial.rows, columns) if initial else None,
    )


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> int:
    overrides = {
        "p": args.p,
        "n": args.n,
        "rho": args.rho,
        "dist": args.dist,
        "penalty": args.penalty,
        "alpha": args.alpha,
        "gamma": args.gamma,
        "edges": args.edges,
        "max_neighborhood": args.max_neighborhood,
        "replicates": args.replicates,
        "base_seed": args.seed,
        "alpha0": args.alpha0,
        "tol": args.tol,
        "max_sweeps": args.max_sweeps,
        "threshold": args.threshold,
        "workers": args.workers,
        "permute_order": args.permute_order or None,
        "fixed_dag": args.fixed_dag or None,
        "allow_partial": args.allow_partial or None,
    }
    defaults = {
        "rho": [settings.edge_weight],
        "alpha": [settings.alpha],
        "gamma": [settings.gamma],
        "alpha0": settings.alpha0,
        "tol": settings.tol,
        "max_sweeps": settings.max_sweeps,
        "threshold": settings.edge_threshold,
        "max_neighborhood": settings.max_neighborhood,
        "mixture_weight": settings.mixture_weight,
        "workers": settings.workers,
    }
    try:
        if args.spec is not None:
            spec = ExperimentSpec.from_yaml(args.spec, defaults=defaults, **overrides)
        else:
            spec = ExperimentSpec.model_validate({**defaults, **{k: v for k, v in overrides.items() if v is not None}})
    except ValidationError as e:
        raise UsageError(str(e)) from e

    out = args.out or Path(settings.output_dir)
    output = run_simulation(spec, out)
    for _, row in output.summary.iterrows():
        logger.info(
            "cell %d (p=%d, n=%d, %s, %s): SHD %.2f, MCC %.3f, FP rate %.4f, TP rate %.3f",
            row["cell"],
            row["p"],
            row["n"],
            row["penalty"],
            row["dist"],
            row["shd_mean"],
            row["mcc_mean"],
            row["fp_rate_mean"],
            row["tp_rate_mean"],
        )
    logger.info("Wrote %d file(s) to %s", len(output.files), out)
    return EXIT_OK


def cmd_estimate(args: argparse.Namespace, settings: Settings) -> int:
    cfg = _estimation_config(args, settings)
    x = read_data_csv(args.input)
    if args.order is not None:
        x = x.select(read_order_file(args.order, x.columns))
    result = estimate(x, cfg)

    out = args.out or Path(settings.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    adjacency = result.to_original_scale() if args.original_scale else result.adjacency
    outputs = ["edges.csv", "report.json"]
    n_edges = write_edges_csv(adjacency, out / "edges.csv", x.columns, cfg.edge_threshold)
    write_json(estimate_report(result, x.n, args.original_scale), out / "report.json")
    if args.dense:
        write_adjacency_csv(adjacency, out / "adjacency.csv", x.columns)
        outputs.append("adjacency.csv")
    outputs.append("manifest.json")
    manifest = RunManifest(
        command="estimate",
        package_version=__version__,
        versions=package_versions(),
        config=cfg.to_dict(),
        spec={
            "input": str(args.input),
            "order": str(args.order) if args.order else None,
            "original_scale": args.original_scale,
        },
        outputs=outputs,
    )
    write_json(manifest, out / "manifest.json")
    logger.info("Estimated %d edge(s) over %d variables (n=%d) -> %s", n_edges, x.p, x.n, out)

    if result.partial:
        raise NotConvergedError(None, context="estimate; outputs written, use --allow-partial to accept")
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace, settings: Settings) -> int:
    if args.columns is not None:
        columns = _read_column_names(args.columns)
    else:
        if args.p < 2:
            raise UsageError("--p must be at least 2")
        columns = list(default_column_names(args.p))
    truth, _ = read_edges_csv(args.truth, columns=columns)
    estimated, _ = read_edges_csv(args.estimate, columns=columns)
    metrics = evaluate(truth, estimated, len(columns))
    model = MetricsModel(**metrics.to_dict())
    report = MetricsReport(
        replicates=[model],
        mean={k: float(v) for k, v in metrics.to_dict().items()},
        sd={k: 0.0 for k in metrics.to_dict()},
    )
    if args.out is not None:
        write_json(report, args.out)
        logger.info("SHD %d, MCC %.4f -> %s", metrics.shd, metrics.mcc, args.out)
    else:
        sys.stdout.write(report.model_dump_json(indent=2) + "\n")
    return EXIT_OK


def _read_column_names(path: Path) -> list[str]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"{path}: {e}") from e
    names = [t.strip() for line in text.splitlines() for t in line.split(",") if t.strip()]
    if len(names) < 2:
        raise UsageError(f"{path}: at least two column names are required")
    return names


def cmd_benchmark(args: argparse.Namespace, settings: Settings) -> int:
    cfg = _estimation_config(args, settings)
    if args.repetitions < 1:
        raise UsageError("--repetitions must be at least 1")
    if min(args.p) < 2 or min(args.n) < 2:
        raise UsageError("--p and --n values must be at least 2")
    out = args.out or Path(settings.output_dir)
    frame = run_benchmark(args.p, args.n, cfg, repetitions=args.repetitions, seed=args.seed, out_dir=out)
    manifest = RunManifest(
        command="benchmark",
        package_version=__version__,
        versions=package_versions(),
        config=cfg.to_dict(),
        spec={"p": args.p, "n": args.n, "repetitions": args.repetitions, "seed": args.seed},
        outputs=["timing.csv", "manifest.json"],
    )
    write_json(manifest, out / "manifest.json")
    logger.info("Benchmark of %d cell(s) written to %s", len(frame), out / "timing.csv")
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "estimate": cmd_estimate,
    "evaluate": cmd_evaluate,
    "benchmark": cmd_benchmark,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    settings = get_settings()

    log_level = logging.DEBUG if (settings.debug_mode or args.verbose) else logging.INFO
    logging.basicConfig(level=log_level, format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    try:
        return COMMANDS[args.command](args, settings)
    except UsageError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except NotConvergedError as e:
        if getattr(args, "allow_partial", False):
            logger.warning("%s", e)
            return EXIT_OK
        logger.error("%s", e)
        return EXIT_NOT_CONVERGED
    except (DagEstimationError, UnknownEntryError, OSError) as e:
        logger.error("%s", e)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
