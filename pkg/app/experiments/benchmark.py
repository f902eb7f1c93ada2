"""
计算时间研究

在 (p, n) 网格上对同一份数据重复估计，记录耗时中位数，
用于检验总代价 O(n p²) 的增长趋势 (p 翻倍时耗时约为 4 倍)。
"""

import logging
import time
from collections.abc import Sequence
from pathlib import Path

import pandas as pd

from app.estimator.config import EstimationConfig
from app.estimator.estimator import estimate
from app.io.csv_io import FLOAT_FORMAT
from app.synth.config import DagGenSpec
from app.synth.generator import random_dag, sample_data
from app.synth.seeds import SeedStream, derive_seed

logger = logging.getLogger(__name__)


def time_estimate(p: int, n: int, cfg: EstimationConfig, repetitions: int = 5, seed: int = 0, cell: int = 0) -> list[float]:
    """同一份数据上重复估计 repetitions 次，返回每次耗时 (秒)"""
    spec = DagGenSpec(p=p, target_edges=max(1, min(p, p * (p - 1) // 2)), max_neighborhood=5)
    model = random_dag(spec, derive_seed(seed, cell, 0, SeedStream.DAG))
    x = sample_data(model, n, seed=derive_seed(seed, cell, 0, SeedStream.DATA))
    timings = []
    for _ in range(repetitions):
        start = time.perf_counter()
        estimate(x, cfg)
        timings.append(time.perf_counter() - start)
    return timings


def run_benchmark(
    p_values: Sequence[int],
    n_values: Sequence[int],
    cfg: EstimationConfig,
    repetitions: int = 5,
    seed: int = 0,
    out_dir: str | Path | None = None,
) -> pd.DataFrame:
    """
    耗时网格

    Returns:
        DataFrame[p, n, penalty, repetitions, median_seconds, min_seconds, max_seconds]
        out_dir 给定时同时写出 timing.csv
    """
    rows = []
    for cell, (p, n) in enumerate((p, n) for p in p_values for n in n_values):
        timings = pd.Series(time_estimate(p, n, cfg, repetitions, seed=seed, cell=cell))
        logger.info("p=%d n=%d median %.4fs over %d run(s)", p, n, timings.median(), repetitions)
        rows.append(
            {
                "p": p,
                "n": n,
                "penalty": cfg.penalty,
                "repetitions": repetitions,
                "median_seconds": float(timings.median()),
                "min_seconds": float(timings.min()),
                "max_seconds": float(timings.max()),
            }
        )
    frame = pd.DataFrame(rows)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out / "timing.csv", index=False, float_format=FLOAT_FORMAT)
    return frame
