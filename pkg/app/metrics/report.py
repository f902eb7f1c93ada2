"""
单次重复的指标行与跨重复汇总

汇总统计总是由逐重复行重新计算 (pandas)，不存在另一条累积路径。
"""

from collections.abc import Sequence
from dataclasses import asdict, dataclass

import pandas as pd

from app.graph.types import EdgeSet
from app.metrics.confusion import ConfusionCounts, confusion, mcc, rates, shd

# 汇总时报告均值 / 标准差的列
SUMMARY_METRICS = ("shd", "mcc", "fp", "tp", "fp_rate", "tp_rate")


@dataclass(frozen=True)
class ReplicateMetrics:
    tp: int
    tn: int
    fp: int
    fn: int
    shd: int
    mcc: float
    fp_rate: float
    tp_rate: float

    @classmethod
    def from_counts(cls, c: ConfusionCounts) -> "ReplicateMetrics":
        fp_rate, tp_rate = rates(c)
        return cls(tp=c.tp, tn=c.tn, fp=c.fp, fn=c.fn, shd=shd(c), mcc=mcc(c), fp_rate=fp_rate, tp_rate=tp_rate)

    def to_dict(self) -> dict[str, float | int]:
        return asdict(self)


def evaluate(true_edges: EdgeSet, est_edges: EdgeSet, p: int) -> ReplicateMetrics:
    """骨架比较 -> 一行指标"""
    return ReplicateMetrics.from_counts(confusion(true_edges, est_edges, p))


def summarize(frame: pd.DataFrame, by: Sequence[str] = ()) -> pd.DataFrame:
    """
    逐重复行 -> 均值 / 标准差汇总

    by 为空时返回单行；否则每个分组一行。列名为 <metric>_mean / <metric>_sd，
    另有 replicates 计数列。只有一次重复时标准差记为 0。
    """
    columns = [m for m in SUMMARY_METRICS if m in frame.columns]
    if by:
        grouped = frame.groupby(list(by), sort=True)[columns]
        mean = grouped.mean().add_suffix("_mean")
        sd = grouped.std(ddof=1).fillna(0.0).add_suffix("_sd")
        size = grouped.size().rename("replicates")
        out = pd.concat([size, mean, sd], axis=1).reset_index()
    else:
        row: dict[str, float | int] = {"replicates": len(frame)}
        for m in columns:
            row[f"{m}_mean"] = float(frame[m].mean())
            row[f"{m}_sd"] = float(frame[m].std(ddof=1)) if len(frame) > 1 else 0.0
        out = pd.DataFrame([row])
    ordered = [*by, "replicates"] + [f"{m}_{stat}" for m in columns for stat in ("mean", "sd")]
    return out[ordered]


def aggregate(rows: Sequence[ReplicateMetrics]) -> tuple[dict[str, float], dict[str, float]]:
    """逐重复指标 -> (均值字典, 标准差字典)"""
    frame = pd.DataFrame([r.to_dict() for r in rows])
    summary = summarize(frame).iloc[0]
    mean = {m: float(summary[f"{m}_mean"]) for m in SUMMARY_METRICS}
    sd = {m: float(summary[f"{m}_sd"]) for m in SUMMARY_METRICS}
    return mean, sd
