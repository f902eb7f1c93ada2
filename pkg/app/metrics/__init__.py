"""
Metrics 评估层

结构恢复指标：SHD、MCC、FP/TP 率，以及跨重复的边包含频率矩阵。

主要组件：
- ConfusionCounts / confusion: 下三角边全集上的混淆计数
- shd / mcc / rates: 单次比较指标
- InclusionMatrix / inclusion_matrix / merge_inclusion: 包含频率
- map_to_original: 置换列顺序后的估计映射回原始标签
- ReplicateMetrics / evaluate / summarize / aggregate: 逐重复行与汇总
"""

from app.metrics.confusion import ConfusionCounts, confusion, map_to_original, mcc, rates, shd
from app.metrics.inclusion import InclusionMatrix, inclusion_matrix, merge_inclusion
from app.metrics.report import SUMMARY_METRICS, ReplicateMetrics, aggregate, evaluate, summarize

__all__ = [
    "ConfusionCounts",
    "confusion",
    "shd",
    "mcc",
    "rates",
    "map_to_original",
    "InclusionMatrix",
    "inclusion_matrix",
    "merge_inclusion",
    "ReplicateMetrics",
    "evaluate",
    "summarize",
    "aggregate",
    "SUMMARY_METRICS",
]
