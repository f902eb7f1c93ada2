"""
边包含频率矩阵

跨重复统计每条边 |Â_ij| > threshold 的比例，导出为稠密 CSV 供灰度图绘制。
"""

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from app.core.errors import DomainError, EmptyInputError, ShapeMismatchError
from app.graph.types import DEFAULT_EDGE_THRESHOLD, AdjacencyMatrix


@dataclass(frozen=True)
class InclusionMatrix:
    """p×p 包含频率，支撑为严格下三角；replicates 为参与平均的估计个数"""

    frequencies: np.ndarray
    replicates: int

    def __post_init__(self) -> None:
        freq = np.array(self.frequencies, dtype=float, copy=True)
        if freq.ndim != 2 or freq.shape[0] != freq.shape[1]:
            raise ShapeMismatchError("inclusion matrix", "square matrix", freq.shape)
        if np.any(freq < 0.0) or np.any(freq > 1.0):
            raise DomainError("inclusion frequency", "value outside [0, 1]", "[0, 1]")
        if np.any(np.triu(freq) != 0.0):
            raise DomainError("inclusion matrix", "entry on or above the diagonal", "strictly lower triangular")
        if self.replicates < 1:
            raise DomainError("replicates", self.replicates, "replicates >= 1")
        freq.setflags(write=False)
        object.__setattr__(self, "frequencies", freq)

    @property
    def p(self) -> int:
        return int(self.frequencies.shape[0])


def inclusion_matrix(
    estimates: Sequence[AdjacencyMatrix],
    threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> InclusionMatrix:
    """
    entry (i, j) = 估计中 |Â_ij| > threshold 的比例

    Raises:
        EmptyInputError: estimates 为空
        ShapeMismatchError: 估计的维度不一致
    """
    if not estimates:
        raise EmptyInputError("estimates")
    p = estimates[0].p
    counts = np.zeros((p, p))
    for est in estimates:
        if est.p != p:
            raise ShapeMismatchError("estimate", (p, p), (est.p, est.p))
        counts += np.abs(est.entries) > threshold
    return InclusionMatrix(counts / len(estimates), len(estimates))


def merge_inclusion(first: InclusionMatrix, second: InclusionMatrix) -> InclusionMatrix:
    """按重复数加权合并两批包含频率 (等价于对全部估计重新计算)"""
    if first.p != second.p:
        raise ShapeMismatchError("inclusion matrix", (first.p, first.p), (second.p, second.p))
    a, b = first.replicates, second.replicates
    merged = (a * first.frequencies + b * second.frequencies) / (a + b)
    return InclusionMatrix(np.clip(merged, 0.0, 1.0), a + b)
