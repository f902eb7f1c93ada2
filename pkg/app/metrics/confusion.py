"""
边级别混淆计数与结构恢复指标

已知顺序下方向由顺序决定，指标按阈值化后的骨架 (下三角边存在与否) 计算，
边全集为 p(p-1)/2 个下三角位置。
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from app.core.errors import DomainError, IndexOutOfRangeError
from app.graph.types import EdgeSet


@dataclass(frozen=True)
class ConfusionCounts:
    """TP / TN / FP / FN 计数"""

    tp: int
    tn: int
    fp: int
    fn: int

    def __post_init__(self) -> None:
        for name in ("tp", "tn", "fp", "fn"):
            value = getattr(self, name)
            if value < 0:
                raise DomainError(name, value, "nonnegative integers")

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    @property
    def positives(self) -> int:
        return self.tp + self.fn

    @property
    def negatives(self) -> int:
        return self.tn + self.fp

    def swapped(self) -> "ConfusionCounts":
        """交换真值与估计的角色：fp 与 fn 互换"""
        return ConfusionCounts(tp=self.tp, tn=self.tn, fp=self.fn, fn=self.fp)


def confusion(true_edges: EdgeSet, est_edges: EdgeSet, p: int) -> ConfusionCounts:
    """
    在 p(p-1)/2 个下三角位置上统计混淆计数

    Raises:
        IndexOutOfRangeError: 任一边的节点索引 >= p
    """
    true_edges.check_within(p)
    est_edges.check_within(p)
    universe = p * (p - 1) // 2
    tp = len(true_edges.edges & est_edges.edges)
    fp = len(est_edges.edges - true_edges.edges)
    fn = len(true_edges.edges - est_edges.edges)
    return ConfusionCounts(tp=tp, tn=universe - tp - fp - fn, fp=fp, fn=fn)


def shd(c: ConfusionCounts) -> int:
    """结构汉明距离：两骨架不一致的边数"""
    return c.fp + c.fn


def mcc(c: ConfusionCounts) -> float:
    """Matthews 相关系数；分母任一因子为 0 时返回 0"""
    factors = (c.tp + c.fp, c.tp + c.fn, c.tn + c.fp, c.tn + c.fn)
    if 0 in factors:
        return 0.0
    numerator = c.tp * c.tn - c.fp * c.fn
    return numerator / math.sqrt(math.prod(factors))


def rates(c: ConfusionCounts) -> tuple[float, float]:
    """
    (fp_rate, tp_rate)

    fp_rate = fp / (fp + tn)，tp_rate = tp / (tp + fn)；分母为 0 时记为 0。
    """
    fp_rate = c.fp / c.negatives if c.negatives else 0.0
    tp_rate = c.tp / c.positives if c.positives else 0.0
    return fp_rate, tp_rate


def map_to_original(edges: EdgeSet, permutation: Sequence[int] | np.ndarray) -> EdgeSet:
    """
    把置换列顺序上的估计边映射回原始标签

    permutation[k] 为置换后第 k 列对应的原始列。
    返回无向骨架对 (min, max)，方向在置换后的顺序下没有意义。
    """
    perm = np.asarray(permutation, dtype=int)
    p = perm.size
    if sorted(perm.tolist()) != list(range(p)):
        raise DomainError("permutation", perm.tolist(), f"a permutation of 0..{p - 1}")
    mapped = set()
    for j, i in edges.edges:
        if i >= p:
            raise IndexOutOfRangeError((j, i), p)
        a, b = int(perm[j]), int(perm[i])
        mapped.add((min(a, b), max(a, b)))
    return EdgeSet(frozenset(mapped))
