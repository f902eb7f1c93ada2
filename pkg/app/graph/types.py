"""
图结构数据类型

矩阵方向约定 (全库统一):
  entries[i, j] 存放边 j -> i 的权重，即第 i 行是节点 i 的父节点系数。
  已知因果顺序下 entries 严格下三角 (对角线及以上全为 0)。

节点索引在内部为 0-based；文档与 IO 层使用 1-based。
"""

from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

import numpy as np

from app.core.errors import DimensionMismatchError, DomainError, IndexOutOfRangeError

# 估计值 |A_ij| 超过该阈值才视为一条边
DEFAULT_EDGE_THRESHOLD = 1e-4


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class AdjacencyMatrix:
    """严格下三角的 p×p 加权邻接矩阵"""

    entries: np.ndarray

    def __post_init__(self) -> None:
        entries = _frozen(self.entries)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise DimensionMismatchError("adjacency", "square matrix", entries.shape)
        if entries.shape[0] < 1:
            raise DomainError("p", entries.shape[0], "p >= 1")
        if not np.all(np.isfinite(entries)):
            raise DomainError("adjacency", "non-finite entry", "finite reals")
        if np.any(np.triu(entries) != 0.0):
            raise DomainError("adjacency", "entry on or above the diagonal", "strictly lower triangular")
        object.__setattr__(self, "entries", entries)

    @property
    def p(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def zeros(cls, p: int) -> "AdjacencyMatrix":
        return cls(np.zeros((p, p)))

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[int, int]],
        p: int,
        weight: float | dict[tuple[int, int], float] = 1.0,
    ) -> "AdjacencyMatrix":
        """由 (parent, child) 边集合构造，weight 可为常数或按边映射"""
        entries = np.zeros((p, p))
        for parent, child in edges:
            if not (0 <= parent < child < p):
                raise IndexOutOfRangeError((parent, child), p)
            w = weight[(parent, child)] if isinstance(weight, dict) else weight
            entries[child, parent] = w
        return cls(entries)

    def nnz(self, threshold: float = 0.0) -> int:
        """|entry| > threshold 的个数"""
        return int(np.count_nonzero(np.abs(self.entries) > threshold))

    def weighted_edges(self, threshold: float = DEFAULT_EDGE_THRESHOLD) -> list[tuple[int, int, float]]:
        """(parent, child, weight) 列表，按 child、parent 排序"""
        children, parents = np.nonzero(np.abs(self.entries) > threshold)
        rows = sorted(zip(children.tolist(), parents.tolist(), strict=True))
        return [(j, i, float(self.entries[i, j])) for i, j in rows]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AdjacencyMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))


@dataclass(frozen=True)
class DagModel:
    """潜变量模型：邻接矩阵 + 各节点噪声标准差"""

    adjacency: AdjacencyMatrix
    noise_sd: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.noise_sd is None:
            noise_sd = np.ones(self.adjacency.p)
        else:
            noise_sd = _frozen(np.atleast_1d(self.noise_sd))
        if noise_sd.shape != (self.adjacency.p,):
            raise DimensionMismatchError("noise_sd", (self.adjacency.p,), noise_sd.shape)
        if not np.all(noise_sd > 0) or not np.all(np.isfinite(noise_sd)):
            raise DomainError("noise_sd", noise_sd.tolist(), "positive finite reals")
        noise_sd.setflags(write=False)
        object.__setattr__(self, "noise_sd", noise_sd)

    @property
    def p(self) -> int:
        return self.adjacency.p

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DagModel):
            return NotImplemented
        return self.adjacency == other.adjacency and bool(
            np.array_equal(self.noise_sd, other.noise_sd)
        )


@dataclass(frozen=True)
class EdgeSet:
    """有向边集合 {(parent j, child i) : j < i}"""

    edges: frozenset[tuple[int, int]] = frozenset()

    def __post_init__(self) -> None:
        edges = frozenset((int(j), int(i)) for j, i in self.edges)
        for j, i in edges:
            if not (0 <= j < i):
                raise IndexOutOfRangeError((j, i), max(i, j) + 1)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def of(cls, *pairs: tuple[int, int]) -> "EdgeSet":
        return cls(frozenset(pairs))

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self.edges, key=lambda e: (e[1], e[0])))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, edge: object) -> bool:
        return edge in self.edges

    def __le__(self, other: "EdgeSet") -> bool:
        return self.edges <= other.edges

    def check_within(self, p: int) -> None:
        """校验全部节点索引 < p"""
        for j, i in self.edges:
            if i >= p:
                raise IndexOutOfRangeError((j, i), p)

    def nodes(self) -> set[int]:
        return {v for edge in self.edges for v in edge}
