"""
观测数据矩阵

n×p 实数观测，列按因果顺序排列，附列名。
"""

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from app.core.errors import DimensionMismatchError, DomainError


def default_column_names(p: int) -> tuple[str, ...]:
    """默认列名 X1..Xp (1-based)"""
    return tuple(f"X{j + 1}" for j in range(p))


@dataclass(frozen=True)
class DataMatrix:
    """n×p 观测矩阵 (列 = 变量，按因果顺序)"""

    values: np.ndarray
    columns: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float, copy=True)
        if values.ndim != 2:
            raise DimensionMismatchError("data", "2-d array", values.shape)
        if not np.all(np.isfinite(values)):
            raise DomainError("data", "non-finite value", "finite reals")
        values.setflags(write=False)
        columns = tuple(self.columns) if self.columns else default_column_names(values.shape[1])
        if len(columns) != values.shape[1]:
            raise DimensionMismatchError("column names", values.shape[1], len(columns))
        if len(set(columns)) != len(columns):
            raise DomainError("column names", "duplicate", "unique names")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "columns", columns)

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    @property
    def p(self) -> int:
        return int(self.values.shape[1])

    def column_index(self, name: str) -> int:
        try:
            return self.columns.index(name)
        except ValueError:
            raise KeyError(f"unknown column '{name}'") from None

    def select(self, names: Sequence[str]) -> "DataMatrix":
        """按给定列名顺序重排 (用于 --order 文件)"""
        if sorted(names) != sorted(self.columns):
            missing = set(self.columns) ^ set(names)
            raise DomainError("order", sorted(missing), "a permutation of the data columns")
        idx = [self.column_index(name) for name in names]
        return DataMatrix(self.values[:, idx], tuple(names))

    def take(self, permutation: Sequence[int]) -> "DataMatrix":
        """按列位置重排：新第 k 列 = 原第 permutation[k] 列"""
        perm = np.asarray(permutation, dtype=int)
        return DataMatrix(self.values[:, perm], tuple(self.columns[k] for k in perm))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DataMatrix):
            return NotImplemented
        return self.columns == other.columns and bool(np.array_equal(self.values, other.values))
