"""
Core 抽象层

提供核心抽象，供 synth, estimator 等模块使用。

主要组件：
- PriorityRegistry[T]: 两层优先级注册表
- RegistryConflictError: 同层级冲突异常
- RegistryLevel: 优先级层枚举
- DataMatrix: 带列名的 n×p 观测矩阵
- errors: 领域异常层级
"""

from app.core.data import DataMatrix, default_column_names
from app.core.errors import (
    ConstantColumnError,
    DagEstimationError,
    DataFormatError,
    DimensionMismatchError,
    DomainError,
    EmptyInputError,
    IndexOutOfRangeError,
    InfeasibleSpecError,
    NotConvergedError,
    ShapeMismatchError,
)
from app.core.registry import (
    PriorityRegistry,
    RegistryConflictError,
    RegistryLevel,
    UnknownEntryError,
)

__all__ = [
    "DataMatrix",
    "default_column_names",
    "PriorityRegistry",
    "RegistryConflictError",
    "RegistryLevel",
    "UnknownEntryError",
    "DagEstimationError",
    "InfeasibleSpecError",
    "NotConvergedError",
    "DimensionMismatchError",
    "DomainError",
    "ConstantColumnError",
    "IndexOutOfRangeError",
    "EmptyInputError",
    "ShapeMismatchError",
    "DataFormatError",
]
