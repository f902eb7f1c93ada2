"""
异常层级

所有领域异常继承 DagEstimationError (同时也是 ValueError)，
并以属性形式携带出错的值，便于 CLI 映射退出码与生成报错信息。
"""

from typing import Any


class DagEstimationError(ValueError):
    """领域异常基类"""


class InfeasibleSpecError(DagEstimationError):
    """
    DAG 生成规格不可行

    target_edges 超过下三角位置总数或度上限允许的边数时抛出。
    """

    def __init__(self, target: int, max_edges: int):
        super().__init__(
            f"target_edges={target} exceeds the maximum achievable edge count {max_edges}"
        )
        self.target = target
        self.max_edges = max_edges


class NotConvergedError(DagEstimationError):
    """坐标下降未在 max_sweeps 内收敛 (携带最佳迭代结果)"""

    def __init__(self, solution: Any, context: str = ""):
        where = f" ({context})" if context else ""
        iterations = getattr(solution, "iterations", None)
        after = f" after {iterations} sweeps" if iterations is not None else ""
        super().__init__(f"coordinate descent did not converge{after}{where}")
        self.solution = solution
        self.context = context


class DimensionMismatchError(DagEstimationError):
    """输入形状不一致"""

    def __init__(self, what: str, expected: Any, got: Any):
        super().__init__(f"{what}: expected {expected}, got {got}")
        self.what = what
        self.expected = expected
        self.got = got


class DomainError(DagEstimationError):
    """参数超出定义域"""

    def __init__(self, name: str, value: Any, domain: str):
        super().__init__(f"{name}={value!r} outside {domain}")
        self.name = name
        self.value = value
        self.domain = domain


class ConstantColumnError(DagEstimationError):
    """列方差为零，无法标准化"""

    def __init__(self, index: int, name: str | None = None):
        label = name if name is not None else f"#{index + 1}"
        super().__init__(f"column {label} is constant (zero variance)")
        self.index = index
        self.name = name


class IndexOutOfRangeError(DagEstimationError):
    """边的节点索引越界或违反顺序约束 (要求 parent < child <= p)"""

    def __init__(self, edge: tuple[int, int], p: int):
        # 报错信息使用 1-based 索引
        super().__init__(
            f"edge ({edge[0] + 1},{edge[1] + 1}) is not a lower-triangular edge of a {p}-node graph"
        )
        self.edge = edge
        self.p = p


class EmptyInputError(DagEstimationError):
    """输入列表为空"""

    def __init__(self, what: str):
        super().__init__(f"{what} must be non-empty")
        self.what = what


class ShapeMismatchError(DimensionMismatchError):
    """同一批矩阵的形状不一致"""


class DataFormatError(DagEstimationError):
    """CSV / JSON 文件无法解析"""

    def __init__(self, path: str, reason: str):
        super().__init__(f"{path}: {reason}")
        self.path = path
        self.reason = reason
