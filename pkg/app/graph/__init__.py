"""
Graph 核心层

邻接矩阵、影响矩阵、模型协方差、骨架与祖先集。

主要组件：
- AdjacencyMatrix / DagModel / EdgeSet: 数据类型 (严格下三角，行 = 子节点)
- influence_matrix / covariance_from_dag / precision_from_dag
- skeleton / edges_to_adjacency / ancestral_set / joins_distinct_ancestral_sets
- block_diagonal: 拼接互相独立的 DAG
"""

from app.graph.ops import (
    ancestral_set,
    ancestral_sets,
    block_diagonal,
    covariance_from_dag,
    edges_to_adjacency,
    influence_matrix,
    influence_matrix_series,
    joins_distinct_ancestral_sets,
    precision_from_dag,
    skeleton,
    to_digraph,
)
from app.graph.types import DEFAULT_EDGE_THRESHOLD, AdjacencyMatrix, DagModel, EdgeSet

__all__ = [
    # 数据类型
    "AdjacencyMatrix",
    "DagModel",
    "EdgeSet",
    "DEFAULT_EDGE_THRESHOLD",
    # 运算
    "influence_matrix",
    "influence_matrix_series",
    "covariance_from_dag",
    "precision_from_dag",
    "skeleton",
    "edges_to_adjacency",
    "to_digraph",
    "ancestral_set",
    "ancestral_sets",
    "joins_distinct_ancestral_sets",
    "block_diagonal",
]
