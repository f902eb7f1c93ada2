"""
图论基本运算

- influence_matrix: Λ = (I - A)^{-1}，单位下三角系统前代求解
- covariance_from_dag / precision_from_dag: Σ = Λ D Λᵀ 及其逆
- skeleton: 阈值化后的边集合
- ancestral_set: 祖先集 (祖先、后代、共同祖先)

所有函数均为纯函数，可在任意线程中并发调用。
"""

import logging

import networkx as nx
import numpy as np
from scipy.linalg import block_diag, solve_triangular

from app.graph.types import DEFAULT_EDGE_THRESHOLD, AdjacencyMatrix, DagModel, EdgeSet

logger = logging.getLogger(__name__)


def influence_matrix(a: AdjacencyMatrix) -> np.ndarray:
    """
    影响矩阵 Λ = (I - A)^{-1}

    I - A 为单位下三角矩阵，直接前代求解，不做显式求逆。
    Λ 同样是单位下三角矩阵，Λ[j, k] 为节点 k 对节点 j 的总效应。
    """
    eye = np.eye(a.p)
    return solve_triangular(eye - a.entries, eye, lower=True, unit_diagonal=True)


def influence_matrix_series(a: AdjacencyMatrix) -> np.ndarray:
    """
    幂级数形式 Σ_{r=0}^{p-1} A^r

    A 为幂零矩阵 (A^p = 0)，级数有限项精确。用于交叉校验 influence_matrix。
    """
    total = np.eye(a.p)
    term = np.eye(a.p)
    for _ in range(1, a.p):
        term = term @ a.entries
        if not term.any():
            break
        total += term
    return total


def covariance_from_dag(m: DagModel) -> np.ndarray:
    """模型协方差 Σ = Λ D Λᵀ，D = diag(noise_sd²)"""
    lam = influence_matrix(m.adjacency)
    sigma = (lam * m.noise_sd**2) @ lam.T
    return (sigma + sigma.T) / 2.0


def precision_from_dag(m: DagModel) -> np.ndarray:
    """模型精度矩阵 Σ^{-1} = (I - A)ᵀ D^{-1} (I - A)"""
    b = np.eye(m.p) - m.adjacency.entries
    omega = (b.T / m.noise_sd**2) @ b
    return (omega + omega.T) / 2.0


def skeleton(a: AdjacencyMatrix, threshold: float = DEFAULT_EDGE_THRESHOLD) -> EdgeSet:
    """返回 {(j, i) : |entries[i, j]| > threshold}"""
    if threshold < 0:
        raise ValueError(f"threshold must be nonnegative, got {threshold}")
    children, parents = np.nonzero(np.abs(a.entries) > threshold)
    return EdgeSet(frozenset(zip(parents.tolist(), children.tolist(), strict=True)))


def to_digraph(a: AdjacencyMatrix, threshold: float = DEFAULT_EDGE_THRESHOLD) -> nx.DiGraph:
    """阈值化骨架转为 networkx 有向图 (包含全部 p 个节点)"""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(a.p))
    graph.add_edges_from(skeleton(a, threshold))
    return graph


def _ancestral_set(graph: nx.DiGraph, i: int) -> set[int]:
    ancestors = nx.ancestors(graph, i)
    members = ancestors | nx.descendants(graph, i)
    for k in ancestors:
        members |= nx.descendants(graph, k)
    members.discard(i)
    return members


def ancestral_set(
    a: AdjacencyMatrix,
    i: int,
    threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> set[int]:
    """
    节点 i 的祖先集 (0-based)

    j 属于祖先集当且仅当：j 是 i 的祖先，或 i 是 j 的祖先，或二者有共同祖先 k。
    节点 i 本身不包含在内。
    """
    if not (0 <= i < a.p):
        raise IndexError(f"node index {i} out of range for p={a.p}")
    return _ancestral_set(to_digraph(a, threshold), i)


def ancestral_sets(a: AdjacencyMatrix, threshold: float = DEFAULT_EDGE_THRESHOLD) -> list[set[int]]:
    """所有节点的祖先集，共用一次建图"""
    graph = to_digraph(a, threshold)
    return [_ancestral_set(graph, i) for i in range(a.p)]


def joins_distinct_ancestral_sets(
    truth: AdjacencyMatrix,
    estimate: AdjacencyMatrix,
    threshold: float = DEFAULT_EDGE_THRESHOLD,
) -> bool:
    """
    估计图是否把两个不同的祖先集错误连接

    即存在节点 i，使估计的祖先集不是真实祖先集的子集。
    真实图在阈值 0 下取骨架。
    """
    true_sets = ancestral_sets(truth, threshold=0.0)
    est_sets = ancestral_sets(estimate, threshold=threshold)
    return any(not est <= true for est, true in zip(est_sets, true_sets, strict=True))


def block_diagonal(models: list[DagModel]) -> DagModel:
    """把若干互相独立的 DAG 按顺序拼接为一个块对角模型"""
    if not models:
        raise ValueError("at least one model is required")
    entries = block_diag(*[m.adjacency.entries for m in models])
    noise_sd = np.concatenate([m.noise_sd for m in models])
    return DagModel(AdjacencyMatrix(entries), noise_sd)


def edges_to_adjacency(
    edges: EdgeSet,
    p: int,
    weights: float | dict[tuple[int, int], float] = 1.0,
) -> AdjacencyMatrix:
    """边集合 + 权重 -> 邻接矩阵 (越界时抛出 IndexOutOfRangeError)"""
    edges.check_within(p)
    return AdjacencyMatrix.from_edges(edges, p, weights)
