"""
随机 DAG 生成与观测数据采样

- random_dag: 受邻域大小约束的随机稀疏 DAG (度上限 + 目标边数)
- sample_data: 按潜变量模型 X_i = Σ ρ_ij X_j + Z_i 前代采样
- permute_columns: 随机打乱列顺序 (顺序扰动敏感性研究)

给定 seed 时全部确定性可复现。
"""

import logging

import numpy as np
from scipy.linalg import solve_triangular

from app.core.data import DataMatrix
from app.core.errors import DomainError, InfeasibleSpecError
from app.graph.types import AdjacencyMatrix, DagModel
from app.synth.config import DagGenSpec, NoiseSpec
from app.synth.noise import draw_noise

logger = logging.getLogger(__name__)

# 贪心放置未达到目标边数时的重试次数
_MAX_PLACEMENT_ATTEMPTS = 25


def _place_edges(spec: DagGenSpec, rng: np.random.Generator) -> list[tuple[int, int]]:
    """
    均匀无放回地遍历下三角位置，拒绝会突破度上限的位置

    Returns:
        (parent, child) 边列表，长度 <= target_edges
    """
    rows, cols = np.tril_indices(spec.p, k=-1)
    degree = np.zeros(spec.p, dtype=int)
    cap = spec.max_neighborhood
    edges: list[tuple[int, int]] = []
    for pos in rng.permutation(rows.size):
        child, parent = int(rows[pos]), int(cols[pos])
        if degree[child] >= cap or degree[parent] >= cap:
            continue
        degree[child] += 1
        degree[parent] += 1
        edges.append((parent, child))
        if len(edges) == spec.target_edges:
            break
    return edges


def random_dag(spec: DagGenSpec, seed: int) -> DagModel:
    """
    生成随机稀疏 DAG

    返回的模型噪声标准差全为 1，每个节点入度 + 出度 <= max_neighborhood。
    贪心放置偶尔无法达到 target_edges，此时确定性重试，
    仍不足时返回边数最多的一次并记录 WARNING。

    Raises:
        InfeasibleSpecError: target_edges 超过 p(p-1)/2 或 floor(p * max_neighborhood / 2)
    """
    if spec.target_edges > spec.max_feasible_edges:
        raise InfeasibleSpecError(spec.target_edges, spec.max_feasible_edges)

    rng = np.random.default_rng(seed)
    best: list[tuple[int, int]] = []
    for attempt in range(_MAX_PLACEMENT_ATTEMPTS):
        edges = _place_edges(spec, rng)
        if len(edges) > len(best):
            best = edges
        if len(best) == spec.target_edges:
            break
        logger.debug("Placement attempt %d reached %d/%d edges", attempt + 1, len(edges), spec.target_edges)
    else:
        logger.warning(
            "random_dag: degree cap %d allowed only %d of %d edges (shortfall %d)",
            spec.max_neighborhood,
            len(best),
            spec.target_edges,
            spec.target_edges - len(best),
        )

    best.sort(key=lambda e: (e[1], e[0]))
    if spec.weight_range is None:
        weights = np.full(len(best), spec.edge_weight)
    else:
        weights = rng.uniform(spec.weight_range[0], spec.weight_range[1], size=len(best))

    entries = np.zeros((spec.p, spec.p))
    for (parent, child), w in zip(best, weights, strict=True):
        entries[child, parent] = w
    return DagModel(AdjacencyMatrix(entries), np.ones(spec.p))


def sample_data(
    m: DagModel,
    n: int,
    noise: NoiseSpec | None = None,
    seed: int = 0,
    columns: tuple[str, ...] = (),
) -> DataMatrix:
    """
    从潜变量模型采样 n 行观测

    Z 各列独立、按 NoiseSpec 标准化后乘以 noise_sd；
    X 由单位下三角系统 (I - A) X = Z 前代求得，即 X = Λ Z。
    """
    if n < 1:
        raise DomainError("n", n, "n >= 1")
    noise = noise or NoiseSpec.gaussian()
    rng = np.random.default_rng(seed)
    z = draw_noise(noise, rng, (n, m.p)) * m.noise_sd
    system = np.eye(m.p) - m.adjacency.entries
    x = solve_triangular(system, z.T, lower=True, unit_diagonal=True).T
    return DataMatrix(x, columns)


def permute_columns(x: DataMatrix, seed: int) -> tuple[DataMatrix, np.ndarray]:
    """
    随机置换列顺序

    Returns:
        (置换后的矩阵, permutation)，新第 k 列为原第 permutation[k] 列
    """
    rng = np.random.default_rng(seed)
    permutation = rng.permutation(x.p)
    return x.take(permutation), permutation


def inverse_permutation(permutation: np.ndarray) -> np.ndarray:
    """置换的逆：x.take(perm).take(inverse_permutation(perm)) == x"""
    return np.argsort(np.asarray(permutation, dtype=int))
