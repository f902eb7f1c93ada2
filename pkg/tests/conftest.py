"""
共享测试夹具

- chain_adjacency: 链 X1 -> X2 -> X3，边权 0.8
- standardized: 把任意矩阵按列标准化 (均值 0，n^{-1}‖column‖² = 1)
"""

import numpy as np
import pytest

from app.graph.types import AdjacencyMatrix, DagModel


def standardized(values: np.ndarray) -> np.ndarray:
    centered = values - values.mean(axis=0)
    return centered / np.sqrt(np.mean(centered**2, axis=0))


def chain(p: int, weight: float = 0.8) -> AdjacencyMatrix:
    return AdjacencyMatrix.from_edges([(j, j + 1) for j in range(p - 1)], p, weight)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240601)


@pytest.fixture
def chain_adjacency() -> AdjacencyMatrix:
    return chain(3)


@pytest.fixture
def chain_model(chain_adjacency) -> DagModel:
    return DagModel(chain_adjacency)
