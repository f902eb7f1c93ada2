"""
噪声采样器注册表

内置 gaussian / t / mixture 三种标准化噪声；调用方可通过
NOISE_SAMPLERS.register(name, sampler) 注册自定义分布
(要求同样标准化为均值 0、方差 1)。
"""

import logging
from collections.abc import Callable

import numpy as np

from app.core.registry import PriorityRegistry
from app.synth.config import NoiseSpec

logger = logging.getLogger(__name__)

NoiseSampler = Callable[[NoiseSpec, np.random.Generator, tuple[int, int]], np.ndarray]


def _standardized_t(rng: np.random.Generator, df: int, size: tuple[int, int]) -> np.ndarray:
    return rng.standard_t(df, size=size) / np.sqrt(df / (df - 2.0))


def gaussian_noise(spec: NoiseSpec, rng: np.random.Generator, size: tuple[int, int]) -> np.ndarray:
    return rng.standard_normal(size)


def student_t_noise(spec: NoiseSpec, rng: np.random.Generator, size: tuple[int, int]) -> np.ndarray:
    assert spec.df is not None
    return _standardized_t(rng, spec.df, size)


def mixture_noise(spec: NoiseSpec, rng: np.random.Generator, size: tuple[int, int]) -> np.ndarray:
    # 两个分量均为单位方差，混合后方差仍为 1
    normal = rng.standard_normal(size)
    heavy = _standardized_t(rng, spec.mixture_df, size)
    pick_normal = rng.random(size) < spec.weight
    return np.where(pick_normal, normal, heavy)


NOISE_SAMPLERS: PriorityRegistry[NoiseSampler] = PriorityRegistry("noise sampler")
NOISE_SAMPLERS.register_builtin("gaussian", gaussian_noise, aliases=("normal",))
NOISE_SAMPLERS.register_builtin("t", student_t_noise, aliases=("student_t",))
NOISE_SAMPLERS.register_builtin("mixture", mixture_noise)


def draw_noise(spec: NoiseSpec, rng: np.random.Generator, size: tuple[int, int]) -> np.ndarray:
    """按规格抽取标准化噪声矩阵"""
    sampler = NOISE_SAMPLERS.get(spec.kind)
    return sampler(spec, rng, size)
