"""
Synth 合成数据层

主要组件：
- DagGenSpec / NoiseSpec: 生成规格
- random_dag: 受度上限约束的随机稀疏 DAG
- sample_data: 潜变量模型采样 (gaussian / t / mixture 噪声)
- permute_columns / inverse_permutation: 列顺序扰动
- NOISE_SAMPLERS: 噪声采样器注册表
- derive_seed: 与调度无关的种子派生
"""

from app.synth.config import DagGenSpec, NoiseSpec, parse_noise_spec
from app.synth.generator import inverse_permutation, permute_columns, random_dag, sample_data
from app.synth.noise import NOISE_SAMPLERS, draw_noise
from app.synth.seeds import SeedStream, derive_seed

__all__ = [
    "DagGenSpec",
    "NoiseSpec",
    "parse_noise_spec",
    "random_dag",
    "sample_data",
    "permute_columns",
    "inverse_permutation",
    "NOISE_SAMPLERS",
    "draw_noise",
    "SeedStream",
    "derive_seed",
]
