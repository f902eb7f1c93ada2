"""
可拆分随机种子

种子由 (base_seed, cell, replicate, stream) 经 numpy SeedSequence 派生，
与并行调度顺序无关。
"""

from enum import IntEnum

import numpy as np


class SeedStream(IntEnum):
    """同一 replicate 内的独立随机流"""

    DAG = 0
    DATA = 1
    PERMUTATION = 2


def derive_seed(base_seed: int, cell: int, replicate: int, stream: SeedStream) -> int:
    """派生 63 位整数种子"""
    sequence = np.random.SeedSequence(entropy=base_seed, spawn_key=(cell, replicate, int(stream)))
    return int(sequence.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
