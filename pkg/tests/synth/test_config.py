"""
合成数据配置、噪声注册表与种子派生测试
"""

import numpy as np
import pytest

from app.core.errors import DomainError
from app.core.registry import UnknownEntryError
from app.synth.config import DagGenSpec, NoiseSpec, parse_noise_spec
from app.synth.noise import NOISE_SAMPLERS, draw_noise
from app.synth.seeds import SeedStream, derive_seed


class TestDagGenSpec:
    """DagGenSpec 校验与可行边数"""

    def test_feasible_edges_bounded_by_cap(self):
        spec = DagGenSpec(p=50, target_edges=100, max_neighborhood=5)

        assert spec.max_possible_edges == 1225
        assert spec.max_feasible_edges == 125

    def test_feasible_edges_bounded_by_positions(self):
        assert DagGenSpec(p=3, target_edges=1, max_neighborhood=4).max_feasible_edges == 3

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"p": 0, "target_edges": 1},
            {"p": 3, "target_edges": 0},
            {"p": 3, "target_edges": 1, "max_neighborhood": 0},
            {"p": 3, "target_edges": 1, "weight_range": (1.0, 0.5)},
        ],
    )
    def test_invalid_specs(self, kwargs):
        with pytest.raises(DomainError):
            DagGenSpec(**kwargs)


class TestNoiseSpec:
    """NoiseSpec 与 --dist 解析"""

    def test_t_requires_finite_variance(self):
        with pytest.raises(DomainError):
            NoiseSpec.student_t(2)

    def test_mixture_weight_range(self):
        with pytest.raises(DomainError):
            NoiseSpec.mixture(1.5)

    @pytest.mark.parametrize(
        ("text", "expected"),
        [
            ("gaussian", NoiseSpec.gaussian()),
            ("normal", NoiseSpec.gaussian()),
            ("t:4", NoiseSpec.student_t(4)),
            ("mixture:0.3", NoiseSpec.mixture(0.3)),
            ("mixture", NoiseSpec.mixture(0.5)),
        ],
    )
    def test_parse(self, text, expected):
        assert parse_noise_spec(text) == expected

    def test_parse_mixture_uses_configured_default(self):
        assert parse_noise_spec("mixture", default_mixture_weight=0.8).weight == 0.8

    @pytest.mark.parametrize("text", ["t", "t:x", "gaussian:2", "mixture:abc", "t:2"])
    def test_parse_rejects(self, text):
        with pytest.raises(DomainError):
            parse_noise_spec(text)

    def test_label_round_trips(self):
        for spec in (NoiseSpec.gaussian(), NoiseSpec.student_t(4), NoiseSpec.mixture(0.25)):
            assert parse_noise_spec(spec.label()) == spec


class TestNoiseRegistry:
    """噪声采样器注册表"""

    def test_builtin_kinds(self):
        assert NOISE_SAMPLERS.list_builtin() == ["gaussian", "t", "mixture"]

    def test_user_sampler_is_used(self):
        # Arrange
        def constant(spec, rng, size):
            return np.full(size, 0.5)

        NOISE_SAMPLERS.register("constant_test", constant)
        try:
            # Act
            z = draw_noise(NoiseSpec("constant_test"), np.random.default_rng(0), (2, 3))

            # Assert
            np.testing.assert_array_equal(z, np.full((2, 3), 0.5))
        finally:
            NOISE_SAMPLERS.unregister("constant_test")

    def test_unknown_kind(self):
        with pytest.raises(UnknownEntryError):
            draw_noise(NoiseSpec("cauchy"), np.random.default_rng(0), (2, 2))

    def test_mixture_extremes(self):
        """weight = 1 时全部取正态分量"""
        rng_a = np.random.default_rng(1)
        rng_b = np.random.default_rng(1)

        mixed = draw_noise(NoiseSpec.mixture(1.0), rng_a, (100, 2))
        normal = rng_b.standard_normal((100, 2))

        np.testing.assert_array_equal(mixed, normal)


class TestDeriveSeed:
    """种子派生"""

    def test_deterministic(self):
        assert derive_seed(7, 1, 2, SeedStream.DATA) == derive_seed(7, 1, 2, SeedStream.DATA)

    def test_streams_and_indices_differ(self):
        seeds = {
            derive_seed(7, cell, r, stream)
            for cell in range(3)
            for r in range(3)
            for stream in SeedStream
        }

        assert len(seeds) == 27

    def test_nonnegative_63_bit(self):
        seed = derive_seed(2**40, 10, 999, SeedStream.PERMUTATION)

        assert 0 <= seed < 2**63
