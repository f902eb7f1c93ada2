"""
EstimationConfig 测试
"""

import pytest

from app.config import Settings
from app.core.errors import DomainError
from app.estimator.config import EstimationConfig, normalize_penalty


class TestNormalizePenalty:
    def test_alias_and_case(self):
        assert normalize_penalty("alasso") == "adaptive_lasso"
        assert normalize_penalty(" LASSO ") == "lasso"


class TestEstimationConfig:
    """校验与 Settings 衔接"""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"alpha": 0.0},
            {"alpha": 1.0},
            {"alpha0": 1.5},
            {"gamma": 0.0},
            {"tol": 0.0},
            {"max_sweeps": 0},
            {"edge_threshold": -1e-4},
            {"n_jobs": 0},
        ],
    )
    def test_out_of_domain_rejected(self, kwargs):
        with pytest.raises(DomainError):
            EstimationConfig(**kwargs)

    def test_penalty_alias_normalized(self):
        assert EstimationConfig(penalty="alasso").penalty == "adaptive_lasso"

    def test_from_settings_with_overrides(self):
        # Arrange
        settings = Settings(alpha=0.05, gamma=2.0, workers=3, _env_file=None)

        # Act
        cfg = EstimationConfig.from_settings(settings, penalty="lasso", gamma=None, unknown=1)

        # Assert
        assert cfg.penalty == "lasso"
        assert cfg.alpha == 0.05
        assert cfg.gamma == 2.0  # None 不覆盖
        assert cfg.n_jobs == 3

    def test_to_dict(self):
        assert EstimationConfig().to_dict()["penalty"] == "adaptive_lasso"
