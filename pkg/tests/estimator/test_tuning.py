"""
调参公式测试
"""

import numpy as np
import pytest
from scipy.special import ndtr

from app.core.errors import DomainError
from app.estimator.tuning import lambda_for_row, normal_upper_quantile


class TestNormalUpperQuantile:
    """标准正态上分位数"""

    @pytest.mark.parametrize(
        ("q", "expected"),
        [(0.5, 0.0), (0.025, 1.959963984540054), (0.001, 3.090232306167814), (0.05, 1.6448536269514722)],
    )
    def test_reference_values(self, q, expected):
        assert normal_upper_quantile(q) == pytest.approx(expected, abs=1e-8)

    def test_inverts_cdf_across_range(self):
        for q in np.geomspace(1e-12, 0.5, 60):
            z = normal_upper_quantile(float(q))

            assert float(ndtr(-z)) == pytest.approx(q, rel=1e-7)

    def test_monotone(self):
        values = [normal_upper_quantile(float(q)) for q in np.linspace(0.01, 0.5, 50)]

        assert all(a > b for a, b in zip(values, values[1:], strict=False))

    @pytest.mark.parametrize("q", [0.0, -0.1, 0.51, 1.0])
    def test_outside_domain(self, q):
        with pytest.raises(DomainError):
            normal_upper_quantile(q)


class TestLambdaForRow:
    """行调参 λ_i(α) = 2 n^{-1/2} Z*_{α/(2p(i-1))}"""

    def test_reference_value(self):
        # Arrange: q = 0.1 / (2 · 50 · 1) = 0.001

        # Act
        lam = lambda_for_row(2, 50, 100, 0.1)

        # Assert
        assert lam == pytest.approx(0.2 * 3.090232306167814, abs=1e-8)
        assert lam == pytest.approx(0.61805, abs=1e-5)

    def test_sample_size_scaling(self):
        small = lambda_for_row(7, 20, 100, 0.05)
        large = lambda_for_row(7, 20, 400, 0.05)

        assert large == pytest.approx(small / 2.0, rel=1e-15)

    def test_nondecreasing_in_row(self):
        values = [lambda_for_row(i, 30, 100, 0.1) for i in range(2, 31)]

        assert all(b >= a for a, b in zip(values, values[1:], strict=False))

    def test_uses_full_node_count(self):
        # 同一行，p 越大 λ 越大
        assert lambda_for_row(2, 100, 50, 0.1) > lambda_for_row(2, 10, 50, 0.1)

    def test_rejects_first_row(self):
        with pytest.raises(DomainError):
            lambda_for_row(1, 5, 100, 0.1)

    def test_rejects_row_beyond_p(self):
        with pytest.raises(DomainError):
            lambda_for_row(6, 5, 100, 0.1)

    def test_rejects_empty_sample(self):
        with pytest.raises(DomainError):
            lambda_for_row(2, 5, 0, 0.1)

    def test_quantile_argument_above_half(self):
        # p=2, i=2: q = α / 4
        assert lambda_for_row(2, 2, 10, 0.99) > 0.0
        with pytest.raises(DomainError):
            lambda_for_row(2, 2, 10, 2.5)
