"""
调参公式

λ_i(α) = 2 n^{-1/2} Z*_{α / (2p(i-1))}，Z*_q 为标准正态的上 q 分位数。
该选择控制"错误连接两个不同祖先集"的概率不超过 α。

分位数采用 Acklam 有理逼近 (相对误差约 1e-9) 加一步 Newton 修正。
"""

import math

from scipy.special import ndtr

from app.core.errors import DomainError

_A = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_B = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_C = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_D = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
_P_LOW = 0.02425

_INV_SQRT_2PI = 1.0 / math.sqrt(2.0 * math.pi)


def _acklam_lower(q: float) -> float:
    """Φ^{-1}(q)，q ∈ (0, 0.5]"""
    if q < _P_LOW:
        t = math.sqrt(-2.0 * math.log(q))
        num = ((((_C[0] * t + _C[1]) * t + _C[2]) * t + _C[3]) * t + _C[4]) * t + _C[5]
        den = (((_D[0] * t + _D[1]) * t + _D[2]) * t + _D[3]) * t + 1.0
        return num / den
    u = q - 0.5
    r = u * u
    num = (((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * u
    den = ((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0
    return num / den


def normal_upper_quantile(q: float) -> float:
    """
    标准正态上 q 分位数 Z*_q，满足 Φ(Z*_q) = 1 - q

    Raises:
        DomainError: q 不在 (0, 0.5]
    """
    if not (0.0 < q <= 0.5):
        raise DomainError("q", q, "(0, 0.5]")
    z = -_acklam_lower(q)
    # Newton: 求解 Φ̄(z) = q，Φ̄(z) = Φ(-z)
    density = _INV_SQRT_2PI * math.exp(-0.5 * z * z)
    z += (float(ndtr(-z)) - q) / density
    return z


def lambda_for_row(i: int, p: int, n: int, alpha: float) -> float:
    """
    第 i 行 (1-based, i >= 2) 的调参 λ_i(α)

    p 为全图节点数 (小行号也使用全图 p)。

    Raises:
        DomainError: i < 2、n < 1 或 α/(2p(i-1)) 不在 (0, 0.5]
    """
    if i < 2:
        raise DomainError("i", i, "row indices >= 2")
    if n < 1:
        raise DomainError("n", n, "n >= 1")
    if p < i:
        raise DomainError("p", p, f"p >= i = {i}")
    q = alpha / (2.0 * p * (i - 1))
    if not (0.0 < q <= 0.5):
        raise DomainError("alpha/(2p(i-1))", q, "(0, 0.5]")
    return 2.0 / math.sqrt(n) * normal_upper_quantile(q)
