"""
合成数据配置数据类

定义随机 DAG 生成与噪声分布的配置结构。
"""

from dataclasses import dataclass

from app.core.errors import DomainError


@dataclass(frozen=True)
class DagGenSpec:
    """
    随机稀疏 DAG 生成规格

    使用示例:

    ```python
    spec = DagGenSpec(p=50, target_edges=100, max_neighborhood=5, edge_weight=0.8)
    model = random_dag(spec, seed=7)
    ```
    """

    # 节点数
    p: int

    # 目标边数 (模拟研究中取为样本量 n)
    target_edges: int

    # 每个节点入度 + 出度上限
    max_neighborhood: int = 5

    # 常数边权 ρ
    edge_weight: float = 0.8

    # 可选的均匀边权区间 (low, high)，设置后覆盖 edge_weight
    weight_range: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.p < 1:
            raise DomainError("p", self.p, "p >= 1")
        if self.target_edges < 1:
            raise DomainError("target_edges", self.target_edges, "positive integers")
        if self.max_neighborhood < 1:
            raise DomainError("max_neighborhood", self.max_neighborhood, "positive integers")
        if self.weight_range is not None:
            low, high = self.weight_range
            if not low <= high:
                raise DomainError("weight_range", self.weight_range, "low <= high")

    @property
    def max_possible_edges(self) -> int:
        """下三角位置总数 p(p-1)/2"""
        return self.p * (self.p - 1) // 2

    @property
    def max_feasible_edges(self) -> int:
        """度上限与位置总数共同允许的最大边数"""
        return min(self.max_possible_edges, self.p * self.max_neighborhood // 2)


@dataclass(frozen=True)
class NoiseSpec:
    """
    潜变量噪声分布 (全部标准化为均值 0、方差 1)

    kind:
    - gaussian: 标准正态
    - t: 自由度 df 的 t 分布，除以 sqrt(df/(df-2))
    - mixture: 以概率 weight 取标准正态，否则取标准化 t(mixture_df)
    """

    kind: str = "gaussian"

    # t 分布自由度
    df: int | None = None

    # 混合分布中正态分量的权重
    weight: float = 0.5

    # 混合分布中 t 分量的自由度
    mixture_df: int = 3

    def __post_init__(self) -> None:
        if self.kind == "t":
            if self.df is None or self.df < 3:
                raise DomainError("df", self.df, "integers >= 3 (finite variance)")
        if self.kind == "mixture":
            if not 0.0 <= self.weight <= 1.0:
                raise DomainError("weight", self.weight, "[0, 1]")
            if self.mixture_df < 3:
                raise DomainError("mixture_df", self.mixture_df, "integers >= 3")

    @classmethod
    def gaussian(cls) -> "NoiseSpec":
        return cls("gaussian")

    @classmethod
    def student_t(cls, df: int) -> "NoiseSpec":
        return cls("t", df=df)

    @classmethod
    def mixture(cls, weight: float = 0.5) -> "NoiseSpec":
        return cls("mixture", weight=weight)

    def label(self) -> str:
        """CLI / 报告中的字符串形式，可被 parse_noise_spec 还原"""
        if self.kind == "t":
            return f"t:{self.df}"
        if self.kind == "mixture":
            return f"mixture:{self.weight:g}"
        return self.kind


def parse_noise_spec(text: str, default_mixture_weight: float = 0.5) -> NoiseSpec:
    """
    解析 --dist 参数

    支持 "gaussian"、"t:DF"、"mixture" 与 "mixture:W"。

    Raises:
        DomainError: 格式无法识别或参数越界
    """
    kind, _, arg = text.strip().partition(":")
    kind = kind.lower()
    try:
        if kind in ("gaussian", "normal") and not arg:
            return NoiseSpec.gaussian()
        if kind in ("t", "student_t") and arg:
            return NoiseSpec.student_t(int(arg))
        if kind == "mixture":
            return NoiseSpec.mixture(float(arg) if arg else default_mixture_weight)
    except ValueError as e:
        if isinstance(e, DomainError):
            raise
        raise DomainError("dist", text, "gaussian | t:DF | mixture:W") from e
    if arg:
        raise DomainError("dist", text, "gaussian | t:DF | mixture:W")
    # 其余名称交给噪声注册表解析 (用户自定义分布)
    return NoiseSpec(kind)
