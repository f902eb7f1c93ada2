"""
DAG 估计工具 - 配置模块

三层配置优先级系统:
  Layer 3: CLI 参数 / 函数参数  ← 运行时覆盖 (最高，通过 init 参数传递)
  Layer 2: 环境变量 / .env       ← 机器相关设置
  Layer 1: configuration.yaml     ← 实验默认值 (可提交)
  Defaults: 代码中的默认值

管理：
- 估计器默认参数 (alpha, alpha0, gamma, 求解器容差)
- 合成数据默认参数 (最大邻域、边权、混合权重)
- 运行配置 (并行 worker 数、输出目录、日志级别)

YAML 配置说明:
  本模块只读取 configuration.yaml 的顶级 key 来填充 Settings 字段。

  示例 configuration.yaml:
    alpha: 0.1
    alpha0: 0.5
    workers: 4
"""

import logging
from pathlib import Path
from typing import Any

import yaml
from pydantic import Field
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
)


logger = logging.getLogger(__name__)

# 实验默认值文件 (仓库根目录)
CONFIG_PATH = Path(__file__).parent.parent / "configuration.yaml"


def load_yaml_defaults(path: Path) -> dict[str, Any]:
    """读取 YAML 顶级映射；文件缺失、无法解析或不是映射时返回空字典"""
    if not path.exists():
        return {}
    try:
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except (yaml.YAMLError, OSError) as e:
        logger.warning(f"Ignoring {path.name}: {e}")
        return {}
    if data is None:
        return {}
    if not isinstance(data, dict):
        logger.warning(f"Ignoring {path.name}: top level is not a mapping")
        return {}
    return data


class YamlConfigSettingsSource(PydanticBaseSettingsSource):
    """configuration.yaml 配置源 (只取与 Settings 字段同名且非空的顶级 key)"""

    def __init__(self, settings_cls: type[BaseSettings]):
        super().__init__(settings_cls)
        self._yaml_data = load_yaml_defaults(CONFIG_PATH)

    def get_field_value(self, field: Any, field_name: str) -> tuple[Any, str, bool]:
        return self._yaml_data.get(field_name), field_name, False

    def __call__(self) -> dict[str, Any]:
        known = self.settings_cls.model_fields
        return {key: value for key, value in self._yaml_data.items() if key in known and value is not None}


class Settings(BaseSettings):
    """应用配置类 - 三层优先级加载"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )

    # ----------------- 估计器 -----------------

    alpha: float = Field(default=0.10, gt=0.0, lt=1.0, alias="DAG_ALPHA")
    alpha0: float = Field(default=0.50, gt=0.0, lt=1.0, alias="DAG_ALPHA0")
    gamma: float = Field(default=1.0, gt=0.0, alias="DAG_GAMMA")
    tol: float = Field(default=1e-7, gt=0.0, alias="DAG_TOL")
    max_sweeps: int = Field(default=10_000, ge=1, alias="DAG_MAX_SWEEPS")
    edge_threshold: float = Field(default=1e-4, ge=0.0, alias="DAG_EDGE_THRESHOLD")

    # ----------------- 合成数据 -----------------

    max_neighborhood: int = Field(default=5, ge=1, alias="DAG_MAX_NEIGHBORHOOD")
    edge_weight: float = Field(default=0.8, alias="DAG_RHO")
    mixture_weight: float = Field(default=0.5, ge=0.0, le=1.0, alias="DAG_MIXTURE_WEIGHT")

    # ----------------- 运行配置 -----------------

    workers: int = Field(default=1, ge=1, alias="DAG_WORKERS")
    output_dir: str = Field(default="results", alias="DAG_OUTPUT_DIR")
    debug_mode: bool = Field(default=False, alias="DEBUG_MODE")

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        # CLI (init) > 环境变量 > .env > configuration.yaml；没有密钥文件
        return init_settings, env_settings, dotenv_settings, YamlConfigSettingsSource(settings_cls)


_settings: Settings | None = None


def get_settings() -> Settings:
    """获取配置实例"""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """清除缓存的配置实例 (测试用)"""
    global _settings
    _settings = None
