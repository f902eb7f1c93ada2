"""
优先级注册表抽象基类

实现两层优先级系统的共享逻辑：
1. Builtin 级：库内置项目（最低优先级）
2. User 级：调用方注册的项目（覆盖同名内置项）

用于噪声分布 (synth) 与惩罚类型 (estimator) 的按名查找。
"""

import logging
from enum import Enum
from typing import Generic, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


class RegistryLevel(Enum):
    """注册表优先级层"""

    BUILTIN = "builtin"
    USER = "user"


class RegistryConflictError(Exception):
    """
    同层级注册冲突异常

    当尝试在同一层级注册已存在的同名项目时抛出。
    跨层级同名允许（User 级覆盖 Builtin 级是设计意图）。
    """

    def __init__(self, name: str, level: RegistryLevel):
        super().__init__(f"'{name}' already registered at {level.value} level")
        self.name = name
        self.level = level


class UnknownEntryError(KeyError):
    """按名查找失败"""

    def __init__(self, name: str, known: list[str]):
        super().__init__(f"unknown entry '{name}'; known: {', '.join(sorted(known))}")
        self.name = name
        self.known = known


class PriorityRegistry(Generic[T]):
    """
    两层优先级注册表

    使用示例:

    ```python
    registry: PriorityRegistry[NoiseSampler] = PriorityRegistry("noise")
    registry.register_builtin("gaussian", gaussian_sampler)
    registry.register("gaussian", my_sampler)  # 覆盖内置项
    sampler = registry.get("gaussian")
    ```
    """

    def __init__(self, kind: str = "item"):
        self.kind = kind
        self._builtin_items: dict[str, T] = {}
        self._user_items: dict[str, T] = {}
        self._aliases: dict[str, str] = {}

    def _check_conflict(
        self,
        registry: dict[str, T],
        name: str,
        level: RegistryLevel,
    ) -> None:
        """
        检测同层级冲突

        Raises:
            RegistryConflictError: 如果同层级已存在同名项目
        """
        if name in registry:
            raise RegistryConflictError(name, level)

    def register_builtin(self, name: str, item: T, aliases: tuple[str, ...] = ()) -> None:
        """注册 Builtin 级项目"""
        self._check_conflict(self._builtin_items, name, RegistryLevel.BUILTIN)
        self._builtin_items[name] = item
        for alias in aliases:
            self._aliases[alias] = name
        logger.debug("Registered builtin %s: %s", self.kind, name)

    def register(self, name: str, item: T) -> None:
        """注册 User 级项目，同名时覆盖 Builtin 级"""
        self._check_conflict(self._user_items, name, RegistryLevel.USER)
        self._user_items[name] = item
        if name in self._builtin_items:
            logger.info("User %s '%s' overrides the builtin entry", self.kind, name)

    def unregister(self, name: str) -> None:
        """移除 User 级项目 (Builtin 级不可移除)"""
        self._user_items.pop(name, None)

    def resolve_name(self, name: str) -> str:
        """解析别名"""
        return self._aliases.get(name, name)

    def get(self, name: str) -> T:
        """
        按名获取项目 (User > Builtin)

        Raises:
            UnknownEntryError: 两层均未注册
        """
        key = self.resolve_name(name)
        if key in self._user_items:
            return self._user_items[key]
        if key in self._builtin_items:
            return self._builtin_items[key]
        raise UnknownEntryError(name, self.list_names())

    def __contains__(self, name: object) -> bool:
        if not isinstance(name, str):
            return False
        key = self.resolve_name(name)
        return key in self._user_items or key in self._builtin_items

    def list_names(self) -> list[str]:
        """列出所有可用名称 (去重，不含别名)"""
        return sorted(set(self._builtin_items) | set(self._user_items))

    def list_builtin(self) -> list[str]:
        """列出所有 Builtin 级名称"""
        return list(self._builtin_items.keys())
