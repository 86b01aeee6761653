from abc import ABC, abstractmethod
from dataclasses import asdict, fields, is_dataclass
from decimal import Decimal
from enum import Enum
from typing import Any

import numpy as np


class Entity(ABC):
    """
    同一性を持つドメインオブジェクト
    identityが等しければ同一とみなす
    """

    @property
    @abstractmethod
    def identity(self) -> tuple[str, ...]: ...

    def __eq__(self, other: Any) -> bool:
        if isinstance(other, type(self)):
            return self.identity == other.identity
        return False

    def __hash__(self) -> int:
        return hash(self.identity)


class AggregateRoot(Entity):
    """集約のルート。集約内のオブジェクトはルート経由でのみ参照する"""


def _plain(value: Any) -> Any:
    match value:
        case Decimal():
            return str(value)
        case Enum():
            return value.value
        case np.generic():
            return value.item()
        case np.ndarray():
            return [_plain(v) for v in value.tolist()]
        case dict():
            return {str(k): _plain(v) for k, v in value.items()}
        case list() | tuple() | frozenset():
            return [_plain(v) for v in value]
        case _:
            return value


class ValueObject(ABC):
    """
    値オブジェクト
    @dataclass を付けて継承する。生成時に _validate で状態を検証する
    """

    def __post_init__(self) -> None:
        self._validate()

    @abstractmethod
    def _validate(self) -> None: ...

    def to_dict(self) -> dict[str, Any]:
        """JSON に書ける dict（Decimal は文字列、Enum は値）"""
        if not is_dataclass(self):
            raise TypeError(f"{type(self).__name__} is not a dataclass")
        data = asdict(self) if fields(self) else {}
        return {key: _plain(value) for key, value in data.items()}
