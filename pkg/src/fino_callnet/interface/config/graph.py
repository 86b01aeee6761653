from typing import Literal

from pydantic import BaseModel, field_validator

from fino_callnet.domain.value.graph_mode import GraphModeEnum


class GraphConfig(BaseModel):
    """
    通話ネットワークの構築設定
    - weight: エッジ重み（通話回数 / 通話時間の合計）
    """

    modes: tuple[GraphModeEnum, ...] = tuple(GraphModeEnum)
    weight: Literal["count", "duration"] = "count"

    @field_validator("modes", mode="before")
    @classmethod
    def parse_modes(cls, value: object) -> object:
        if isinstance(value, str):
            value = [part for part in value.split(",") if part.strip()]
        if isinstance(value, (list, tuple)):
            return tuple(GraphModeEnum(item.strip().lower()) if isinstance(item, str) else item for item in value)
        return value
