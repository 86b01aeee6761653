from dataclasses import dataclass
from enum import Enum

from fino_callnet.domain.model import ValueObject


class GraphModeEnum(Enum):
    """通話ネットワークのエッジの向き"""

    IN = "in"
    """着信: neighbors(i) は i に電話をかけた相手"""
    OUT = "out"
    """発信: neighbors(i) は i が電話をかけた相手"""
    UD = "ud"
    """無向: 発着信を区別しない"""


@dataclass(frozen=True, slots=True)
class GraphMode(ValueObject):
    enum: GraphModeEnum

    @property
    def value(self) -> str:
        return self.enum.value

    @property
    def name(self) -> str:
        return self.enum.name

    @property
    def is_directed(self) -> bool:
        return self.enum is not GraphModeEnum.UD

    def _validate(self) -> None:
        if not self.value:
            raise ValueError("Graph mode cannot be empty")


ALL_MODES = tuple(GraphMode(enum=e) for e in GraphModeEnum)
