from dataclasses import dataclass

from fino_callnet.domain.value.feature_group import FeatureGroupEnum
from fino_callnet.interface.config.model import ClassifierKind, ModelConfig


@dataclass(frozen=True, slots=True)
class ModelSpec:
    """学習するモデル（モデル ID と分類器の組）"""

    model_id: str
    classifier: ClassifierKind
    groups: tuple[FeatureGroupEnum, ...]

    @property
    def name(self) -> str:
        return f"{self.model_id}-{self.classifier}"


@dataclass(frozen=True, slots=True)
class TrainInput:
    models: list[ModelSpec]
    config: ModelConfig
    seed: int = 0
