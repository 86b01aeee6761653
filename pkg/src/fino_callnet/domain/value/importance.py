import math
from dataclasses import dataclass

from fino_callnet.domain.model import ValueObject
from fino_callnet.domain.value.feature_group import FeatureGroupEnum


@dataclass(frozen=True, slots=True)
class FeatureImportance(ValueObject):
    """
    1つの特徴量の重要度
    importance が None の場合は定義できない（全ての木に含まれる、またはどの木にも含まれない）
    """

    feature: str
    group: FeatureGroupEnum
    importance: float | None

    def _validate(self) -> None:
        if not self.feature:
            raise ValueError("Feature name cannot be empty")
        if self.importance is not None and math.isnan(self.importance):
            raise ValueError("Use None rather than NaN for undefined importance")

    @property
    def is_defined(self) -> bool:
        return self.importance is not None


def rank_importances(items: list[FeatureImportance]) -> list[FeatureImportance]:
    """重要度の降順。定義できないものは末尾（名前順）"""
    defined = sorted(
        (item for item in items if item.importance is not None),
        key=lambda item: (-(item.importance or 0.0), item.feature),
    )
    undefined = sorted((item for item in items if item.importance is None), key=lambda item: item.feature)
    return defined + undefined
