from dataclasses import dataclass
from enum import Enum

from fino_callnet.domain.model import ValueObject


class FeatureGroupEnum(Enum):
    """特徴量グループ"""

    SD = "SD"
    """社会人口統計・デビット口座の利用行動"""
    CB = "CB"
    """通話行動"""
    LB = "LB"
    """リンクベース（近傍の延滞顧客）"""
    PR = "PR"
    """Personalized PageRank の曝露スコアとリンク特徴量"""
    SPA = "SPA"
    """Spreading Activation の曝露スコアとリンク特徴量"""


@dataclass(frozen=True, slots=True)
class FeatureGroup(ValueObject):
    enum: FeatureGroupEnum

    @property
    def value(self) -> str:
        return self.enum.value

    @property
    def name(self) -> str:
        return self.enum.name

    def _validate(self) -> None:
        if not self.value:
            raise ValueError("Feature group cannot be empty")


# モデルID → 特徴量グループ
MODEL_FEATURE_GROUPS: dict[str, tuple[FeatureGroupEnum, ...]] = {
    "A": (FeatureGroupEnum.SD,),
    "B": (FeatureGroupEnum.CB,),
    "C": (FeatureGroupEnum.LB,),
    "D": (FeatureGroupEnum.PR,),
    "E": (FeatureGroupEnum.SPA,),
    "F": (FeatureGroupEnum.SD, FeatureGroupEnum.CB),
    "G": (
        FeatureGroupEnum.CB,
        FeatureGroupEnum.LB,
        FeatureGroupEnum.PR,
        FeatureGroupEnum.SPA,
    ),
    "H": tuple(FeatureGroupEnum),
}
