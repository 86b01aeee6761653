from typing import Self

from pydantic import BaseModel, Field, field_validator, model_validator

from fino_callnet.domain.value.feature_group import FeatureGroupEnum


class FeatureConfig(BaseModel):
    """
    特徴量抽出の設定
    - day_start_hour, day_end_hour: 通話の昼/夜の境界（昼は [start, end)）
    - loyalty_k: ロイヤルティで数える上位ビンの数
    - groups: 作る特徴量グループ（None ならモデルが使うグループ）
    - corr_threshold: 相関による特徴量削除の閾値 |ρ|
    """

    groups: tuple[FeatureGroupEnum, ...] | None = None
    day_start_hour: int = Field(ge=0, le=23, default=8)
    day_end_hour: int = Field(ge=1, le=24, default=20)
    loyalty_k: int = Field(ge=1, le=7, default=3)
    corr_threshold: float = Field(gt=0.0, le=1.0, default=0.95)
    n_jobs: int = Field(default=1)

    @field_validator("groups", mode="before")
    @classmethod
    def parse_groups(cls, value: object) -> object:
        """'sd,cb,lb' のようなカンマ区切りも受け付ける"""
        if isinstance(value, str):
            value = [part for part in value.split(",") if part.strip()]
        if isinstance(value, (list, tuple)):
            return tuple(
                FeatureGroupEnum(item.strip().upper()) if isinstance(item, str) else item
                for item in value
            )
        return value

    @model_validator(mode="after")
    def validate_day_window(self) -> Self:
        if self.day_start_hour >= self.day_end_hour:
            raise ValueError("day_start_hour must be earlier than day_end_hour")
        if self.groups is not None and not self.groups:
            raise ValueError("At least one feature group is required")
        return self
