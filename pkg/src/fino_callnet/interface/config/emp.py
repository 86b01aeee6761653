from typing import Self

from pydantic import BaseModel, Field, model_validator

from fino_callnet.domain.value.emp import EmpParams


class EmpConfig(BaseModel):
    """
    利益ベースの評価の設定
    - p0, p1: λ の分布の点質量。None の場合は学習セットのデフォルト顧客の λ から推定する
    - roi_grid, lgd_grid: 感度分析のグリッド
    """

    roi: float = Field(gt=0.0, default=0.05)
    lgd: float = Field(gt=0.0, le=1.0, default=0.8)
    p0: float | None = Field(ge=0.0, le=1.0, default=None)
    p1: float | None = Field(ge=0.0, le=1.0, default=None)
    lambda_bins: int = Field(ge=1, default=20)
    roi_grid: tuple[float, ...] = (0.01, 0.025, 0.05, 0.075, 0.1, 0.125, 0.15, 0.175, 0.2)
    lgd_grid: tuple[float, ...] = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)

    @model_validator(mode="after")
    def validate_masses(self) -> Self:
        if (self.p0 or 0.0) + (self.p1 or 0.0) > 1.0:
            raise ValueError(f"p0 + p1 must not exceed 1: {self.p0} + {self.p1}")
        return self

    def params(self, p0: float = 0.0, p1: float = 0.0) -> EmpParams:
        """設定値を優先し、未指定の点質量には推定値を使う"""
        return EmpParams(
            roi=self.roi,
            lgd=self.lgd,
            p0=self.p0 if self.p0 is not None else p0,
            p1=self.p1 if self.p1 is not None else p1,
        )
