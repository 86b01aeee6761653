from typing import Literal, Self

from pydantic import BaseModel, Field, model_validator


class SynthConfig(BaseModel):
    """
    合成データ（CDR + 銀行データ + 正解ラベル）の生成設定
    - n_subjects: 全タイムフレーム合計の対象者数（n_nodes 以下）
    - bank_share: 対象者以外のノードのうち、以前からカードを持つ銀行顧客の割合（伝播の情報源になる）
    - homophily_strength: ラベルの異なるノード間の辺の採択確率を 1/homophily_strength にする（1 でランダム混合）
    - planted_feature_effect: 潜在リスクがデフォルトのロジットに与える効果（0 で特徴量に信号なし）
    - contagion: 近傍のデフォルト割合がロジットに与える効果
    """

    n_nodes: int = Field(ge=2, default=3000)
    n_subjects: int = Field(ge=1, default=900)
    bank_share: float = Field(ge=0.0, le=1.0, default=0.3)
    months: int = Field(ge=1, le=24, default=3)
    n_timeframes: int = Field(ge=1, le=12, default=3)
    first_card_year: int = Field(ge=1900, le=2100, default=2017)
    first_card_month: int = Field(ge=1, le=12, default=4)
    default_rate: float = Field(gt=0.0, lt=1.0, default=0.0449)
    homophily_strength: float = Field(gt=0.0, default=4.0)
    degree_model: Literal["power_law", "poisson"] = "power_law"
    mean_degree: float = Field(gt=0.0, default=8.0)
    degree_exponent: float = Field(gt=2.0, default=2.5)
    max_degree: int = Field(ge=1, default=200)
    calls_per_edge: float = Field(ge=1.0, default=3.0)
    short_call_share: float = Field(ge=0.0, lt=1.0, default=0.05)
    planted_feature_effect: float = Field(ge=0.0, default=1.5)
    contagion: float = Field(ge=0.0, default=1.0)
    missing_share: float = Field(ge=0.0, lt=1.0, default=0.02)
    seed: int = Field(ge=0, default=0)

    @model_validator(mode="after")
    def validate_population(self) -> Self:
        if self.n_subjects > self.n_nodes:
            raise ValueError(f"n_subjects ({self.n_subjects}) cannot exceed n_nodes ({self.n_nodes})")
        if self.mean_degree >= self.n_nodes - 1:
            raise ValueError(f"mean_degree ({self.mean_degree}) must be below n_nodes - 1")
        return self
