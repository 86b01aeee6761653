from typing import Literal

from pydantic import BaseModel, Field, field_validator

from fino_callnet.domain.value.exposure import PropagationMethod, SeedCriterion


def _split(value: object) -> object:
    if isinstance(value, str):
        return [part.strip().lower() for part in value.split(",") if part.strip()]
    return value


class PropagationConfig(BaseModel):
    """
    伝播アルゴリズムのパラメータ
    - alpha: PRで近傍に従う確率（1-alphaがランダムジャンプ）
    - d: SPAで近傍に拡散するエネルギーの割合
    - methods, seed_criteria: 計算する伝播（featurize は全ての組み合わせを使う）
    """

    methods: tuple[PropagationMethod, ...] = tuple(PropagationMethod)
    seed_criteria: tuple[SeedCriterion, ...] = tuple(SeedCriterion)
    alpha: float = Field(gt=0.0, lt=1.0, default=0.85)
    d: float = Field(gt=0.0, lt=1.0, default=0.85)
    tolerance: float = Field(gt=0.0, default=1e-6)
    max_iterations: int = Field(ge=1, default=100)
    pr_norm: Literal["l1", "linf"] = "l1"
    spa_norm: Literal["l1", "linf"] = "linf"
    severity_weighted_seeds: bool = False
    explicit_cutoff: float | None = Field(ge=0.0, default=None)
    """3回以上延滞した顧客がグラフにいない場合に使う曝露スコアのカットオフ"""
    n_jobs: int = Field(default=1)

    @field_validator("methods", mode="before")
    @classmethod
    def parse_methods(cls, value: object) -> object:
        value = _split(value)
        if isinstance(value, (list, tuple)):
            return tuple(PropagationMethod(v.strip().lower()) if isinstance(v, str) else v for v in value)
        return value

    @field_validator("seed_criteria", mode="before")
    @classmethod
    def parse_seed_criteria(cls, value: object) -> object:
        """'ge1,ge3' のようなラベルを受け付ける"""
        value = _split(value)
        if isinstance(value, (list, tuple)):
            return tuple(SeedCriterion.from_label(v.strip().lower()) if isinstance(v, str) else v for v in value)
        return value

    @field_validator("methods", "seed_criteria")
    @classmethod
    def require_one(cls, value: tuple[object, ...]) -> tuple[object, ...]:
        if not value:
            raise ValueError("At least one propagation method and seed criterion is required")
        return tuple(dict.fromkeys(value))
