from typing import Literal

from pydantic import BaseModel, Field

ClassifierKind = Literal["logit", "tree", "forest"]


class ModelConfig(BaseModel):
    """
    分類器とデータプロトコルの設定
    - train_fraction: 学習セットの割合（残りがテストセット）
    - undersample_ratio: アンダーサンプリング後の 少数派:多数派（None で行わない）
    - mtry: 分割ごとに候補とする特徴量の数（None で ⌈√M⌉）
    """

    classifier: ClassifierKind = "forest"
    train_fraction: float = Field(gt=0.0, lt=1.0, default=0.7)
    stratified: bool = True
    undersample_ratio: float | None = Field(gt=0.0, le=1.0, default=1.0)

    # logistic regression
    logit_c: float = Field(gt=0.0, default=1e6)
    logit_tol: float = Field(gt=0.0, default=1e-8)
    logit_max_iter: int = Field(ge=1, default=10_000)

    # decision tree
    cv_folds: int = Field(ge=2, default=10)
    ccp_grid_size: int = Field(ge=1, default=20)
    min_samples_leaf: int = Field(ge=1, default=5)

    # random forest
    n_trees: int = Field(ge=1, default=500)
    mtry: int | None = Field(ge=1, default=None)
    max_depth: int | None = Field(ge=1, default=None)
    bootstrap: bool = True

    n_jobs: int | None = None

