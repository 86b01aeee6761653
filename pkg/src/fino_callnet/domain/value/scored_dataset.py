from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from fino_callnet.domain.model import ValueObject


@dataclass(frozen=True, slots=True, eq=False)
class ScoredDataset(ValueObject):
    """
    モデルの予測結果
    - y: デフォルトを正例とするラベル
    - score: 予測デフォルト確率
    - per_tree_votes: ランダムフォレストの場合のみ、木 × インスタンスのクラス予測
    """

    subject_ids: tuple[str, ...]
    y: npt.NDArray[np.bool_]
    score: npt.NDArray[np.float64]
    per_tree_votes: npt.NDArray[np.bool_] | None = None
    model_name: str = ""

    def _validate(self) -> None:
        n = len(self.subject_ids)
        if self.y.shape != (n,) or self.score.shape != (n,):
            raise ValueError("y and score must have one entry per subject")
        if n and (float(self.score.min()) < 0.0 or float(self.score.max()) > 1.0):
            raise ValueError("Scores must lie in [0, 1]")
        if self.per_tree_votes is not None and (
            self.per_tree_votes.ndim != 2 or self.per_tree_votes.shape[1] != n
        ):
            raise ValueError("per_tree_votes must be a (n_trees, n_instances) matrix")

    @property
    def n_instances(self) -> int:
        return len(self.subject_ids)

    @property
    def n_defaulters(self) -> int:
        return int(self.y.sum())

    @property
    def has_both_classes(self) -> bool:
        return 0 < self.n_defaulters < self.n_instances

    def with_scores(self, score: npt.NDArray[np.float64], model_name: str = "") -> "ScoredDataset":
        """同じインスタンスに別のスコアを付けたもの"""
        return ScoredDataset(
            subject_ids=self.subject_ids,
            y=self.y,
            score=score,
            model_name=model_name or self.model_name,
        )
