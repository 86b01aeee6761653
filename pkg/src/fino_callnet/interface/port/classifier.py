from typing import Any, Protocol

from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.scored_dataset import ScoredDataset


class ClassifierPort(Protocol):
    """デフォルト確率を予測する分類器"""

    name: str

    @property
    def estimator(self) -> Any:
        """学習済みの scikit-learn 推定器"""
        ...

    def fit(self, train: FeatureMatrix) -> None: ...

    def predict(self, test: FeatureMatrix) -> ScoredDataset: ...

    def export(self) -> dict[str, Any]:
        """JSON に書き出せるモデル構造（係数・木の構造）"""
        ...
