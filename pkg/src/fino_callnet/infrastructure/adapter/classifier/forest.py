import logging
import math
from dataclasses import asdict
from typing import Any

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed
from sklearn.ensemble import RandomForestClassifier

from fino_callnet.domain.error import DataError
from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.scored_dataset import ScoredDataset
from fino_callnet.domain.value.tree_model import ForestModel
from fino_callnet.infrastructure.adapter.classifier.tree import export_tree
from fino_callnet.interface.config.model import ModelConfig

logger = logging.getLogger(__name__)

VOTE_THRESHOLD = 0.5


def default_mtry(n_features: int) -> int:
    return max(1, math.ceil(math.sqrt(n_features)))


class ForestClassifier:
    """
    ランダムフォレスト（木ごとのブートストラップ + 分割ごとに mtry 個の特徴量）
    - score: 木ごとのデフォルト確率の平均
    - per_tree_votes: 木ごとのクラス予測（確率 0.5 以上をデフォルトとする）
    """

    name = "forest"

    def __init__(self, config: ModelConfig, seed: int) -> None:
        self.config = config
        self.seed = seed
        self._forest: RandomForestClassifier | None = None
        self.mtry = 0

    @property
    def estimator(self) -> RandomForestClassifier:
        if self._forest is None:
            raise RuntimeError("ForestClassifier is not fitted")
        return self._forest

    def fit(self, train: FeatureMatrix) -> None:
        if train.n_features == 0:
            raise DataError("random forest needs at least one feature")
        mtry = self.config.mtry or default_mtry(train.n_features)
        if mtry > train.n_features:
            raise DataError(f"mtry={mtry} exceeds the number of features ({train.n_features})")
        forest = RandomForestClassifier(
            n_estimators=self.config.n_trees,
            criterion="gini",
            max_features=mtry,
            min_samples_leaf=self.config.min_samples_leaf,
            max_depth=self.config.max_depth,
            bootstrap=self.config.bootstrap,
            random_state=self.seed,
            n_jobs=self.config.n_jobs,
        )
        forest.fit(train.values, train.target)
        self._forest = forest
        self.mtry = mtry
        logger.info(
            "random forest fitted: %d trees, mtry=%d, %d rows x %d features",
            len(forest.estimators_),
            mtry,
            train.n_rows,
            train.n_features,
        )

    def tree_probabilities(self, values: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
        """木 × インスタンスのデフォルト確率"""
        classes = list(self.estimator.classes_)
        if True not in classes:
            return np.zeros((len(self.estimator.estimators_), len(values)), dtype=np.float64)
        column = classes.index(True)
        rows = Parallel(n_jobs=self.config.n_jobs, prefer="threads")(
            delayed(tree.predict_proba)(values) for tree in self.estimator.estimators_
        )
        return np.vstack([np.asarray(row, dtype=np.float64)[:, column] for row in rows])

    def predict(self, test: FeatureMatrix) -> ScoredDataset:
        return predict_per_tree(self, test)

    def forest_model(self) -> ForestModel:
        classes = self.estimator.classes_
        return ForestModel(
            trees=tuple(export_tree(tree, classes) for tree in self.estimator.estimators_),
            seeds=tuple(int(tree.random_state) for tree in self.estimator.estimators_),
            mtry=self.mtry,
        )

    def export(self) -> dict[str, Any]:
        model = self.forest_model()
        return {
            "kind": self.name,
            "mtry": model.mtry,
            "bootstrap": self.config.bootstrap,
            "trees": [
                {
                    "seed": seed,
                    "depth": tree.depth,
                    "features_used": sorted(tree.features_used),
                    "nodes": [asdict(node) for node in tree.nodes],
                }
                for seed, tree in zip(model.seeds, model.trees)
            ],
        }


def train_forest(train: FeatureMatrix, config: ModelConfig, seed: int) -> ForestClassifier:
    classifier = ForestClassifier(config, seed)
    classifier.fit(train)
    return classifier


def predict_per_tree(classifier: ForestClassifier, test: FeatureMatrix) -> ScoredDataset:
    """フォレストのスコアと木ごとのクラス予測"""
    per_tree = classifier.tree_probabilities(test.values)
    return ScoredDataset(
        subject_ids=test.subject_ids,
        y=test.target,
        score=np.clip(per_tree.mean(axis=0), 0.0, 1.0),
        per_tree_votes=per_tree >= VOTE_THRESHOLD,
        model_name=classifier.name,
    )
