"""
ランダムフォレストの特徴量重要度
- 利益ベース: 特徴量を含む木の平均利益 − 含まない木の平均利益
- 精度ベース: (a) テスト列の並べ替えによる精度の低下、(b) 木の所属による精度の差
"""

import logging
from collections.abc import Sequence
from typing import Any

import numpy as np
import numpy.typing as npt
from sklearn.inspection import permutation_importance

from fino_callnet.domain.error import DataError
from fino_callnet.domain.service.emp import profit_of_decisions
from fino_callnet.domain.value.emp import EmpParams, LoanOutcome
from fino_callnet.domain.value.feature_matrix import FeatureMatrix
from fino_callnet.domain.value.importance import FeatureImportance, rank_importances
from fino_callnet.domain.value.tree_model import ForestModel

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def membership_difference(
    per_tree: FloatArray, features_used: Sequence[frozenset[int]], n_features: int
) -> list[float | None]:
    """
    木ごとの指標の (特徴量を含む木の平均) − (含まない木の平均)
    どちらかの集合が空なら None
    """
    if len(per_tree) != len(features_used):
        raise DataError("one value per tree is required")
    membership = np.zeros((len(features_used), n_features), dtype=np.bool_)
    for i, used in enumerate(features_used):
        membership[i, list(used)] = True
    result: list[float | None] = []
    for j in range(n_features):
        inside = membership[:, j]
        if inside.all() or not inside.any():
            result.append(None)
        else:
            result.append(float(per_tree[inside].mean() - per_tree[~inside].mean()))
    return result


def per_tree_profit(
    votes: npt.NDArray[np.bool_], loans: Sequence[LoanOutcome], params: EmpParams
) -> FloatArray:
    """各木のクラス予測（True = 拒否）による利益"""
    return np.asarray(
        [float(profit_of_decisions(tree_votes, loans, params.roi)) for tree_votes in votes],
        dtype=np.float64,
    )


def profit_feature_importance(
    forest: ForestModel,
    votes: npt.NDArray[np.bool_],
    loans: Sequence[LoanOutcome],
    params: EmpParams,
    test: FeatureMatrix,
) -> list[FeatureImportance]:
    """平均利益の減少量による重要度（降順）"""
    if votes.shape != (forest.n_trees, test.n_rows):
        raise DataError(f"votes shape {votes.shape} != ({forest.n_trees}, {test.n_rows})")
    if len(loans) != test.n_rows:
        raise DataError(f"{len(loans)} loans for {test.n_rows} test instances")
    profits = per_tree_profit(votes, loans, params)
    values = membership_difference(profits, forest.features_used, test.n_features)
    logger.info(
        "profit importance over %d trees: mean tree profit %.2f, %d undefined features",
        forest.n_trees,
        float(profits.mean()),
        sum(v is None for v in values),
    )
    return rank_importances(
        [
            FeatureImportance(feature=name, group=group, importance=value)
            for name, group, value in zip(test.feature_names, test.group_tags, values)
        ]
    )


def accuracy_feature_importance(
    estimator: Any,
    test: FeatureMatrix,
    seed: int,
    n_repeats: int = 5,
    n_jobs: int | None = None,
) -> list[FeatureImportance]:
    """テスト列を並べ替えたときの精度の低下（学習済みの scikit-learn 推定器を使う）"""
    result = permutation_importance(
        estimator,
        test.values,
        test.target.astype(np.int64),
        scoring="accuracy",
        n_repeats=n_repeats,
        random_state=seed,
        n_jobs=n_jobs,
    )
    means = np.asarray(result["importances_mean"], dtype=np.float64)
    return rank_importances(
        [
            FeatureImportance(feature=name, group=group, importance=float(value))
            for name, group, value in zip(test.feature_names, test.group_tags, means)
        ]
    )


def membership_accuracy_importance(
    forest: ForestModel, votes: npt.NDArray[np.bool_], test: FeatureMatrix
) -> list[FeatureImportance]:
    """木ごとの精度の (特徴量を含む木) − (含まない木)"""
    if votes.shape != (forest.n_trees, test.n_rows):
        raise DataError(f"votes shape {votes.shape} != ({forest.n_trees}, {test.n_rows})")
    accuracy = (votes == test.target[None, :]).mean(axis=1).astype(np.float64)
    values = membership_difference(accuracy, forest.features_used, test.n_features)
    return rank_importances(
        [
            FeatureImportance(feature=name, group=group, importance=value)
            for name, group, value in zip(test.feature_names, test.group_tags, values)
        ]
    )
